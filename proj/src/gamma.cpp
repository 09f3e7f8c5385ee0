#include "sigmalab/gamma.hpp"

#include <algorithm>
#include <cmath>

#include "sigmalab/errors.hpp"

namespace sigmalab {

namespace {

constexpr double kGaussX[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                               0.9061798459386640};
constexpr double kGaussW[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};

double gauss5(const ScalarFn& f, double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += kGaussW[i] * f(c + r * kGaussX[i]);
    return r * s;
}

}  // namespace

double sat_energy(const SbpOperator& op, const SatConfig& sat, const Eigen::VectorXd& u) {
    const double tau = sat.tau(op.h);
    return 0.5 * tau * (u(0) * u(0) + u(op.n - 1) * u(op.n - 1));
}

double discrete_energy(const SbpOperator& op, const Eigen::VectorXd& A, const Eigen::VectorXd& C,
                       const std::optional<SatConfig>& sat, const Eigen::VectorXd& u) {
    if (A.size() != op.n || C.size() != op.n || u.size() != op.n)
        throw DomainError("discrete_energy: dimension mismatch");
    if ((A.array() < 0.0).any() || (C.array() < 0.0).any())
        throw DomainError("discrete_energy: coefficients must be nonnegative");
    double e = 0.5 * gradient_form(op, A, u, u) + 0.5 * u.dot(op.H.cwiseProduct(C).cwiseProduct(u));
    if (sat) {
        if (sat->tau(op.h) < 0.0)
            throw ConfigError("sat", "negative SAT form: tau_h must be nonnegative for the energy");
        e += sat_energy(op, *sat, u);
    }
    return e;
}

Eigen::VectorXd project_dual_cells(const SbpOperator& op, const ScalarFn& u) {
    if (op.order != 2) throw DomainError("project_dual_cells: defined for order-2 norms");
    const Eigen::VectorXd x = op.nodes();
    Eigen::VectorXd p(op.n);
    for (int i = 0; i < op.n; ++i) {
        const double a = std::max(op.x0, x(i) - 0.5 * op.h);
        const double b = std::min(op.x0 + op.L, x(i) + 0.5 * op.h);
        p(i) = gauss5(u, a, b) / op.H(i);
    }
    return p;
}

double continuum_energy(const ScalarFn& du, const ScalarFn& u, const ScalarFn& A, const ScalarFn& C,
                        double L, int m) {
    const double g = 1.0 / std::sqrt(3.0);
    const double dx = L / m;
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
        const double c = (k + 0.5) * dx;
        for (double xi : {-g, g}) {
            const double x = c + 0.5 * dx * xi;
            const double d = du(x), v = u(x);
            s += 0.5 * dx * (A(x) * d * d + C(x) * v * v);
        }
    }
    return 0.5 * s;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope: need two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("loglog_slope: values must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

GammaStudy recovery_study(const GammaProblem& p, const std::vector<double>& h_list, const SatConfig& sat) {
    if (h_list.size() < 3) throw DomainError("recovery_study: at least three mesh sizes are required");
    for (std::size_t i = 1; i < h_list.size(); ++i)
        if (!(h_list[i] < h_list[i - 1])) throw DomainError("recovery_study: h_list must be strictly decreasing");

    GammaStudy st;
    st.h_list = h_list;
    const double hmin = h_list.back();
    st.exact_energy = p.exact_energy ? *p.exact_energy
                                     : continuum_energy(p.du, p.u, p.A, p.C, p.L,
                                                        8 * static_cast<int>(std::lround(p.L / hmin)));
    for (double h : h_list) {
        const int n = static_cast<int>(std::lround(p.L / h)) + 1;
        const SbpOperator op = build_sbp(n, p.L, 2);
        const Eigen::VectorXd x = op.nodes();
        Eigen::VectorXd A(n), C(n);
        for (int i = 0; i < n; ++i) {
            A(i) = p.A(x(i));
            C(i) = p.C(x(i));
        }
        const Eigen::VectorXd uh = project_dual_cells(op, p.u);
        const double e = discrete_energy(op, A, C, sat, uh);
        st.energies.push_back(e);
        st.errors.push_back(std::abs(e - st.exact_energy));
        st.sat_residues.push_back(sat_energy(op, sat, uh));
    }

    const bool all_zero_err = std::all_of(st.errors.begin(), st.errors.end(), [](double v) { return v == 0.0; });
    const bool all_zero_sat = std::all_of(st.sat_residues.begin(), st.sat_residues.end(), [](double v) { return v == 0.0; });
    st.errors_decreasing = true;
    for (std::size_t i = 1; i < st.errors.size(); ++i)
        if (!(st.errors[i] < st.errors[i - 1]) && !all_zero_err) st.errors_decreasing = false;
    st.error_slope = all_zero_err ? 0.0 : loglog_slope(h_list, st.errors);
    st.sat_slope = all_zero_sat ? 0.0 : loglog_slope(h_list, st.sat_residues);
    st.passed = st.errors_decreasing && (all_zero_err || st.error_slope >= 0.9) &&
                (all_zero_sat || st.sat_slope >= 0.9);
    return st;
}

EquicoercivityReport equicoercivity_check(const std::vector<EquicoercivityEntry>& seq,
                                          const SatConfig& sat, double energy_bound) {
    EquicoercivityReport r;
    for (const auto& e : seq) {
        const Eigen::VectorXd one = Eigen::VectorXd::Ones(e.op.n);
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(e.op.n);
        const double E = discrete_energy(e.op, one, zero, sat, e.u);
        r.energies.push_back(E);
        if (E > energy_bound) r.energy_bounded = false;
        const double mass = e.u.dot(e.op.H.cwiseProduct(e.u));
        if (mass == 0.0) continue;
        const Eigen::VectorXd Du = e.op.D() * e.u;
        const double grad = Du.dot(e.op.H.cwiseProduct(Du));
        r.poincare_ratios.push_back(std::sqrt(mass / grad));
        const double u0 = e.u(0), uN = e.u(e.op.n - 1);
        r.trace_ratios.push_back((u0 * u0 + uN * uN) / mass);
    }
    if (!r.poincare_ratios.empty()) {
        const auto [mn, mx] = std::minmax_element(r.poincare_ratios.begin(), r.poincare_ratios.end());
        r.poincare_uniform = *mx <= 1.05 * *mn;
    }
    if (r.trace_ratios.size() >= 2 && r.trace_ratios.front() > 0.0)
        r.trace_controlled = r.trace_ratios.back() <= 2.0 * r.trace_ratios.front();
    r.pass = r.energy_bounded && r.poincare_uniform && r.trace_controlled;
    return r;
}

}  // namespace sigmalab
