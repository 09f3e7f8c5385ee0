#include "sigmalab/models.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "sigmalab/errors.hpp"

namespace sigmalab {

double scalar_hybrid_exact(const std::vector<Segment>& a, const std::vector<ScalarAtom>& atoms, double T) {
    double integral = 0.0;
    for (const auto& s : a) {
        if (s.w < 0.0) throw DomainError("scalar_hybrid_exact: damping must be >= 0");
        const double lo = std::max(0.0, s.t0), hi = std::min(T, s.t1);
        if (hi > lo) integral += s.w * (hi - lo);
    }
    double prod = 1.0;
    for (const auto& k : atoms)
        if (k.t > 0.0 && k.t <= T) prod *= k.rho * k.rho;
    return std::exp(-2.0 * integral) * prod;
}

LinearSystem scalar_system(double a) {
    LinearSystem s;
    s.name = "scalar";
    s.K = Eigen::MatrixXd::Zero(1, 1);
    s.P = Eigen::MatrixXd::Constant(1, 1, a);
    s.energy = Eigen::VectorXd::Ones(1);
    return s;
}

GccWave build_gcc_wave(double L, int n, double a_omega, double lo, double hi, double a_bg,
                       const SatConfig& sat, int order) {
    if (!(lo < hi) || lo < 0.0 || hi > L) throw DomainError("build_gcc_wave: omega must be a nonempty subinterval of [0, L]");
    if (a_omega < 0.0 || a_bg < 0.0) throw DomainError("build_gcc_wave: damping must be >= 0");
    GccWave g{build_sbp(n, L, order), Eigen::VectorXd(), LinearSystem()};
    const Eigen::VectorXd x = g.op.nodes();
    g.damping = Eigen::VectorXd::Constant(n, a_bg);
    const bool whole = (lo <= 0.0 && hi >= L);
    for (int i = 0; i < n; ++i)
        if (whole || (x(i) > lo && x(i) < hi)) g.damping(i) = a_omega;
    g.system = assemble_damped_wave(g.op, g.damping, sat);
    g.system.name = "gcc_wave";
    return g;
}

Eigen::VectorXd wave_state_from_displacement(const SbpOperator& op, const Eigen::VectorXd& u) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(2 * op.n);
    s.tail(op.n) = op.D() * u;
    return s;
}

SlowestMode slowest_mode(const LinearSystem& sys, double w) {
    const Eigen::MatrixXd M = sys.generator(w);
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, true);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    // Largest real part; ties (common under uniform damping) go to the lowest frequency.
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i).imag() > 1e-9 * scale) top = std::max(top, ev(i).real());
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i).imag() <= 1e-9 * scale || ev(i).real() < top - 1e-9 * scale) continue;
        if (best < 0 || ev(i).imag() < ev(best).imag()) best = i;
    }
    if (best < 0) throw NumericalError("slowest_mode: no oscillatory mode found");
    SlowestMode m;
    m.lambda = ev(best);
    m.vector = es.eigenvectors().col(best);
    m.energy_rate = -2.0 * m.lambda.real();
    return m;
}

Eigen::VectorXd max_phase_mode_state(const LinearSystem& sys, const SlowestMode& mode) {
    const Eigen::VectorXd x = mode.vector.real();
    const Eigen::VectorXd y = mode.vector.imag();
    const Eigen::VectorXd& W = sys.energy;
    const double xx = x.dot(W.cwiseProduct(x)), yy = y.dot(W.cwiseProduct(y)), xy = x.dot(W.cwiseProduct(y));
    // 4 g(psi) = xx + yy + (xx - yy) cos 2psi - 2 xy sin 2psi
    const double psi = 0.5 * std::atan2(-2.0 * xy, xx - yy);
    Eigen::VectorXd u = x * std::cos(psi) - y * std::sin(psi);
    const double E = sys.energy_of(u);
    if (!(E > 0.0)) throw NumericalError("max_phase_mode_state: degenerate mode");
    return u / std::sqrt(E);
}

CalibrationSet calibrate(double c0, double a_omega, double lambda_omega, double kappa, double L,
                         const std::vector<double>& rho) {
    if (!(c0 > 0.0 && a_omega > 0.0 && lambda_omega > 0.0 && kappa > 0.0 && L > 0.0))
        throw DomainError("calibrate: all inputs must be positive");
    CalibrationSet c;
    c.c0 = c0;
    c.a_omega = a_omega;
    c.lambda_omega = lambda_omega;
    c.kappa = kappa;
    c.L = L;
    c.C_P = L / M_PI;
    c.c_sigma_lb = c0 * a_omega * lambda_omega;
    c.rho_star = rho.empty() ? 1.0 : *std::max_element(rho.begin(), rho.end());
    return c;
}

double window_upgrade(double C0, double sigma0, double m, double T0) {
    if (!(C0 > 0.0) || sigma0 < 0.0 || !(m > 0.0) || !(T0 > 0.0))
        throw DomainError("window_upgrade: inputs must be positive");
    if (m > T0) throw DomainError("window_upgrade: active measure m exceeds the window length T0");
    return sigma0 * m / (C0 * T0);
}

WorkedExemplar worked_exemplar() {
    WorkedExemplar w{SigmaClock::purely_atomic(2.0, {{0.30, 0.80}, {0.90, 0.60}}), 1.0, 0.15, {}};
    const struct {
        double t;
        bool left;
    } times[] = {{0.0, false}, {0.30, true}, {0.30, false}, {0.90, true}, {0.90, false}, {1.80, false}, {2.00, false}};
    for (const auto& r : times) {
        const double s = r.left ? w.clock.sigma_left(r.t) : w.clock.sigma(r.t);
        w.rows.push_back({r.t, r.left, s, std::exp(-2.0 * w.kappa * w.c_sigma * s)});
    }
    return w;
}

}  // namespace sigmalab
