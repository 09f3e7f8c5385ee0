#include "sigmalab/sbp.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

#include "sigmalab/errors.hpp"

namespace sigmalab {

Eigen::VectorXd SbpOperator::nodes() const {
    return Eigen::VectorXd::LinSpaced(n, x0, x0 + L);
}

SbpOperator build_sbp(int n, double L, int order, double x0) {
    if (order != 2 && order != 4) throw DomainError("build_sbp: order must be 2 or 4");
    if (order == 2 && n < 4) throw DomainError("build_sbp: order 2 needs n >= 4");
    if (order == 4 && n < 8) throw DomainError("build_sbp: order 4 needs n >= 8");
    if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("build_sbp: L must be positive");

    SbpOperator op;
    op.order = order;
    op.n = n;
    op.L = L;
    op.x0 = x0;
    op.h = L / (n - 1);
    op.H = Eigen::VectorXd::Constant(n, op.h);
    op.Q = Eigen::MatrixXd::Zero(n, n);
    op.B = Eigen::VectorXd::Zero(n);
    op.B(0) = -1.0;
    op.B(n - 1) = 1.0;

    if (order == 2) {
        op.H(0) = op.H(n - 1) = 0.5 * op.h;
        for (int i = 0; i + 1 < n; ++i) {
            op.Q(i, i + 1) = 0.5;
            op.Q(i + 1, i) = -0.5;
        }
        op.Q(0, 0) = -0.5;
        op.Q(n - 1, n - 1) = 0.5;
        return op;
    }

    // Fourth-order interior, second-order boundary closure.
    const double hb[4] = {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0};
    for (int i = 0; i < 4; ++i) {
        op.H(i) = hb[i] * op.h;
        op.H(n - 1 - i) = hb[i] * op.h;
    }
    const double qb[4][6] = {
        {-0.5, 59.0 / 96.0, -1.0 / 12.0, -1.0 / 32.0, 0.0, 0.0},
        {-59.0 / 96.0, 0.0, 59.0 / 96.0, 0.0, 0.0, 0.0},
        {1.0 / 12.0, -59.0 / 96.0, 0.0, 59.0 / 96.0, -1.0 / 12.0, 0.0},
        {1.0 / 32.0, 0.0, -59.0 / 96.0, 0.0, 2.0 / 3.0, -1.0 / 12.0},
    };
    for (int i = 4; i < n - 4; ++i) {
        op.Q(i, i - 2) = 1.0 / 12.0;
        op.Q(i, i - 1) = -2.0 / 3.0;
        op.Q(i, i + 1) = 2.0 / 3.0;
        op.Q(i, i + 2) = -1.0 / 12.0;
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j) {
            op.Q(i, j) = qb[i][j];
            op.Q(n - 1 - i, n - 1 - j) = -qb[i][j];
        }
    return op;
}

double SatConfig::tau(double h) const {
    return static_cast<double>(sign) * tau_scale * std::pow(h, -exponent);
}

namespace {

void check_grid_function(const SbpOperator& op, const Eigen::VectorXd& f, const char* what) {
    if (f.size() != op.n)
        throw DomainError(std::string(what) + ": grid function has " + std::to_string(f.size()) +
                          " entries, operator has " + std::to_string(op.n));
}

}  // namespace

SplitResult split_varcoeff(const SbpOperator& op, const Eigen::VectorXd& A,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    check_grid_function(op, A, "split_varcoeff");
    check_grid_function(op, u, "split_varcoeff");
    check_grid_function(op, v, "split_varcoeff");
    if ((A.array() <= 0.0).any()) throw DomainError("split_varcoeff: coefficient must be positive");

    const Eigen::MatrixXd Qt = 0.5 * (op.Q * A.asDiagonal() + A.asDiagonal() * op.Q);
    SplitResult r;
    r.form = u.dot(Qt * v);

    const Eigen::MatrixXd D = op.D();
    const Eigen::VectorXd Du = D * u;
    const Eigen::VectorXd Dv = D * v;
    const Eigen::VectorXd Hd = op.H;
    r.interior = 0.5 * ((A.cwiseProduct(u)).dot(Hd.cwiseProduct(Dv)) -
                        Du.dot(Hd.cwiseProduct(A.cwiseProduct(v))));
    r.boundary = 0.5 * (op.B(0) * A(0) * u(0) * v(0) + op.B(op.n - 1) * A(op.n - 1) * u(op.n - 1) * v(op.n - 1));
    return r;
}

double gradient_form(const SbpOperator& op, const Eigen::VectorXd& A, const Eigen::VectorXd& u,
                     const Eigen::VectorXd& v) {
    check_grid_function(op, A, "gradient_form");
    const Eigen::MatrixXd D = op.D();
    return (D * u).dot(op.H.cwiseProduct(A).cwiseProduct(D * v));
}

double boundary_form_max_eig(const SbpOperator& op, const Eigen::VectorXd& A, double tau) {
    check_grid_function(op, A, "boundary_form_max_eig");
    const int N = op.n - 1;
    double worst = -std::numeric_limits<double>::infinity();
    for (int s : {+1, -1}) {
        Eigen::MatrixXd F = Eigen::MatrixXd::Zero(op.n, op.n);
        for (int i = 0; i < op.n; ++i) F(i, i) = 0.5 * s * op.B(i) * A(i);
        F(0, 0) -= tau;
        F(N, N) -= tau;
        // restrict to the trace space spanned by e_0 and e_N
        Eigen::Matrix2d Fb;
        Fb << F(0, 0), F(0, N), F(N, 0), F(N, N);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Fb, Eigen::EigenvaluesOnly);
        worst = std::max(worst, es.eigenvalues().maxCoeff());
    }
    return worst;
}

double sat_threshold(const SbpOperator& op, const Eigen::VectorXd& A) {
    double lo = 0.0;
    if (boundary_form_max_eig(op, A, lo) <= 0.0) return 0.0;
    double hi = 1.0;
    while (boundary_form_max_eig(op, A, hi) > 0.0) hi *= 2.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (boundary_form_max_eig(op, A, mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double trace_constant(const SbpOperator& op) { return 1.0 / op.H(0); }

LinearSystem assemble_damped_wave(const SbpOperator& op, const Eigen::VectorXd& a,
                                  const SatConfig& sat, bool allow_flipped_sat) {
    check_grid_function(op, a, "assemble_damped_wave");
    if ((a.array() < 0.0).any()) throw DomainError("assemble_damped_wave: damping must be >= 0");
    if (!sat.dissipative() && !allow_flipped_sat)
        throw DomainError(
            "assemble_damped_wave: SAT with flipped sign injects boundary energy; "
            "refused unless the stress-test override is set");

    const int n = op.n;
    const int N = n - 1;
    const Eigen::MatrixXd D = op.D();
    const double tau = sat.tau(op.h);

    LinearSystem s;
    s.name = "damped_wave";
    s.K = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    s.K.block(0, n, n, n) = D;
    s.K.block(n, 0, n, n) = D;
    s.K(0, 0) -= tau / op.H(0);
    s.K(N, N) -= tau / op.H(N);
    s.K(n + 0, 0) += 1.0 / op.H(0);
    s.K(n + N, N) -= 1.0 / op.H(N);
    s.P = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    s.P.topLeftCorner(n, n) = a.asDiagonal();
    s.energy.resize(2 * n);
    s.energy << op.H, op.H;
    return s;
}

LinearSystem assemble_diffusion(const SbpOperator& op, const Eigen::VectorXd& A,
                                const SatConfig& sat) {
    check_grid_function(op, A, "assemble_diffusion");
    if ((A.array() <= 0.0).any()) throw DomainError("assemble_diffusion: coefficient must be positive");
    const int n = op.n;
    const int N = n - 1;
    const Eigen::MatrixXd D = op.D();
    const double tau = sat.tau(op.h);
    const Eigen::MatrixXd BAD = (op.B.cwiseProduct(A)).asDiagonal() * D;
    Eigen::MatrixXd R = -D.transpose() * op.H.cwiseProduct(A).asDiagonal() * D + BAD + BAD.transpose();
    R(0, 0) -= tau;
    R(N, N) -= tau;

    LinearSystem s;
    s.name = "diffusion";
    s.K = op.H.cwiseInverse().asDiagonal() * R;
    s.P = Eigen::MatrixXd::Zero(n, n);
    s.energy = op.H;
    return s;
}

double diffusion_boundary_block_max_eig(const SbpOperator& op, double A0, double tau) {
    Eigen::Matrix2d F;
    F << -tau, -A0, -A0, -op.H(0) * A0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(F, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

InterfaceCoupling two_block_interface(const SbpOperator& left, const SbpOperator& right, double tau) {
    const double xi_left = left.x0 + left.L;
    if (std::abs(xi_left - right.x0) > 1e-12 * std::max(1.0, std::abs(xi_left)))
        throw DomainError("two_block_interface: blocks do not meet at a common interface point");
    if (tau < 0.0) throw DomainError("two_block_interface: penalty must be >= 0");

    const int nl = left.n, nr = right.n, n = nl + nr;
    InterfaceCoupling c;
    c.left_trace = nl - 1;
    c.right_trace = nl;
    c.tau = tau;

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    M.topLeftCorner(nl, nl) = -left.D();
    M.bottomRightCorner(nr, nr) = -right.D();
    // inflow SAT at the outer left end, outflow end left free
    M(0, 0) -= 1.0 / left.H(0);
    // mirrored interface penalties: sigma_L = 1/2 - tau, sigma_R = -1/2 - tau
    const int a = c.left_trace, b = c.right_trace;
    const double sl = 0.5 - tau, sr = -0.5 - tau;
    M(a, a) += sl / left.H(nl - 1);
    M(a, b) -= sl / left.H(nl - 1);
    M(b, b) += sr / right.H(0);
    M(b, a) -= sr / right.H(0);

    c.system.name = "two_block_advection";
    c.system.K = M;
    c.system.P = Eigen::MatrixXd::Zero(n, n);
    c.system.energy.resize(n);
    c.system.energy << left.H, right.H;
    return c;
}

double InterfaceCoupling::outer_rate(const Eigen::VectorXd& u) const {
    const auto n = u.size();
    return -0.5 * (u(0) * u(0) + u(n - 1) * u(n - 1));
}

double InterfaceCoupling::interface_rate(const Eigen::VectorXd& u) const {
    const Eigen::VectorXd Mu = system.K * u;
    const double total = u.dot(system.energy.cwiseProduct(Mu));
    return total - outer_rate(u);
}

double InterfaceCoupling::interface_form_max_eig() const {
    const Eigen::MatrixXd HM = system.energy.asDiagonal() * system.K;
    Eigen::MatrixXd S = 0.5 * (HM + HM.transpose());
    const auto n = S.rows();
    S(0, 0) += 0.5;
    S(n - 1, n - 1) += 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

}  // namespace sigmalab
