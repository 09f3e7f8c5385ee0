#pragma once

#include <Eigen/Dense>

#include "sigmalab/system.hpp"

namespace sigmalab {

/// Diagonal-norm first-derivative SBP pair on a uniform grid of [x0, x0 + L].
struct SbpOperator {
    int order = 2;
    int n = 0;  // number of nodes
    double L = 1.0;
    double x0 = 0.0;
    double h = 0.0;
    Eigen::VectorXd H;  // norm diagonal
    Eigen::MatrixXd Q;
    Eigen::VectorXd B;  // diag(-1, 0, ..., 0, 1)

    Eigen::MatrixXd D() const { return H.cwiseInverse().asDiagonal() * Q; }
    Eigen::VectorXd nodes() const;
};

SbpOperator build_sbp(int n, double L, int order = 2, double x0 = 0.0);

struct SatConfig {
    double tau_scale = 1.0;
    double exponent = 1.0;  // tau_h = tau_scale * h^(-exponent)
    int sign = +1;          // -1 only for the flipped-sign stress case

    double tau(double h) const;
    bool dissipative() const { return sign > 0 && tau_scale >= 0.0; }
};

struct SplitResult {
    double form;      // u^T Qt(A) v with Qt(A) = (QA + AQ)/2
    double interior;  // ((Au)^T H Dv - (Du)^T H Av) / 2
    double boundary;  // u^T (BA) v / 2
};

/// Variable-coefficient split of the symmetrized operator, evaluated by two independent routes.
SplitResult split_varcoeff(const SbpOperator& op, const Eigen::VectorXd& A,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Coercive gradient form (Du)^T H A (Dv).
double gradient_form(const SbpOperator& op, const Eigen::VectorXd& A, const Eigen::VectorXd& u,
                     const Eigen::VectorXd& v);

/// Largest eigenvalue of the boundary+SAT form s/2 u^T BA u - tau (u_0^2 + u_N^2)
/// on the boundary trace space, maximized over s = +1 and s = -1.
double boundary_form_max_eig(const SbpOperator& op, const Eigen::VectorXd& A, double tau);

/// Smallest tau making the boundary+SAT form negative semidefinite (bisection to 1e-10).
double sat_threshold(const SbpOperator& op, const Eigen::VectorXd& A);

/// 1/H_00: smallest C with |v_b|^2 <= C ||v||_H^2.
double trace_constant(const SbpOperator& op);

/// First-order wave system in (v, w) = (u_t, u_x) with Dirichlet data enforced by SAT:
///   v' = D w - a v - tau H^{-1}(e_0 v_0 + e_N v_N)
///   w' = D v + H^{-1}(e_0 v_0 - e_N v_N)
/// Damping a is gated by the clock density; transport and SAT are not.
LinearSystem assemble_damped_wave(const SbpOperator& op, const Eigen::VectorXd& a,
                                  const SatConfig& sat, bool allow_flipped_sat = false);

/// Diffusion u' = (A u_x)_x with symmetric SAT Dirichlet enforcement:
///   H u' = (-D^T H A D + BAD + (BAD)^T - tau (e_0 e_0^T + e_N e_N^T)) u.
/// Energy-stable only when tau_h grows like 1/h.
LinearSystem assemble_diffusion(const SbpOperator& op, const Eigen::VectorXd& A,
                                const SatConfig& sat);

/// Local 2x2 boundary block of the diffusion energy rate at the left end:
/// -(H_00 A_0) g^2 - 2 A_0 u_0 g - tau u_0^2 in (u_0, g = (Du)_0). Returns its max eigenvalue.
double diffusion_boundary_block_max_eig(const SbpOperator& op, double A0, double tau);

/// Two blocks of u_t + u_x = 0 coupled through mirrored interface SATs of strength tau.
/// Outer boundaries use inflow/outflow SAT. State is (u_L, u_R).
struct InterfaceCoupling {
    LinearSystem system;
    int left_trace = 0;   // index of u_L at the interface
    int right_trace = 0;  // index of u_R at the interface
    double tau = 0.0;

    /// Interface contribution to the block-sum energy rate, assembled from the generator.
    double interface_rate(const Eigen::VectorXd& u) const;
    /// Outer-boundary contribution: -(u_L(0)^2 + u_R(end)^2)/2.
    double outer_rate(const Eigen::VectorXd& u) const;
    /// Largest eigenvalue of the interface quadratic form; certifies <= 0.
    double interface_form_max_eig() const;
};

InterfaceCoupling two_block_interface(const SbpOperator& left, const SbpOperator& right, double tau);

}  // namespace sigmalab
