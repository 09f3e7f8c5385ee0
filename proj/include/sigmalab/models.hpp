#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sigmalab/clock.hpp"
#include "sigmalab/sbp.hpp"
#include "sigmalab/system.hpp"

namespace sigmalab {

struct ScalarAtom {
    double t;
    double rho;  // amplitude factor: u(t+) = rho u(t-)
};

/// E(T+)/E(0+) = exp(-2 int_0^T a) prod rho_k^2 for u' = -a(t) u with jumps u -> rho_k u.
/// Segments carry a(t) in their density field.
double scalar_hybrid_exact(const std::vector<Segment>& a, const std::vector<ScalarAtom>& atoms, double T);

/// Scalar system u' = -w(t) u, energy u^2 / 2.
LinearSystem scalar_system(double a = 1.0);

struct GccWave {
    SbpOperator op;
    Eigen::VectorXd damping;
    LinearSystem system;
};

/// Indicator damping a_omega on nodes strictly inside omega = (lo, hi), a_bg elsewhere.
GccWave build_gcc_wave(double L, int n, double a_omega, double lo, double hi, double a_bg = 0.0,
                       const SatConfig& sat = {}, int order = 2);

/// Initial state from a displacement profile: v = u_t = 0, w = D u.
Eigen::VectorXd wave_state_from_displacement(const SbpOperator& op, const Eigen::VectorXd& u);

struct SlowestMode {
    std::complex<double> lambda;  // eigenvalue of the generator with the largest real part
    Eigen::VectorXcd vector;
    double energy_rate;           // -2 Re(lambda)
};

/// Slowest decaying oscillatory mode of M(w): largest Re(lambda) among eigenvalues with
/// nonzero imaginary part (the static kernel of the first-order form is excluded).
SlowestMode slowest_mode(const LinearSystem& sys, double w = 1.0);

/// Real state Re(e^{i phi} z) on the slowest mode with unit energy. The phase maximizes
/// g(phi) = E(Re(e^{i phi} z)), so the modal solution obeys E(t) <= E(0) exp(-energy_rate t).
/// Midpoint keeps the eigenvector and decays it by |R(dt lambda)|^2 per step, R(z) = (1 + z/2) / (1 - z/2).
Eigen::VectorXd max_phase_mode_state(const LinearSystem& sys, const SlowestMode& mode);

struct CalibrationSet {
    double c0 = 0.0;
    double a_omega = 0.0;
    double lambda_omega = 0.0;
    double kappa = 0.0;
    double L = 0.0;
    double C_P = 0.0;
    double c_sigma_lb = 0.0;
    double rho_star = 1.0;  // worst certified atom factor, 1 when no atoms

    double rate() const { return 2.0 * kappa * c_sigma_lb; }
};

CalibrationSet calibrate(double c0, double a_omega, double lambda_omega, double kappa, double L,
                         const std::vector<double>& rho = {});

/// c_sigma >= sigma0 m / (C0 T0).
double window_upgrade(double C0, double sigma0, double m, double T0);

struct WorkedRow {
    double t;
    bool left_limit;  // t- rather than t
    double sigma;
    double benchmark;
};

struct WorkedExemplar {
    SigmaClock clock;
    double kappa;
    double c_sigma;
    std::vector<WorkedRow> rows;
};

/// Atoms at 0.30 (mass 0.80) and 0.90 (mass 0.60) on [0, 2], no density; 2 kappa c_sigma = 0.30.
WorkedExemplar worked_exemplar();

}  // namespace sigmalab
