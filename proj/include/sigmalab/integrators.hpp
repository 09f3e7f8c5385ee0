#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sigmalab/clock.hpp"
#include "sigmalab/jumps.hpp"
#include "sigmalab/system.hpp"

namespace sigmalab {

enum class Integrator { Midpoint, Euler, Heun };

std::string to_string(Integrator k);
Integrator integrator_from_string(const std::string& s);

struct StepPlan {
    double dt = 1e-3;  // wall-time step bound on a.c. segments and flats
    Integrator integrator = Integrator::Midpoint;
    bool cfl_override = false;
};

enum class SampleEvent { Step, AtomPre, AtomPost };
std::string to_string(SampleEvent e);

struct Sample {
    double t;
    double sigma;
    double E;
    SampleEvent event;
};

struct Trajectory {
    std::vector<Sample> samples;
    Eigen::VectorXd final_state;
};

/// One implicit midpoint step: (I - dt/2 M) u' = (I + dt/2 M) u.
Eigen::VectorXd midpoint_step(const Eigen::MatrixXd& M, const Eigen::VectorXd& u, double dt);

/// Forward Euler step; refused beyond cfl_limit(M) unless override is set.
Eigen::VectorXd euler_step(const Eigen::MatrixXd& M, const Eigen::VectorXd& u, double dt,
                           bool override_cfl = false);

/// Explicit two-stage Heun step (no stability claim; used as a counterexample).
Eigen::VectorXd heun_step(const Eigen::MatrixXd& M, const Eigen::VectorXd& u, double dt);

/// Largest dt with |1 + dt lambda| <= 1 for every eigenvalue of M: min of -2 Re(l) / |l|^2.
/// Equals 2 / Lambda_max for generators with real nonpositive spectrum; 0 when some
/// nonzero eigenvalue has Re(l) >= 0.
double cfl_limit(const Eigen::MatrixXd& M);

/// 2 / Lambda_max.
double cfl_limit_from_bound(double lambda_max);

/// Spectral radius of M.
double spectral_radius(const Eigen::MatrixXd& M);

/// One-step map for the chosen integrator: u_{n+1} = Phi u_n.
Eigen::MatrixXd step_matrix(const Eigen::MatrixXd& M, double dt, Integrator k);

/// Per-step certified rate: largest kappa with E(Phi u) <= exp(-2 kappa w dt) E(u) for all u,
/// i.e. -ln(energy_gain(Phi)) / (2 w dt). Returns +inf when w == 0 and the step is strictly
/// contractive, 0 when w == 0 and it is not.
double certified_step_rate(const LinearSystem& sys, double w, double dt, Integrator k);

/// Advance u0 along the clock. Damping is gated by the density w(t); every atom receives
/// exactly one jump (jumps[k] for atom k); steps never straddle breakpoints.
Trajectory integrate_on_clock(const LinearSystem& sys, const SigmaClock& clock,
                              const std::vector<JumpMap>& jumps, const Eigen::VectorXd& u0,
                              const StepPlan& plan);

}  // namespace sigmalab
