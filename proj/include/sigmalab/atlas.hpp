#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sigmalab/clock.hpp"
#include "sigmalab/system.hpp"

namespace sigmalab {

struct Witness {
    std::string key;
    double value;
};

/// Outcome of one counterexample run. The scenario succeeds when the predicted failure is
/// observed and its control run behaves.
struct FailureReport {
    std::string scenario;
    std::string expected_failure;
    bool observed = false;
    bool control_passed = false;
    std::vector<Witness> witness;

    bool ok() const { return observed && control_passed; }
    double at(const std::string& key) const;  // throws DomainError for an unknown key
};

/// Diffusion on [0, 1] with SAT Dirichlet data, generator rescaled so that its spectral
/// radius equals lambda_max. Real nonpositive spectrum, energy weights H.
LinearSystem dissipative_benchmark(int n, double lambda_max);

/// Boundary-block margin det(-F) / A^2 of F = [[-tau, -A], [-A, -H_00 A]]; nonnegative
/// exactly when the local boundary+SAT energy rate is nonpositive. Clamped at 0 when F is
/// indefinite. Used as the admissible c_{sigma,h} of the boundary layer.
double boundary_layer_margin(double h, double A0, double tau);

FailureReport underscaled_sat(const std::vector<double>& h_list, double exponent = 0.5,
                              double tau_scale = 40.0, double fine_h = 1.0 / 1024.0);
FailureReport flipped_sign_sat(int n = 51, double a0 = 0.3);
FailureReport cfl_violation(int n = 41, double lambda_max = 1.8, double factor = 1.5);
/// kind is "euler" or "heun"; the system is a 2x2 rotation integrated across a flat.
FailureReport unstable_step_on_flat(const std::string& kind, double dt);
/// Scalar u' = -g(u) with implicit midpoint; grid search for an energy-increasing step.
FailureReport nonmonotone_damping(const std::function<double(double)>& g, double dt = 0.1,
                                  std::uint64_t seed = 1);
/// rho_k = 1 + c/k applied as amplitude factors at N atoms; checks 2 ln N growth.
FailureReport accumulation_failure(const std::vector<int>& counts, double c = 1.0);

struct Schedule {
    std::string name;
    SigmaClock clock;
};

struct ScheduleResult {
    std::string name;
    double horizon;
    double mass;
    double sigma_rate;
    double wall_rate;
    double terminal_E;
};

struct ScheduleReport {
    std::vector<ScheduleResult> results;
    double sigma_rate_spread = 0.0;  // max - min of c_sigma* across schedules
    double collapse_ratio = 0.0;     // wall rate padded / wall rate dense
    bool persistence = false;        // spread <= 1e-6
    bool collapse = false;           // ratio <= 0.1 (1e-9 relative slack)
    bool terminal_equal = false;     // front and postponed end at the same energy
};

/// Scalar ledger trajectories on each schedule; throws ConfigError("schedules") when the
/// sigma masses differ by more than 1e-12 relative.
ScheduleReport compare_schedules(const std::vector<Schedule>& schedules, double kappa, double c_sigma,
                                 const std::string& dense, const std::string& padded);

/// Dense (uniform density on [0, T]), front and postponed atom pairs on [0, T], and the dense
/// schedule followed by a flat up to T_padded, all of mass M.
std::vector<Schedule> adversary_schedules(double M, double T, double T_padded);
ScheduleReport schedule_adversary(double M = 1.4, double T = 2.0, double T_padded = 20.0,
                                  double kappa = 1.0, double c_sigma = 0.15);

struct SweepRow {
    double h;
    double measured;  // c_{sigma,h}* from the rate extraction
    double modal;     // -Re(lambda) / kappa of the slowest mode
};

struct SweepReport {
    double c_sigma = 0.0;
    std::vector<SweepRow> rows;
    bool pass = false;  // every measured rate <= c_sigma + 1e-3
};

/// Uniform damping a0 on the whole interval, sigma = t; continuum c_sigma = a0 / (2 kappa).
SweepReport no_super_observability_sweep(const std::vector<double>& h_list, double a0 = 0.3,
                                         double kappa = 1.0, double T = 4.0);

std::vector<std::string> atlas_scenarios();
FailureReport run_scenario(const std::string& name);
/// Runs the scenarios on worker threads; order of the result matches the input.
std::vector<FailureReport> run_atlas(const std::vector<std::string>& names);

}  // namespace sigmalab
