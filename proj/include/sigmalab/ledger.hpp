#pragma once

#include <string>
#include <vector>

#include "sigmalab/clock.hpp"
#include "sigmalab/integrators.hpp"

namespace sigmalab {

/// B(t) = E0 exp(-2 kappa c_sigma sigma(t)).
double envelope(double E0, double kappa, double c_sigma, const SigmaClock& clock, double t);
/// Same, evaluated at the left limit t-.
double envelope_left(double E0, double kappa, double c_sigma, const SigmaClock& clock, double t);

struct MasterDecayReport {
    bool pass = true;
    double worst_ratio = 0.0;  // max over s < t of E(t) / (bound(s, t) E(s))
    std::size_t worst_s = 0;   // sample indices attaining it
    std::size_t worst_t = 0;
};

/// Checks E(t) <= exp(-2 kappa_h [ac(t) - ac(s)]) prod_{t_k in (s,t]} rho_k E(s) (1 + tol)
/// over all sample pairs s < t, in O(n) via a running maximum of ln E - ln bound.
/// The exponent uses the absolutely continuous mass; atoms enter through rho_k.
MasterDecayReport verify_master_decay(const Trajectory& traj, const SigmaClock& clock,
                                      double kappa_h, const std::vector<double>& rho, double tol);

/// Same bound restricted to pairs with t - s >= window: the averaged (windowed) Gronwall premise.
MasterDecayReport verify_windowed_decay(const Trajectory& traj, const SigmaClock& clock, double kappa_h,
                                        const std::vector<double>& rho, double window, double tol);

struct Rates {
    double wall_rate = 0.0;   // inf_{t > t_min} -ln(E/E0) / (2 kappa t)
    double sigma_rate = 0.0;  // inf_{t > t_min, sigma(t) > 0} -ln(E/E0) / (2 kappa sigma(t))
    bool sigma_rate_defined = false;
};

/// t_min < 0 selects 1% of the horizon.
Rates extract_rates(const Trajectory& traj, const SigmaClock& clock, double kappa, double t_min = -1.0);

struct EnvelopeReport {
    double kappa = 0.0;
    double c_sigma = 0.0;
    double max_violation = 0.0;  // max_t E(t) / B(t) - 1
    Rates rates;

    std::string key_values() const;
    static std::string csv_header();
    std::string csv_row() const;
};

EnvelopeReport envelope_report(const Trajectory& traj, const SigmaClock& clock, double kappa,
                               double c_sigma, double t_min = -1.0);

/// (1/T)(2 kappa ac_mass + sum log(1/rho_k)) >= eta, with 1e-12 relative slack for rounding.
bool average_rate_condition(const SigmaClock& clock, const std::vector<double>& rho, double kappa,
                            double eta);
double average_rate(const SigmaClock& clock, const std::vector<double>& rho, double kappa);

/// Requires dominates(c1, c2); returns true when B2 <= B1 on both sides of every merged breakpoint.
bool monotonicity_check(const SigmaClock& c1, const SigmaClock& c2, double kappa, double c_sigma);

}  // namespace sigmalab
