#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sigmalab/clock.hpp"

namespace sigmalab {

enum class LawKind { PoissonAtoms, MarkovSwitch };

struct ClockLaw {
    LawKind kind = LawKind::PoissonAtoms;
    double base_density = 0.0;  // w added on top of the random part
    // Poisson atoms
    double lambda_p = 0.0;
    double alpha = 0.1;
    // Markov switching: density a_i while in state i
    Eigen::MatrixXd generator;
    Eigen::VectorXd levels;
    Eigen::VectorXd initial;  // initial distribution

    void validate() const;
};

ClockLaw poisson_law(double base_density, double lambda_p, double alpha);
ClockLaw markov_law(const Eigen::MatrixXd& generator, const Eigen::VectorXd& levels,
                    const Eigen::VectorXd& initial, double base_density = 0.0);

/// One realization on [0, T]; path `stream` of `seed` (see CounterRng).
SigmaClock sample_clock(const ClockLaw& law, double T, std::uint64_t seed, std::uint64_t stream = 0);

/// Expected sigma(t): int w + lambda_p alpha t, or int_0^t sum_i p_i(s) a_i ds with p(s) from
/// the generator exponential.
double compensator(const ClockLaw& law, double t);

/// Stationary distribution of an irreducible generator.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& generator);

/// Worker count: SIGMA_LAB_THREADS if set and positive, else hardware concurrency (at least 1).
unsigned worker_threads();

enum class Outcome { Pass, Fail, Inconclusive };
std::string to_string(Outcome o);

/// Scalar ledger model: u' = -kappa c_model w(t) u between atoms and u -> sqrt(rho) u at atoms,
/// with rho = exp(-2 kappa c_model alpha) unless atom_rho_override > 0.
/// On each path E(t) = E0 exp(-2 kappa c_model sigma(t)) exactly.
struct ScalarLedgerModel {
    double E0 = 1.0;
    double kappa = 1.0;
    double c_model = 0.15;
    double atom_rho_override = 0.0;

    double energy(const SigmaClock& clock, double t) const;
};

struct McCheckpoint {
    double t;
    double mean_E;
    double ci_lo;
    double ci_hi;
    double envelope;  // E0 exp(-2 kappa (1 - delta) c_sigma Lambda(t))
    double exact_mean;  // closed-form expectation when available, else NaN
    Outcome outcome;
};

struct McReport {
    std::vector<McCheckpoint> checkpoints;
    Outcome outcome = Outcome::Pass;
    std::size_t paths = 0;
    double eta_star = 0.0;  // smallest eta that makes the compensator envelope exact (Poisson only)

    static std::string csv_header();
};

/// Monte Carlo mean of E(t) with 99% normal confidence intervals at the checkpoints.
/// Checkpoint outcome: Pass when ci_hi <= envelope, Fail when ci_lo > envelope, else Inconclusive.
McReport mc_expectation_envelope(const ScalarLedgerModel& model, const ClockLaw& law, double T,
                                 double kappa, double c_sigma, double delta, std::size_t paths,
                                 std::uint64_t seed, const std::vector<double>& checkpoints);

struct PathRecord {
    SigmaClock clock;
    std::vector<double> times;
    std::vector<double> energies;
};

/// Number of paths with E(t) > E(0) exp(-2 kappa c_sigma sigma(t)) (1 + tol) at some sample.
std::size_t pathwise_check(const std::vector<PathRecord>& paths, double kappa, double c_sigma, double tol = 1e-9);

}  // namespace sigmalab
