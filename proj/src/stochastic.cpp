#include "sigmalab/stochastic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "sigmalab/errors.hpp"
#include "sigmalab/rng.hpp"

namespace sigmalab {

void ClockLaw::validate() const {
    if (!(base_density >= 0.0)) throw DomainError("clock law: base density must be >= 0");
    if (kind == LawKind::PoissonAtoms) {
        if (!(lambda_p >= 0.0)) throw DomainError("clock law: Poisson intensity must be >= 0");
        if (!(alpha > 0.0)) throw DomainError("clock law: atom mass must be positive");
        return;
    }
    const auto m = generator.rows();
    if (m == 0 || generator.cols() != m || levels.size() != m || initial.size() != m)
        throw DomainError("clock law: generator, levels and initial distribution must agree in size");
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j)
            if (i != j && generator(i, j) < 0.0) throw DomainError("clock law: negative off-diagonal rate");
        if (std::abs(generator.row(i).sum()) > 1e-12 * std::max(1.0, generator.row(i).cwiseAbs().sum()))
            throw DomainError("clock law: generator rows must sum to zero");
        if (levels(i) < 0.0) throw DomainError("clock law: damping levels must be >= 0");
        if (initial(i) < 0.0) throw DomainError("clock law: initial distribution must be >= 0");
    }
    if (std::abs(initial.sum() - 1.0) > 1e-12) throw DomainError("clock law: initial distribution must sum to 1");
}

ClockLaw poisson_law(double base_density, double lambda_p, double alpha) {
    ClockLaw law;
    law.kind = LawKind::PoissonAtoms;
    law.base_density = base_density;
    law.lambda_p = lambda_p;
    law.alpha = alpha;
    law.validate();
    return law;
}

ClockLaw markov_law(const Eigen::MatrixXd& generator, const Eigen::VectorXd& levels,
                    const Eigen::VectorXd& initial, double base_density) {
    ClockLaw law;
    law.kind = LawKind::MarkovSwitch;
    law.base_density = base_density;
    law.generator = generator;
    law.levels = levels;
    law.initial = initial;
    law.validate();
    return law;
}

SigmaClock sample_clock(const ClockLaw& law, double T, std::uint64_t seed, std::uint64_t stream) {
    law.validate();
    CounterRng rng(seed, stream);
    if (law.kind == LawKind::PoissonAtoms) {
        std::vector<Atom> atoms;
        if (law.lambda_p > 0.0) {
            double t = rng.exponential(law.lambda_p);
            while (t <= T) {
                if (t > 0.0) atoms.push_back({t, law.alpha});
                t += rng.exponential(law.lambda_p);
            }
        }
        return SigmaClock(T, {{0.0, T, law.base_density}}, std::move(atoms));
    }

    const auto m = law.generator.rows();
    auto draw = [&](const Eigen::VectorXd& p) {
        const double u = rng.uniform() * p.sum();
        double acc = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            acc += p(i);
            if (u < acc) return i;
        }
        return m - 1;
    };
    std::vector<Segment> segs;
    Eigen::Index state = draw(law.initial);
    double t = 0.0;
    while (t < T) {
        const double rate = -law.generator(state, state);
        double end = (rate > 0.0) ? t + rng.exponential(rate) : T;
        if (end > T) end = T;
        const double w = law.base_density + law.levels(state);
        if (!segs.empty() && segs.back().w == w)
            segs.back().t1 = end;
        else
            segs.push_back({t, end, w});
        t = end;
        if (t < T) {
            Eigen::VectorXd jump = law.generator.row(state).transpose();
            jump(state) = 0.0;
            state = draw(jump);
        }
    }
    return SigmaClock(T, std::move(segs));
}

double compensator(const ClockLaw& law, double t) {
    law.validate();
    if (!(t >= 0.0)) throw DomainError("compensator: t must be >= 0");
    if (law.kind == LawKind::PoissonAtoms) return law.base_density * t + law.lambda_p * law.alpha * t;
    if (t == 0.0) return 0.0;
    const auto m = law.generator.rows();
    // exp([[Q, I], [0, 0]] t) has int_0^t exp(Qs) ds as its upper-right block.
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    aug.topLeftCorner(m, m) = law.generator * t;
    aug.topRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m) * t;
    const Eigen::MatrixXd E = aug.exp();
    const Eigen::VectorXd occupation = law.initial.transpose() * E.topRightCorner(m, m);
    return law.base_density * t + occupation.dot(law.levels);
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& generator) {
    const auto m = generator.rows();
    Eigen::MatrixXd A(m + 1, m);
    A.topRows(m) = generator.transpose();
    A.row(m).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
    b(m) = 1.0;
    return A.colPivHouseholderQr().solve(b);
}

unsigned worker_threads() {
    if (const char* env = std::getenv("SIGMA_LAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        case Outcome::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

double ScalarLedgerModel::energy(const SigmaClock& clock, double t) const {
    const double c = 2.0 * kappa * c_model;
    double logE = -c * clock.ac(t);
    for (const auto& a : clock.atoms()) {
        if (a.t > t) break;
        logE += atom_rho_override > 0.0 ? std::log(atom_rho_override) : -c * a.alpha;
    }
    return E0 * std::exp(logE);
}

std::string McReport::csv_header() { return "t,mean_E,ci_lo,ci_hi,envelope"; }

McReport mc_expectation_envelope(const ScalarLedgerModel& model, const ClockLaw& law, double T,
                                 double kappa, double c_sigma, double delta, std::size_t paths,
                                 std::uint64_t seed, const std::vector<double>& checkpoints) {
    if (paths < 100) throw DomainError("mc_expectation_envelope: at least 100 paths are required");
    if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("mc_expectation_envelope: delta must lie in [0, 1)");
    for (double t : checkpoints)
        if (!(t >= 0.0 && t <= T)) throw DomainError("mc_expectation_envelope: checkpoint outside [0, T]");
    law.validate();

    const std::size_t nc = checkpoints.size();
    std::vector<double> values(paths * nc);
    const unsigned nt = std::min<unsigned>(worker_threads(), static_cast<unsigned>(paths));
    auto work = [&](unsigned tid) {
        for (std::size_t p = tid; p < paths; p += nt) {
            const SigmaClock clock = sample_clock(law, T, seed, p);
            for (std::size_t j = 0; j < nc; ++j) values[p * nc + j] = model.energy(clock, checkpoints[j]);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < nt; ++i) pool.emplace_back(work, i);
    work(0);
    for (auto& th : pool) th.join();

    McReport rep;
    rep.paths = paths;
    const double z = 2.5758293035489004;  // two-sided 99% normal quantile
    const double c_m = 2.0 * kappa * model.c_model;
    const double rho_atom = model.atom_rho_override > 0.0 ? model.atom_rho_override : std::exp(-c_m * law.alpha);
    bool any_fail = false, any_inconclusive = false;
    for (std::size_t j = 0; j < nc; ++j) {
        double mean = 0.0;
        for (std::size_t p = 0; p < paths; ++p) mean += values[p * nc + j];
        mean /= static_cast<double>(paths);
        double var = 0.0;
        for (std::size_t p = 0; p < paths; ++p) {
            const double d = values[p * nc + j] - mean;
            var += d * d;
        }
        var /= static_cast<double>(paths - 1);
        const double half = z * std::sqrt(var / static_cast<double>(paths));
        const double t = checkpoints[j];
        McCheckpoint c{t, mean, mean - half, mean + half,
                       model.E0 * std::exp(-2.0 * kappa * (1.0 - delta) * c_sigma * compensator(law, t)),
                       std::numeric_limits<double>::quiet_NaN(), Outcome::Pass};
        if (law.kind == LawKind::PoissonAtoms)
            c.exact_mean = model.E0 * std::exp(-c_m * law.base_density * t + law.lambda_p * t * (rho_atom - 1.0));
        const double slack = 1e-12 * c.envelope;
        if (c.ci_hi <= c.envelope + slack)
            c.outcome = Outcome::Pass;
        else if (c.ci_lo > c.envelope + slack)
            c.outcome = Outcome::Fail;
        else
            c.outcome = Outcome::Inconclusive;
        any_fail |= c.outcome == Outcome::Fail;
        any_inconclusive |= c.outcome == Outcome::Inconclusive;
        rep.checkpoints.push_back(c);
    }
    rep.outcome = any_fail ? Outcome::Fail : (any_inconclusive ? Outcome::Inconclusive : Outcome::Pass);
    if (law.kind == LawKind::PoissonAtoms) {
        const double lam_dot = law.base_density + law.lambda_p * law.alpha;
        if (lam_dot > 0.0) {
            const double achieved = c_m * law.base_density + law.lambda_p * (1.0 - rho_atom);
            rep.eta_star = std::max(0.0, 2.0 * kappa * (1.0 - delta) * c_sigma - achieved / lam_dot);
        }
    }
    return rep;
}

std::size_t pathwise_check(const std::vector<PathRecord>& paths, double kappa, double c_sigma, double tol) {
    std::size_t bad = 0;
    for (const auto& p : paths) {
        if (p.times.empty()) continue;
        const double E0 = p.energies.front();
        for (std::size_t i = 0; i < p.times.size(); ++i) {
            const double B = E0 * std::exp(-2.0 * kappa * c_sigma * p.clock.sigma(p.times[i]));
            if (p.energies[i] > B * (1.0 + tol)) {
                ++bad;
                break;
            }
        }
    }
    return bad;
}

}  // namespace sigmalab
