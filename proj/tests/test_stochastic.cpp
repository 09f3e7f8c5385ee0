#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "sigmalab/errors.hpp"
#include "sigmalab/rng.hpp"
#include "sigmalab/stochastic.hpp"

using namespace sigmalab;

namespace {

ClockLaw symmetric_chain(double rate, double level, double base = 0.0) {
    Eigen::MatrixXd Q(2, 2);
    Q << -rate, rate, rate, -rate;
    return markov_law(Q, Eigen::Vector2d(0.0, level), Eigen::Vector2d(0.5, 0.5), base);
}

bool same_clock(const SigmaClock& a, const SigmaClock& b) {
    if (a.segments().size() != b.segments().size() || a.atoms().size() != b.atoms().size()) return false;
    for (std::size_t i = 0; i < a.segments().size(); ++i)
        if (a.segments()[i].t0 != b.segments()[i].t0 || a.segments()[i].w != b.segments()[i].w) return false;
    for (std::size_t k = 0; k < a.atoms().size(); ++k)
        if (a.atoms()[k].t != b.atoms()[k].t || a.atoms()[k].alpha != b.atoms()[k].alpha) return false;
    return true;
}

}  // namespace

TEST_CASE("counter generator is reproducible and stream separated") {
    CounterRng a(7, 3), b(7, 3), c(7, 4);
    for (int i = 0; i < 10; ++i) {
        const auto x = a(), y = b(), z = c();
        CHECK(x == y);
        CHECK(x != z);
    }
    CounterRng u(1, 0);
    double mean = 0.0;
    for (int i = 0; i < 100000; ++i) mean += u.uniform();
    CHECK(std::abs(mean / 100000 - 0.5) <= 0.005);
}

TEST_CASE("sample_clock examples") {
    const SigmaClock base = sample_clock(poisson_law(0.5, 0.0, 0.1), 4.0, 7, 0);
    CHECK(base.atoms().empty());
    CHECK(base.total_mass() == doctest::Approx(2.0).epsilon(1e-15));

    const ClockLaw law = poisson_law(0.5, 2.0, 0.1);
    double mean = 0.0;
    const int N = 10000;
    for (int p = 0; p < N; ++p) {
        const SigmaClock c = sample_clock(law, 4.0, 7, p);
        mean += static_cast<double>(c.atoms().size());
        for (const auto& a : c.atoms()) CHECK(a.alpha == 0.1);
    }
    mean /= N;
    CHECK(std::abs(mean - 8.0) <= 0.3);

    const ClockLaw chain = symmetric_chain(4.0, 1.0);
    double frac = 0.0;
    const int M = 2000;
    for (int p = 0; p < M; ++p) frac += sample_clock(chain, 10.0, 9, p).ac_mass() / 10.0;
    frac /= M;
    CHECK(std::abs(frac - 0.5) <= 0.02);
}

TEST_CASE("seed determinism") {
    const ClockLaw law = poisson_law(0.5, 2.0, 0.1);
    CHECK(same_clock(sample_clock(law, 4.0, 11, 5), sample_clock(law, 4.0, 11, 5)));
    const ClockLaw chain = symmetric_chain(3.0, 0.7);
    CHECK(same_clock(sample_clock(chain, 4.0, 11, 5), sample_clock(chain, 4.0, 11, 5)));
    CHECK_FALSE(same_clock(sample_clock(law, 4.0, 11, 5), sample_clock(law, 4.0, 12, 5)));
}

TEST_CASE("compensator examples") {
    CHECK(compensator(poisson_law(0.5, 2.0, 0.1), 4.0) == doctest::Approx(2.8).epsilon(1e-15));
    CHECK(compensator(poisson_law(0.5, 0.0, 0.1), 4.0) == doctest::Approx(2.0).epsilon(1e-15));
    const ClockLaw chain = symmetric_chain(4.0, 1.0);
    for (double t : {0.5, 1.0, 3.0}) CHECK(compensator(chain, t) == doctest::Approx(t / 2.0).epsilon(1e-12));

    Eigen::MatrixXd Q(2, 2);
    Q << -1.0, 1.0, 3.0, -3.0;
    const ClockLaw start0 = markov_law(Q, Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(1.0, 0.0));
    const double t = 2.0;
    const double exact = 0.25 * t - 0.25 / 4.0 * (1.0 - std::exp(-4.0 * t));
    CHECK(compensator(start0, t) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(stationary_distribution(Q).isApprox(Eigen::Vector2d(0.75, 0.25), 1e-12));
}

TEST_CASE("compensator consistency with sampled clocks") {
    for (const ClockLaw& law : {poisson_law(0.5, 2.0, 0.1), symmetric_chain(2.0, 1.0, 0.2)}) {
        const int N = 10000;
        double s = 0.0, s2 = 0.0;
        for (int p = 0; p < N; ++p) {
            const double v = sample_clock(law, 4.0, 21, p).total_mass();
            s += v;
            s2 += v * v;
        }
        const double mean = s / N;
        const double sd = std::sqrt(std::max(0.0, s2 / N - mean * mean));
        CHECK(std::abs(mean - compensator(law, 4.0)) <= 4.0 * sd / std::sqrt(N));
    }
}

TEST_CASE("law validation") {
    CHECK_THROWS_AS(poisson_law(-0.1, 1.0, 0.1).validate(), DomainError);
    CHECK_THROWS_AS(poisson_law(0.1, 1.0, 0.0).validate(), DomainError);
    Eigen::MatrixXd Q(2, 2);
    Q << -1.0, 0.5, 1.0, -1.0;
    CHECK_THROWS_AS(markov_law(Q, Eigen::Vector2d(0, 1), Eigen::Vector2d(0.5, 0.5)).validate(), DomainError);
}

TEST_CASE("expectation envelope outcomes") {
    ScalarLedgerModel m;
    const std::vector<double> cps{1.0, 2.0, 3.0, 4.0};
    const McReport det = mc_expectation_envelope(m, poisson_law(0.5, 0.0, 0.1), 4.0, 1.0, 0.15, 0.0, 200, 3, cps);
    for (const auto& c : det.checkpoints) {
        CHECK(std::abs(c.mean_E / c.envelope - 1.0) <= 1e-9);
        CHECK(c.ci_hi - c.ci_lo <= 1e-12);
    }
    CHECK(det.outcome != Outcome::Fail);

    const McReport poi = mc_expectation_envelope(m, poisson_law(0.5, 2.0, 0.1), 4.0, 1.0, 0.15, 0.0, 10000, 7, cps);
    for (const auto& c : poi.checkpoints) {
        CHECK(std::isfinite(c.exact_mean));
        CHECK(c.exact_mean >= c.envelope);
        CHECK(c.ci_lo <= c.exact_mean);
        CHECK(c.exact_mean <= c.ci_hi);
    }
    CHECK(poi.eta_star > 0.0);

    const McReport slack = mc_expectation_envelope(m, poisson_law(0.5, 2.0, 0.1), 4.0, 1.0, 0.15, 0.5, 10000, 7, cps);
    CHECK(slack.outcome == Outcome::Pass);

    CHECK_THROWS_AS(mc_expectation_envelope(m, poisson_law(0.5, 2.0, 0.1), 4.0, 1.0, 0.15, 0.0, 50, 7, cps), DomainError);
    CHECK_THROWS_AS(mc_expectation_envelope(m, poisson_law(0.5, 2.0, 0.1), 4.0, 1.0, 0.15, 1.0, 500, 7, cps), DomainError);
}

TEST_CASE("markov switching mean decay rate") {
    ScalarLedgerModel m;
    const ClockLaw chain = symmetric_chain(20.0, 1.0);
    const std::vector<double> cps{2.0, 4.0};
    const McReport r = mc_expectation_envelope(m, chain, 4.0, 1.0, 0.15, 0.0, 10000, 5, cps);
    const double fitted = -std::log(r.checkpoints[1].mean_E / r.checkpoints[0].mean_E) / 2.0;
    const double predicted = 2.0 * 0.15 * 0.5;
    CHECK(std::abs(fitted / predicted - 1.0) <= 0.05);
}

TEST_CASE("pathwise check") {
    const ClockLaw law = poisson_law(0.5, 2.0, 0.1);
    ScalarLedgerModel m;
    std::vector<PathRecord> paths;
    for (int p = 0; p < 10000; ++p) {
        PathRecord r{sample_clock(law, 4.0, 7, p), {0.0, 1.0, 2.0, 3.0, 4.0}, {}};
        for (double t : r.times) r.energies.push_back(m.energy(r.clock, t));
        paths.push_back(std::move(r));
    }
    CHECK(pathwise_check(paths, 1.0, 0.15) == 0);

    ScalarLedgerModel bad;
    bad.atom_rho_override = 1.2;
    std::size_t with_atoms = 0;
    for (auto& p : paths) {
        if (!p.clock.atoms().empty()) ++with_atoms;
        p.energies.clear();
        for (double t : p.times) p.energies.push_back(bad.energy(p.clock, t));
    }
    CHECK(pathwise_check(paths, 1.0, 0.15) == with_atoms);

    std::vector<PathRecord> id;
    const SigmaClock c = SigmaClock::identity(4.0);
    PathRecord r{c, {0.0, 2.0, 4.0}, {}};
    for (double t : r.times) r.energies.push_back(m.energy(c, t));
    id.push_back(r);
    CHECK(pathwise_check(id, 1.0, 0.15) == 0);
    CHECK(r.energies.back() == doctest::Approx(std::exp(-2.0 * 0.15 * 4.0)).epsilon(1e-14));
}

TEST_CASE("results do not depend on the thread count") {
    ScalarLedgerModel m;
    const std::vector<double> cps{2.0, 4.0};
    setenv("SIGMA_LAB_THREADS", "1", 1);
    CHECK(worker_threads() == 1);
    const McReport a = mc_expectation_envelope(m, poisson_law(0.5, 2.0, 0.1), 4.0, 1.0, 0.15, 0.0, 2000, 9, cps);
    setenv("SIGMA_LAB_THREADS", "4", 1);
    CHECK(worker_threads() == 4);
    const McReport b = mc_expectation_envelope(m, poisson_law(0.5, 2.0, 0.1), 4.0, 1.0, 0.15, 0.0, 2000, 9, cps);
    for (std::size_t i = 0; i < cps.size(); ++i) CHECK(a.checkpoints[i].mean_E == b.checkpoints[i].mean_E);
    CHECK(worker_threads() >= 1);
}
