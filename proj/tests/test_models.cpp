#include <doctest.h>

#include <cmath>

#include "sigmalab/errors.hpp"
#include "sigmalab/integrators.hpp"
#include "sigmalab/models.hpp"
#include "sigmalab/rng.hpp"

using namespace sigmalab;

TEST_CASE("scalar_hybrid_exact examples") {
    CHECK(scalar_hybrid_exact({{0.0, 1.0, 0.5}}, {{0.5, 0.9}}, 1.0) == doctest::Approx(std::exp(-1.0) * 0.81).epsilon(1e-15));
    CHECK(std::abs(scalar_hybrid_exact({{0.0, 1.0, 0.5}}, {{0.5, 0.9}}, 1.0) - 0.297977) <= 1e-5);
    CHECK(scalar_hybrid_exact({{0.0, 1.0, 0.0}}, {}, 1.0) == 1.0);
    CHECK(scalar_hybrid_exact({{0.0, 1.0, 0.0}}, {{0.5, 1.2}}, 1.0) == doctest::Approx(1.44).epsilon(1e-15));
}

TEST_CASE("scalar oracle equivalence") {
    CounterRng rng(61, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const double T = 1.0 + rng.uniform();
        const double cut = T * (0.2 + 0.6 * rng.uniform());
        std::vector<Segment> a{{0.0, cut, rng.uniform()}, {cut, T, rng.uniform()}};
        std::vector<ScalarAtom> atoms{{T * 0.1 + 0.01, 0.5 + 0.5 * rng.uniform()}, {T * 0.9, 0.5 + 0.5 * rng.uniform()}};
        std::vector<JumpMap> jumps;
        std::vector<Atom> catoms;
        for (const auto& k : atoms) {
            jumps.push_back(scale_map(1, k.rho));
            catoms.push_back({k.t, 0.1});
        }
        const SigmaClock clock(T, a, catoms);
        StepPlan plan;
        plan.dt = 1e-4;
        const Trajectory tr = integrate_on_clock(scalar_system(1.0), clock, jumps, Eigen::VectorXd::Ones(1), plan);
        const double sim = tr.samples.back().E / tr.samples.front().E;
        CHECK(std::abs(sim / scalar_hybrid_exact(a, atoms, T) - 1.0) <= 1e-6);
    }
    const std::vector<ScalarAtom> atoms{{0.2, 0.7}, {0.6, 0.95}, {0.9, 0.5}};
    std::vector<JumpMap> jumps;
    std::vector<Atom> catoms;
    for (const auto& k : atoms) {
        jumps.push_back(scale_map(1, k.rho));
        catoms.push_back({k.t, 0.2});
    }
    StepPlan plan;
    plan.dt = 0.1;
    const Trajectory tr = integrate_on_clock(scalar_system(1.0), SigmaClock::purely_atomic(1.0, catoms), jumps,
                                             Eigen::VectorXd::Ones(1), plan);
    CHECK(std::abs(tr.samples.back().E / tr.samples.front().E /
                       scalar_hybrid_exact({{0.0, 1.0, 0.0}}, atoms, 1.0) - 1.0) <= 1e-10);
}

TEST_CASE("build_gcc_wave examples") {
    const GccWave g = build_gcc_wave(1.0, 21, 0.30, 0.25, 0.75);
    const Eigen::VectorXd x = g.op.nodes();
    for (int i = 0; i < 21; ++i) CHECK(g.damping(i) == ((x(i) > 0.25 && x(i) < 0.75) ? 0.30 : 0.0));
    CHECK(g.system.dim() == 42);
    CHECK((g.system.energy.head(21) - g.op.H).norm() == 0.0);

    const GccWave u = build_gcc_wave(1.0, 41, 0.30, 0.0, 1.0, 0.0, SatConfig{1.0, 1.0, +1});
    CHECK((u.damping.array() == 0.30).all());
    const SlowestMode m = slowest_mode(u.system, 1.0);
    CHECK(-m.lambda.real() >= 0.9 * 0.30 / 2.0);

    const GccWave z = build_gcc_wave(1.0, 21, 0.0, 0.25, 0.75);
    CHECK(weighted_sym_max_eig(z.system.generator(1.0), z.system.energy) <= 1e-10);
    CHECK_THROWS_AS(build_gcc_wave(1.0, 21, 0.3, 0.5, 0.5), DomainError);
}

TEST_CASE("max-phase mode state obeys the discrete modal bound") {
    const GccWave g = build_gcc_wave(1.0, 31, 0.4, 0.2, 0.8, 0.0, SatConfig{1.0, 1.0, +1});
    const SlowestMode m = slowest_mode(g.system, 1.0);
    Eigen::VectorXd u = max_phase_mode_state(g.system, m);
    CHECK(g.system.energy_of(u) == doctest::Approx(1.0).epsilon(1e-12));
    const Eigen::MatrixXd M = g.system.generator(1.0);
    const double dt = 0.01;
    const std::complex<double> z = 0.5 * dt * m.lambda;
    const double per_step = std::norm((1.0 + z) / (1.0 - z));
    CHECK(per_step < 1.0);
    for (int k = 1; k <= 200; ++k) {
        u = midpoint_step(M, u, dt);
        CHECK(g.system.energy_of(u) <= std::pow(per_step, k) * (1.0 + 1e-9));
    }
    CHECK(std::exp(-m.energy_rate * dt) < per_step);
}

TEST_CASE("calibrate examples") {
    const CalibrationSet a = calibrate(1.0, 0.30, 0.50, 1.0, 1.0);
    CHECK(a.c_sigma_lb == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(a.rate() == doctest::Approx(0.30).epsilon(1e-15));
    const CalibrationSet b = calibrate(1.0, 0.15, 0.70, 0.60, 1.0);
    CHECK(b.c_sigma_lb == doctest::Approx(0.105).epsilon(1e-15));
    CHECK(b.rate() == doctest::Approx(0.126).epsilon(1e-15));
    CHECK(std::abs(b.C_P - 0.31831) <= 1e-5);
    CHECK(calibrate(1.0, 0.3, 0.5, 1.0, 1.0, {0.9, 0.7}).rho_star == 0.9);
    CHECK_THROWS_AS(calibrate(0.0, 0.3, 0.5, 1.0, 1.0), DomainError);

    CounterRng rng(62, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const double c0 = 0.1 + rng.uniform(), ao = 0.1 + rng.uniform(), lo = 0.1 + rng.uniform();
        const double base = calibrate(c0, ao, lo, 1.0, 1.0).c_sigma_lb;
        CHECK(calibrate(c0 * 1.1, ao, lo, 1.0, 1.0).c_sigma_lb >= base);
        CHECK(calibrate(c0, ao * 1.1, lo, 1.0, 1.0).c_sigma_lb >= base);
        CHECK(calibrate(c0, ao, lo * 1.1, 1.0, 1.0).c_sigma_lb >= base);
    }
}

TEST_CASE("window_upgrade examples") {
    CHECK(window_upgrade(2.0, 1.0, 1.0, 2.0) == 0.25);
    CHECK(window_upgrade(1.0, 0.0, 1.0, 2.0) == 0.0);
    CHECK(window_upgrade(1.0, 1.0, 2.0, 2.0) == 1.0);
    CHECK_THROWS_AS(window_upgrade(1.0, 1.0, 3.0, 2.0), DomainError);
}

TEST_CASE("worked exemplar rows") {
    const WorkedExemplar w = worked_exemplar();
    CHECK(w.clock.horizon() == 2.0);
    CHECK(2.0 * w.kappa * w.c_sigma == doctest::Approx(0.30).epsilon(1e-15));
    REQUIRE(w.rows.size() == 7);
    CHECK(w.rows.front().benchmark == 1.0);
    CHECK(std::abs(w.rows[2].benchmark - 0.7866) <= 1e-4);
    CHECK(std::abs(w.rows.back().benchmark - 0.6570) <= 1e-4);
    CHECK(w.rows.back().benchmark == doctest::Approx(std::exp(-0.42)).epsilon(1e-15));
}
