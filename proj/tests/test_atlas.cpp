#include <doctest.h>

#include <cmath>

#include "sigmalab/atlas.hpp"
#include "sigmalab/errors.hpp"
#include "sigmalab/integrators.hpp"

using namespace sigmalab;

TEST_CASE("under-scaled SAT degenerates while the control stays bounded") {
    const std::vector<double> hs{1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
    const FailureReport r = underscaled_sat(hs);
    CHECK(r.observed);
    CHECK(r.control_passed);
    CHECK(r.at("ratio_last_first") <= 0.2);
    CHECK(r.at("fine_block_max_eig") > 0.0);

    double prev = std::numeric_limits<double>::infinity();
    for (double h : hs) {
        const double m = boundary_layer_margin(h, 1.0, 40.0 * std::pow(h, -0.5));
        CHECK(m < prev);
        prev = m;
    }
    for (double h : hs) CHECK(boundary_layer_margin(h, 1.0, 40.0 / h) == doctest::Approx(19.0).epsilon(1e-12));
    CHECK(boundary_layer_margin(0.1, 1.0, 1.0 / 0.1) == 0.0);
    CHECK_THROWS_AS(r.at("no-such-key"), DomainError);
}

TEST_CASE("flipped SAT sign injects energy and is refused without override") {
    const FailureReport r = flipped_sign_sat();
    CHECK(r.ok());
}

TEST_CASE("CFL violation amplifies, the limit itself is monotone") {
    const FailureReport r = cfl_violation();
    CHECK(r.ok());
    CHECK(r.at("amplification") > 1.0);
    const LinearSystem b = dissipative_benchmark(41, 1.8);
    CHECK(spectral_radius(b.generator(1.0)) == doctest::Approx(1.8).epsilon(1e-10));
}

TEST_CASE("explicit steps on a flat are expansive") {
    const FailureReport e = unstable_step_on_flat("euler", 0.1);
    CHECK(e.ok());
    CHECK(e.at("step_ratio") == doctest::Approx(1.01).epsilon(1e-12));
    const FailureReport h = unstable_step_on_flat("heun", 0.5);
    CHECK(h.ok());
    CHECK(h.at("step_ratio") == doctest::Approx(1.0 + std::pow(0.5, 4) / 4.0).epsilon(1e-12));
    CHECK_THROWS(unstable_step_on_flat("rk4", 0.1));
}

TEST_CASE("nonmonotone damping admits an energy-increasing step") {
    const FailureReport r = nonmonotone_damping([](double u) { return u - u * u * u; });
    CHECK(r.ok());
    CHECK(r.at("energy_ratio") > 1.0);
    CHECK(std::abs(r.at("witness_state")) > 1.0);
}

TEST_CASE("accumulating expansive atoms grow like 2 ln N") {
    const FailureReport r = accumulation_failure({100, 1000, 10000}, 1.0);
    CHECK(r.ok());
    const double lp = r.at("log_product@10000");
    CHECK(std::abs(lp / (2.0 * std::log(10000.0)) - 1.0) <= 0.05);
}

TEST_CASE("schedule adversary") {
    const ScheduleReport r = schedule_adversary();
    CHECK(r.persistence);
    CHECK(r.sigma_rate_spread <= 1e-6);
    CHECK(r.collapse);
    CHECK(r.collapse_ratio <= 0.1 * (1.0 + 1e-9));
    CHECK(r.terminal_equal);

    const auto sched = adversary_schedules(1.4, 2.0, 20.0);
    const ScheduleReport self = compare_schedules({sched[0], sched[0]}, 1.0, 0.15, sched[0].name, sched[0].name);
    CHECK(self.sigma_rate_spread == 0.0);
    CHECK(self.collapse_ratio == 1.0);

    std::vector<Schedule> bad = sched;
    bad.push_back({"heavy", SigmaClock::constant(2.0, 1.0)});
    CHECK_THROWS_AS(compare_schedules(bad, 1.0, 0.15, "dense", "flat-padded"), ConfigError);
}

TEST_CASE("no numerical super-observability") {
    const SweepReport s = no_super_observability_sweep({1.0 / 32, 1.0 / 64});
    CHECK(s.pass);
    CHECK(s.c_sigma == doctest::Approx(0.15).epsilon(1e-15));
    for (const auto& row : s.rows) CHECK(row.measured <= s.c_sigma + 1e-3);
    CHECK(s.rows.front().measured < s.c_sigma);
}

TEST_CASE("atlas runner") {
    const auto names = atlas_scenarios();
    CHECK(names.size() == 8);
    const auto reps = run_atlas({"explicit-step-on-flat", "accumulation"});
    REQUIRE(reps.size() == 2);
    CHECK(reps[0].scenario == "explicit-step-on-flat");
    CHECK(reps[1].scenario == "accumulation");
    CHECK_THROWS_AS(run_scenario("bogus"), ConfigError);

    const FailureReport a = run_scenario("explicit-step-on-flat");
    const FailureReport b = run_scenario("explicit-step-on-flat");
    REQUIRE(a.witness.size() == b.witness.size());
    for (std::size_t i = 0; i < a.witness.size(); ++i) CHECK(a.witness[i].value == b.witness[i].value);
}
