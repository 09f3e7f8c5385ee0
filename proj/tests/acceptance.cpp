#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sigmalab/atlas.hpp"
#include "sigmalab/certify.hpp"
#include "sigmalab/config.hpp"
#include "sigmalab/gamma.hpp"
#include "sigmalab/integrators.hpp"
#include "sigmalab/ledger.hpp"
#include "sigmalab/models.hpp"
#include "sigmalab/rng.hpp"
#include "sigmalab/runner.hpp"
#include "sigmalab/sbp.hpp"
#include "sigmalab/stochastic.hpp"

using namespace sigmalab;

namespace {

// Pinned tolerances and budgets.
constexpr double kSigmaExact = 0.0;
constexpr double kBenchTol = 1e-4;
constexpr double kPrintedTol = 5e-3;
constexpr double kC1Seconds = 1.0;
constexpr int kOracleCases = 50;
constexpr double kOracleDt = 1e-4;
constexpr double kOracleTol = 1e-6;
constexpr double kPureAtomTol = 1e-10;
constexpr double kC2Seconds = 10.0;
constexpr double kSbpTol = 1e-14;
constexpr double kSplitTol = 1e-12;
constexpr double kC3Seconds = 5.0;
constexpr double kLambdaMax = 1.8;
constexpr double kPrintedLimit = 1.1111;
constexpr int kRandomClocks = 200;
constexpr double kSyntheticTol = 1e-8;
constexpr double kPdeTol = 1e-3;
constexpr double kC5Seconds = 120.0;
constexpr double kSlopeMin = 0.9;
constexpr double kC6Seconds = 30.0;
constexpr std::size_t kPaths = 10000;
constexpr double kC7Seconds = 60.0;
constexpr double kPersistenceTol = 1e-6;
constexpr double kC8Seconds = 60.0;
constexpr double kSuperObsSlack = 1e-3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

SigmaClock random_clock(CounterRng& rng, double T) {
    std::vector<double> cuts{0.0, T};
    const int nseg = 1 + static_cast<int>(rng.uniform() * 4);
    for (int i = 1; i < nseg; ++i) cuts.push_back(T * (0.05 + 0.9 * rng.uniform()));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        segs.push_back({cuts[i], cuts[i + 1], rng.uniform() < 0.35 ? 0.0 : 2.0 * rng.uniform()});
    std::vector<Atom> atoms;
    const int na = static_cast<int>(rng.uniform() * 4);
    for (int k = 0; k < na; ++k) atoms.push_back({T * (0.02 + 0.96 * rng.uniform()), 0.05 + 0.5 * rng.uniform()});
    return SigmaClock(T, segs, atoms);
}

void criterion1() {
    const auto t0 = Clock::now();
    const RunArtifacts art = run(preset("worked-sigma"));
    const WorkedExemplar ex = worked_exemplar();
    const double secs = seconds_since(t0);
    const double sigma_expected[] = {0.0, 0.0, 0.80, 0.80, 1.40, 1.40, 1.40};
    double sigma_err = 0.0;
    for (std::size_t i = 0; i < ex.rows.size(); ++i) sigma_err = std::max(sigma_err, std::abs(ex.rows[i].sigma - sigma_expected[i]));
    const double b1 = ex.rows[2].benchmark, b2 = ex.rows.back().benchmark;
    const bool ok = art.verified && ex.rows.size() == 7 && sigma_err <= kSigmaExact + 2e-16 && ex.rows[0].benchmark == 1.0 &&
                    std::abs(b1 - 0.7866) <= kBenchTol && std::abs(b2 - 0.6570) <= kBenchTol &&
                    std::abs(b2 - 0.659) <= kPrintedTol && secs < kC1Seconds;
    report(1, ok,
           "worked sigma: max sigma error " + fmt("%.3g", sigma_err) + ", B(0.30+) = " + fmt("%.6f", b1) +
               ", B(2.00) = " + fmt("%.6f", b2) + ", " + fmt("%.3f s", secs));
}

void criterion2() {
    const auto t0 = Clock::now();
    CounterRng rng(2024, 2);
    double worst = 0.0, worst_atoms = 0.0;
    for (int c = 0; c < kOracleCases; ++c) {
        const double T = 1.0 + 2.0 * rng.uniform();
        const bool pure = c % 5 == 4;
        std::vector<double> cuts{0.0, T};
        for (int i = 0; i < 2; ++i) cuts.push_back(T * (0.1 + 0.8 * rng.uniform()));
        std::sort(cuts.begin(), cuts.end());
        std::vector<Segment> a;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            a.push_back({cuts[i], cuts[i + 1], pure ? 0.0 : (rng.uniform() < 0.25 ? 0.0 : rng.uniform())});
        std::vector<ScalarAtom> atoms;
        std::vector<Atom> clock_atoms;
        std::vector<JumpMap> jumps;
        const int na = 1 + static_cast<int>(rng.uniform() * 3);
        for (int k = 0; k < na; ++k) {
            const double t = T * (k + 0.2 + 0.6 * rng.uniform()) / na;
            const double rho = 0.3 + 0.7 * rng.uniform();
            atoms.push_back({t, rho});
            clock_atoms.push_back({t, 0.1});
            jumps.push_back(scale_map(1, rho));
        }
        const SigmaClock clock(T, a, clock_atoms);
        StepPlan plan;
        plan.dt = kOracleDt;
        const Trajectory tr = integrate_on_clock(scalar_system(1.0), clock, jumps, Eigen::VectorXd::Ones(1), plan);
        const double sim = tr.samples.back().E / tr.samples.front().E;
        const double err = std::abs(sim / scalar_hybrid_exact(a, atoms, T) - 1.0);
        if (pure)
            worst_atoms = std::max(worst_atoms, err);
        else
            worst = std::max(worst, err);
    }
    const double secs = seconds_since(t0);
    report(2, worst <= kOracleTol && worst_atoms <= kPureAtomTol && secs < kC2Seconds,
           "scalar hybrid oracle: worst rel error " + fmt("%.3g", worst) + " (mixed), " + fmt("%.3g", worst_atoms) +
               " (pure atom), " + fmt("%.2f s", secs));
}

void criterion3() {
    const auto t0 = Clock::now();
    CounterRng rng(2024, 3);
    double sbp = 0.0, split = 0.0;
    bool bracket = true;
    for (int order : {2, 4})
        for (int n : {9, 17, 51, 101, 257}) {
            const SbpOperator op = build_sbp(n, 1.0, order);
            const Eigen::MatrixXd B = op.B.asDiagonal();
            sbp = std::max(sbp, (op.Q + op.Q.transpose() - B).cwiseAbs().maxCoeff());
        }
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 4 + static_cast<int>(rng.uniform() * 120);
        const SbpOperator op = build_sbp(n, 0.2 + 3.0 * rng.uniform(), 2);
        Eigen::VectorXd A(n), u(n), v(n);
        for (int i = 0; i < n; ++i) {
            A(i) = 0.1 + 2.0 * rng.uniform();
            u(i) = rng.normal();
            v(i) = rng.normal();
        }
        const SplitResult r = split_varcoeff(op, A, u, v);
        const double scale = std::max(1.0, std::abs(r.interior) + std::abs(r.boundary));
        split = std::max(split, std::abs(r.form - r.interior - r.boundary) / scale);
        const double ts = sat_threshold(op, A);
        bracket &= boundary_form_max_eig(op, A, ts) <= 1e-8 && boundary_form_max_eig(op, A, 2.0 * ts) < 0.0 &&
                   boundary_form_max_eig(op, A, 0.5 * ts) > 0.0;
    }
    const double secs = seconds_since(t0);
    report(3, sbp <= kSbpTol && split <= kSplitTol && bracket && secs < kC3Seconds,
           "SBP: max |Q + Q^T - B| " + fmt("%.3g", sbp) + ", split defect " + fmt("%.3g", split) + ", tau* bracket " +
               (bracket ? "holds" : "broken") + ", " + fmt("%.2f s", secs));
}

void criterion4() {
    const LinearSystem b = dissipative_benchmark(41, kLambdaMax);
    const Eigen::MatrixXd M = b.generator(1.0);
    const double limit = cfl_limit_from_bound(kLambdaMax);
    CounterRng rng(2024, 4);
    Eigen::VectorXd u(b.dim());
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = rng.normal();
    bool monotone = true;
    double E = b.energy_of(u);
    for (int k = 0; k < 200; ++k) {
        u = euler_step(M, u, limit);
        const double En = b.energy_of(u);
        monotone &= En <= E * (1.0 + 1e-12);
        E = En;
    }
    const double amp = energy_gain(step_matrix(M, 1.5 * limit, Integrator::Euler), b.energy);
    const bool ok = monotone && amp > 1.0 && std::abs(limit - kPrintedLimit) <= 1e-4;
    report(4, ok,
           "CFL: limit " + fmt("%.6f", limit) + ", monotone at the limit " + (monotone ? "yes" : "no") +
               ", amplification at 1.5x " + fmt("%.6f", amp));
}

// Smallest certified rate over the step lengths the integrator takes on active segments.
double scheme_rate(const LinearSystem& sys, const SigmaClock& clock, const StepPlan& plan) {
    double k = std::numeric_limits<double>::infinity();
    const auto grid = clock.breakpoints();
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double w = clock.density(grid[i]);
        if (w <= 0.0) continue;
        const double len = grid[i + 1] - grid[i];
        const auto m = std::max(1L, static_cast<long>(std::ceil(len / plan.dt - 1e-9)));
        k = std::min(k, certified_step_rate(sys, w, len / static_cast<double>(m), plan.integrator));
    }
    return std::isfinite(k) ? k : 0.0;
}

void criterion5() {
    const auto t0 = Clock::now();
    CounterRng rng(2024, 5);
    int violations = 0;
    double worst = 0.0;
    for (int c = 0; c < kRandomClocks; ++c) {
        const int n = 2 + 2 * static_cast<int>(rng.uniform() * 3);
        Eigen::MatrixXd S(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) S(i, j) = rng.normal();
        S = (S - S.transpose()).eval();
        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i) w(i) = 0.5 + rng.uniform();
        LinearSystem sys;
        sys.K = w.cwiseInverse().asDiagonal() * S;
        sys.P = (0.1 + rng.uniform()) * Eigen::MatrixXd::Identity(n, n);
        sys.energy = w;

        const SigmaClock clock = random_clock(rng, 1.0 + 3.0 * rng.uniform());
        std::vector<JumpMap> jumps;
        std::vector<double> rho;
        for (std::size_t k = 0; k < clock.atoms().size(); ++k) {
            jumps.push_back(cayley_tick(w, {0}, rng.uniform()));
            rho.push_back(jumps.back().rho);
        }
        StepPlan plan;
        plan.dt = 0.02;
        const double kappa_h = scheme_rate(sys, clock, plan);
        Eigen::VectorXd u0(n);
        for (int i = 0; i < n; ++i) u0(i) = rng.normal();
        const Trajectory tr = integrate_on_clock(sys, clock, jumps, u0, plan);
        const MasterDecayReport r = verify_master_decay(tr, clock, kappa_h, rho, kSyntheticTol);
        violations += !r.pass;
        worst = std::max(worst, r.worst_ratio);
    }

    RunConfig cfg = preset("gcc-uniform");
    cfg.damping.lo = 0.0;
    cfg.damping.hi = cfg.space.L;
    const Assembled a = assemble(cfg);
    const Trajectory wave = integrate_on_clock(a.system, a.clock, a.jumps, a.u0, a.plan);
    std::vector<double> rho;
    for (const auto& j : a.jumps) rho.push_back(j.rho);
    const double kappa_h = scheme_rate(a.system, a.clock, a.plan);
    const MasterDecayReport wr = verify_master_decay(wave, a.clock, kappa_h, rho, kPdeTol);
    const EnvelopeReport er = envelope_report(wave, a.clock, a.kappa, a.c_sigma);
    const bool pde_ok = wr.pass && er.max_violation <= kPdeTol;
    const double secs = seconds_since(t0);
    report(5, violations == 0 && pde_ok && secs < kC5Seconds,
           std::to_string(violations) + " violations over " + std::to_string(kRandomClocks) +
               " random clocks (worst ratio " + fmt("%.12g", worst) + "), uniform-damping wave envelope violation " +
               fmt("%.3g", er.max_violation) + ", " + fmt("%.2f s", secs));
}

void criterion6() {
    const auto t0 = Clock::now();
    GammaProblem p;
    p.u = [](double x) { return std::sin(M_PI * x); };
    p.du = [](double x) { return M_PI * std::cos(M_PI * x); };
    p.exact_energy = M_PI * M_PI / 4.0;
    const GammaStudy st = recovery_study(p, {1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256}, SatConfig{1.0, 1.0, +1});
    const double secs = seconds_since(t0);
    report(6, st.errors_decreasing && st.error_slope >= kSlopeMin && st.sat_slope >= kSlopeMin && secs < kC6Seconds,
           "recovery: energy error slope " + fmt("%.4f", st.error_slope) + ", SAT residue slope " +
               fmt("%.4f", st.sat_slope) + ", " + fmt("%.2f s", secs));
}

void criterion7() {
    const auto t0 = Clock::now();
    const ClockLaw law = poisson_law(0.5, 2.0, 0.1);
    const double T = 4.0, kappa = 1.0, c_sigma = 0.15;
    std::vector<double> cps;
    for (int k = 1; k <= 8; ++k) cps.push_back(T * k / 8.0);
    ScalarLedgerModel model;
    model.kappa = kappa;
    model.c_model = c_sigma;
    const McReport rep = mc_expectation_envelope(model, law, T, kappa, c_sigma, 0.0, kPaths, 7, cps);
    std::vector<PathRecord> paths;
    for (std::size_t p = 0; p < kPaths; ++p) {
        PathRecord r{sample_clock(law, T, 7, p), cps, {}};
        r.times.insert(r.times.begin(), 0.0);
        for (double t : r.times) r.energies.push_back(model.energy(r.clock, t));
        paths.push_back(std::move(r));
    }
    const std::size_t viol = pathwise_check(paths, kappa, c_sigma);
    const double secs = seconds_since(t0);
    const McCheckpoint& last = rep.checkpoints.back();
    report(7, rep.outcome == Outcome::Pass && viol == 0 && compensator(law, T) == 2.8 && secs < kC7Seconds,
           "expectation envelope " + to_string(rep.outcome) + " (at t = 4: mean " + fmt("%.6f", last.mean_E) +
               ", 99% CI upper " + fmt("%.6f", last.ci_hi) + ", envelope " + fmt("%.6f", last.envelope) +
               ", eta* " + fmt("%.6f", rep.eta_star) + "), pathwise violations " + std::to_string(viol) + ", " +
               fmt("%.2f s", secs));
}

void criterion8() {
    const auto t0 = Clock::now();
    const std::vector<FailureReport> reps = run_atlas(atlas_scenarios());
    std::string bad;
    for (const auto& r : reps)
        if (!r.ok()) bad += " " + r.scenario;
    const ScheduleReport s = schedule_adversary();
    const double secs = seconds_since(t0);
    const bool ok = bad.empty() && s.sigma_rate_spread <= kPersistenceTol && s.collapse && secs < kC8Seconds;
    report(8, ok,
           std::to_string(reps.size()) + " scenarios, anomalies:" + (bad.empty() ? std::string(" none") : bad) +
               "; sigma-rate spread " + fmt("%.3g", s.sigma_rate_spread) + ", wall-rate collapse ratio " +
               fmt("%.6f", s.collapse_ratio) + ", " + fmt("%.2f s", secs));
}

void criterion9() {
    const SweepReport s = no_super_observability_sweep({1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256});
    double worst = -1.0;
    for (const auto& r : s.rows) worst = std::max(worst, r.measured);
    report(9, s.pass && worst <= s.c_sigma + kSuperObsSlack,
           "max measured c_sigma_h* " + fmt("%.6f", worst) + " against calibrated " + fmt("%.6f", s.c_sigma));
}

void criterion10() {
    const RunConfig cfg = preset("baseline");
    const Certificate c = certify(cfg);
    std::string failed;
    for (const auto& chk : c.checks)
        if (chk.status != CheckStatus::Pass) failed += " " + chk.name + "=" + to_string(chk.status);
    const bool params = std::abs(cfg.space.h() - 0.02) <= 1e-15 && std::abs(cfg.sat.sat.tau(cfg.space.h()) - 50.0) <= 1e-9 &&
                        cfg.calibration.kappa == 0.60 && cfg.integrator.lambda_max == 1.8 && cfg.window.var_sigma &&
                        *cfg.window.var_sigma == 0.22;
    report(10, c.pass() && failed.empty() && params,
           std::to_string(c.checks.size()) + " checks, not passing:" + (failed.empty() ? std::string(" none") : failed));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> all{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                 criterion6, criterion7, criterion8, criterion9, criterion10};
    for (const auto& f : all) f();
    std::printf("%d of %zu criteria failed\n", failures, all.size());
    return failures == 0 ? 0 : 1;
}
