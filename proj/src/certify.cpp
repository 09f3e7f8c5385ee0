#include "sigmalab/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "sigmalab/errors.hpp"
#include "sigmalab/gamma.hpp"
#include "sigmalab/io.hpp"
#include "sigmalab/ledger.hpp"
#include "sigmalab/runner.hpp"

namespace sigmalab {

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Skipped: return "skipped";
    }
    return "unknown";
}

bool Certificate::pass() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

const CheckResult& Certificate::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw DomainError("Certificate: no check named " + name);
}

std::string Certificate::csv() const {
    CsvTable t({"check", "status", "key", "value", "note"});
    for (const auto& c : checks) {
        if (c.witness.empty()) t.add_row({c.name, to_string(c.status), "", "", c.note});
        for (const auto& w : c.witness) t.add_row({c.name, to_string(c.status), w.key, fmt12(w.value), c.note});
    }
    return t.str();
}

namespace {

CheckResult make(const std::string& name, bool ok, std::string note, std::vector<Witness> w = {}) {
    return {name, ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(note), std::move(w)};
}

CheckResult skipped(const std::string& name, std::string note) { return {name, CheckStatus::Skipped, std::move(note), {}}; }

std::set<double> densities(const SigmaClock& clock) {
    std::set<double> ws;
    for (const auto& s : clock.segments()) ws.insert(s.w);
    return ws;
}

}  // namespace

Certificate certify(const RunConfig& cfg) {
    Certificate cert;
    auto add = [&](CheckResult r) { cert.checks.push_back(std::move(r)); };

    std::optional<SigmaClock> clock;
    try {
        clock = cfg.clock.build();
        const bool ok = clock->sigma(0.0) == 0.0 && std::isfinite(clock->total_mass());
        add(make("clock", ok, "finite measure, sigma(0) = 0, finitely many atoms",
                 {{"total_mass", clock->total_mass()},
                  {"ac_mass", clock->ac_mass()},
                  {"atoms", static_cast<double>(clock->atoms().size())},
                  {"flats", static_cast<double>(clock->decompose().flats.size())}}));
    } catch (const DomainError& e) {
        add(make("clock", false, e.what()));
    }

    const bool dynamic = cfg.scenario != "worked-sigma";
    const bool wave = dynamic && cfg.scenario != "scalar-oracle";
    const double kappa = cfg.calibration.kappa;
    const double c_sigma = configured_c_sigma(cfg);

    // H1 and H2 use the SAT magnitude with the dissipative sign, so they do not depend on the sign check.
    if (!dynamic || !clock) {
        add(skipped("H1-observability", "no dynamics"));
        add(skipped("H2-dissipative", "no dynamics"));
    } else if (!wave) {
        add(make("H1-observability", c_sigma > 0.0 && kappa > 0.0, "scalar model decays at 2 kappa c_sigma exactly",
                 {{"c_sigma", c_sigma}, {"kappa", kappa}}));
        add(make("H2-dissipative", kappa * c_sigma >= 0.0, "u' = -kappa c_sigma w u", {{"rate", kappa * c_sigma}}));
    } else {
        RunConfig interior = cfg;
        interior.sat.sat.sign = +1;
        interior.sat.allow_flipped = false;
        interior.clock.atoms.clear();
        interior.initial = "bump";
        const Assembled a = assemble(interior);
        const SlowestMode m = slowest_mode(a.system, 1.0);
        const double modal_c = m.energy_rate / (2.0 * kappa);
        add(make("H1-observability", c_sigma > 0.0 && modal_c >= c_sigma,
                 "slowest mode decays at least at 2 kappa c_sigma",
                 {{"c_sigma", c_sigma}, {"modal_c_sigma", modal_c}}));
        double worst = -std::numeric_limits<double>::infinity();
        for (double w : densities(*clock))
            worst = std::max(worst, weighted_sym_max_eig(a.system.generator(w), a.system.energy));
        const double scale = std::max(1.0, a.system.generator(1.0).cwiseAbs().maxCoeff());
        add(make("H2-dissipative", worst <= 1e-10 * scale, "largest energy rate of the generator",
                 {{"max_energy_rate", worst}}));
    }

    // SAT sign and scale.
    std::optional<Assembled> full;
    bool sat_ok = true;
    if (wave) {
        const SbpOperator op = build_sbp(cfg.space.n, cfg.space.L, cfg.space.order);
        const double tau = cfg.sat.sat.tau(op.h);
        const Eigen::VectorXd A = Eigen::VectorXd::Ones(op.n);
        const double thr = sat_threshold(op, A);
        const double beig = boundary_form_max_eig(op, A, tau);
        const bool scale_ok = std::abs(cfg.sat.sat.exponent - 1.0) <= 1e-12;
        sat_ok = cfg.sat.sat.dissipative() && tau >= thr && beig <= 0.0 && scale_ok;
        add(make("sat", sat_ok, "dissipative sign, tau_h >= tau*, tau_h ~ 1/h",
                 {{"tau_h", tau}, {"tau_star", thr}, {"boundary_max_eig", beig}, {"exponent", cfg.sat.sat.exponent}}));
    } else {
        add(skipped("sat", dynamic ? "no spatial boundary" : "no dynamics"));
    }

    if (dynamic && clock && sat_ok) {
        try {
            full = assemble(cfg);
        } catch (const std::exception& e) {
            add(make("H3-regularity", false, e.what()));
        }
    }

    if (!full) {
        for (const char* n : {"H3-regularity", "H4-atoms", "cfl", "gronwall", "envelope"})
            if (std::none_of(cert.checks.begin(), cert.checks.end(), [&](const CheckResult& c) { return c.name == n; }))
                add(skipped(n, dynamic ? "needs the assembled system (SAT check failed)" : "no dynamics"));
        add(skipped("window", "needs a trajectory"));
        add(skipped("gamma", wave ? "needs a dissipative SAT" : "no spatial discretization"));
        return cert;
    }

    const Assembled& a = *full;
    std::vector<double> rho;
    double worst_rho = 0.0;
    for (const auto& j : a.jumps) {
        rho.push_back(j.rho);
        worst_rho = std::max(worst_rho, contraction_factor(j.J, a.system.energy));
    }
    add(make("H4-atoms", worst_rho <= 1.0 + 1e-12, "every atom map is non-expansive in the energy",
             {{"max_contraction", worst_rho}, {"atoms", static_cast<double>(a.jumps.size())}}));

    std::optional<Trajectory> tr;
    try {
        tr = integrate_on_clock(a.system, *clock, a.jumps, a.u0, a.plan);
        const double bv = clock->total_mass();
        add(make("H3-regularity", true, "trajectory finite on the whole horizon",
                 {{"samples", static_cast<double>(tr->samples.size())}, {"clock_variation", bv}}));
    } catch (const std::exception& e) {
        add(make("H3-regularity", false, e.what()));
    }

    // CFL window.
    {
        double limit = std::numeric_limits<double>::infinity();
        double lam = 0.0;
        for (double w : densities(*clock)) {
            const Eigen::MatrixXd M = a.system.generator(w);
            lam = std::max(lam, spectral_radius(M));
            limit = std::min(limit, cfl_limit(M));
        }
        const double bound = cfl_limit_from_bound(cfg.integrator.lambda_max);
        if (a.plan.integrator == Integrator::Midpoint) {
            add(make("cfl", a.plan.dt <= bound, "implicit midpoint: unconditional; dt within 2 / Lambda_max",
                     {{"dt", a.plan.dt}, {"limit_from_lambda_max", bound}, {"spectral_radius", lam}}));
        } else {
            add(make("cfl", a.plan.dt <= limit && lam <= cfg.integrator.lambda_max,
                     "explicit step within the spectral CFL limit",
                     {{"dt", a.plan.dt}, {"cfl_limit", limit}, {"spectral_radius", lam},
                      {"lambda_max", cfg.integrator.lambda_max}}));
        }
    }

    if (!tr) {
        add(skipped("gronwall", "no trajectory"));
        add(skipped("envelope", "no trajectory"));
        add(skipped("window", "no trajectory"));
    } else {
        // Per-step non-expansiveness and the windowed premise over 2 L / wave speed.
        double min_rate = std::numeric_limits<double>::infinity();
        double max_gain = 0.0;
        for (double w : densities(*clock)) {
            const Eigen::MatrixXd Phi = step_matrix(a.system.generator(w), a.plan.dt, a.plan.integrator);
            max_gain = std::max(max_gain, energy_gain(Phi, a.system.energy));
            if (w > 0.0) min_rate = std::min(min_rate, certified_step_rate(a.system, w, a.plan.dt, a.plan.integrator));
        }
        const double window = wave ? 2.0 * cfg.space.L : a.plan.dt;
        const MasterDecayReport wr =
            verify_windowed_decay(*tr, *clock, kappa * c_sigma, rho, window, cfg.tolerance);
        add(make("gronwall", max_gain <= 1.0 + 1e-12 && wr.pass,
                 "per-step non-expansive; windowed dissipation >= 2 kappa c_sigma",
                 {{"max_step_gain", max_gain},
                  {"certified_step_kappa", std::isfinite(min_rate) ? min_rate : 0.0},
                  {"window", window},
                  {"windowed_worst_ratio", wr.worst_ratio}}));

        const EnvelopeReport er = envelope_report(*tr, *clock, kappa, c_sigma);
        add(make("envelope", er.max_violation <= cfg.tolerance, "E(t) <= E(0) exp(-2 kappa c_sigma sigma(t))",
                 {{"max_violation", er.max_violation}, {"tolerance", cfg.tolerance},
                  {"sigma_rate", er.rates.sigma_rate}}));

        double var;
        if (cfg.window.var_sigma) {
            var = *cfg.window.var_sigma;
        } else {
            std::vector<double> ts, vs;
            for (const auto& s : tr->samples) {
                ts.push_back(s.t);
                vs.push_back(s.E / tr->samples.front().E);
            }
            var = var_sigma(ts, vs, *clock);
        }
        const double h = a.plan.dt;
        const bool ok = h >= cfg.window.h_min && h <= cfg.window.h_max && var >= cfg.window.var_min &&
                        var <= cfg.window.var_max;
        add(make("window", ok, "(h, Var_sigma) inside the admissible window",
                 {{"h", h}, {"var_sigma", var}, {"h_min", cfg.window.h_min}, {"h_max", cfg.window.h_max},
                  {"var_min", cfg.window.var_min}, {"var_max", cfg.window.var_max}}));
    }

    if (wave) {
        GammaProblem p;
        p.u = [](double x) { return std::sin(M_PI * x); };
        p.du = [](double x) { return M_PI * std::cos(M_PI * x); };
        p.exact_energy = M_PI * M_PI / 4.0;
        const GammaStudy st = recovery_study(p, {1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256}, cfg.sat.sat);
        add(make("gamma", st.passed, "recovery error and SAT residue slopes >= 0.9",
                 {{"error_slope", st.error_slope}, {"sat_slope", st.sat_slope}}));
    } else {
        add(skipped("gamma", "no spatial discretization"));
    }
    return cert;
}

}  // namespace sigmalab
