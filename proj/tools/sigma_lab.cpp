#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "sigmalab/atlas.hpp"
#include "sigmalab/certify.hpp"
#include "sigmalab/config.hpp"
#include "sigmalab/errors.hpp"
#include "sigmalab/gamma.hpp"
#include "sigmalab/io.hpp"
#include "sigmalab/runner.hpp"
#include "sigmalab/stochastic.hpp"

using namespace sigmalab;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kVerificationFailure = 2;
constexpr int kAtlasAnomaly = 3;

struct Common {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "JSON run configuration");
    cmd->add_option("--out", c.out, "output directory, or a file path ending in an extension");
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_flag("--quiet", c.quiet, "suppress console output");
}

// A path with an extension names the file itself; anything else is a directory.
std::string resolve_out(const std::string& out, const std::string& default_name) {
    const std::filesystem::path p(out);
    if (p.has_extension()) return p.string();
    return (p / default_name).string();
}

RunConfig load(const Common& c, const std::string& scenario) {
    RunConfig cfg;
    if (!c.config.empty())
        cfg = load_config(c.config);
    else if (!scenario.empty())
        cfg = preset(scenario);
    else
        throw ConfigError("scenario", "missing required field (give a scenario name or --config)");
    if (c.seed) cfg.seed = *c.seed;
    return cfg;
}

int cmd_run(const Common& c, const std::string& scenario) {
    const RunConfig cfg = load(c, scenario);
    const RunArtifacts art = run(cfg);
    for (const auto& [name, content] : art.files) write_atomic(resolve_out(c.out, name), content);
    if (!c.quiet) {
        std::cout << art.summary << "\n";
        if (art.report) std::cout << art.report->key_values() << "\n";
    }
    return art.verified ? kOk : kVerificationFailure;
}

int cmd_certify(const Common& c, const std::string& scenario) {
    const Certificate cert = certify(load(c, scenario.empty() && c.config.empty() ? "baseline" : scenario));
    write_atomic(resolve_out(c.out, "certificate.csv"), cert.csv());
    if (!c.quiet) {
        for (const auto& chk : cert.checks) std::cout << chk.name << ": " << to_string(chk.status) << "\n";
        std::cout << "certificate: " << (cert.pass() ? "pass" : "fail") << "\n";
    }
    return cert.pass() ? kOk : kVerificationFailure;
}

int cmd_gamma(const Common& c, double tau_scale) {
    GammaProblem p;
    p.u = [](double x) { return std::sin(M_PI * x); };
    p.du = [](double x) { return M_PI * std::cos(M_PI * x); };
    p.exact_energy = M_PI * M_PI / 4.0;
    const GammaStudy st = recovery_study(p, {1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256}, SatConfig{tau_scale, 1.0, +1});
    CsvTable t({"h", "energy", "error", "sat_residue"});
    for (std::size_t i = 0; i < st.h_list.size(); ++i)
        t.add_numeric_row({st.h_list[i], st.energies[i], st.errors[i], st.sat_residues[i]});
    write_atomic(resolve_out(c.out, "gamma_study.csv"), t.str());
    if (!c.quiet)
        std::cout << "error_slope=" << fmt12(st.error_slope) << " sat_slope=" << fmt12(st.sat_slope)
                  << (st.passed ? " ok" : " FAILED") << "\n";
    return st.passed ? kOk : kVerificationFailure;
}

struct StochasticOpts {
    std::string law = "poisson";
    double rate = 2.0;
    double alpha = 0.1;
    double base = 0.5;
    double horizon = 4.0;
    std::size_t paths = 10000;
    double kappa = 1.0;
    double c_sigma = 0.15;
    double delta = 0.0;
    double level = 1.0;
    double switch_rate = 4.0;
};

int cmd_stochastic(const Common& c, const StochasticOpts& o) {
    ClockLaw law;
    if (o.law == "poisson") {
        law = poisson_law(o.base, o.rate, o.alpha);
    } else if (o.law == "markov") {
        Eigen::MatrixXd Q(2, 2);
        Q << -o.switch_rate, o.switch_rate, o.switch_rate, -o.switch_rate;
        law = markov_law(Q, Eigen::Vector2d(0.0, o.level), Eigen::Vector2d(0.5, 0.5), o.base);
    } else {
        throw ConfigError("--law", "expected poisson or markov");
    }
    const std::uint64_t seed = c.seed.value_or(7);
    std::vector<double> checkpoints;
    for (int k = 1; k <= 8; ++k) checkpoints.push_back(o.horizon * k / 8.0);
    ScalarLedgerModel model;
    model.kappa = o.kappa;
    model.c_model = o.c_sigma;
    const McReport rep = mc_expectation_envelope(model, law, o.horizon, o.kappa, o.c_sigma, o.delta, o.paths, seed,
                                                 checkpoints);
    std::vector<PathRecord> records;
    for (std::size_t p = 0; p < o.paths; ++p) {
        PathRecord r{sample_clock(law, o.horizon, seed, p), checkpoints, {}};
        r.times.insert(r.times.begin(), 0.0);
        for (double t : r.times) r.energies.push_back(model.energy(r.clock, t));
        records.push_back(std::move(r));
    }
    const std::size_t violations = pathwise_check(records, o.kappa, o.c_sigma);

    CsvTable t({"t", "mean_E", "ci_lo", "ci_hi", "envelope"});
    for (const auto& cp : rep.checkpoints) t.add_numeric_row({cp.t, cp.mean_E, cp.ci_lo, cp.ci_hi, cp.envelope});
    write_atomic(resolve_out(c.out, "mc.csv"), t.str());
    if (!c.quiet) {
        for (const auto& cp : rep.checkpoints)
            std::cout << "t=" << fmt12(cp.t) << " mean=" << fmt12(cp.mean_E) << " ci=[" << fmt12(cp.ci_lo) << ", "
                      << fmt12(cp.ci_hi) << "] envelope=" << fmt12(cp.envelope) << " " << to_string(cp.outcome) << "\n";
        std::cout << "expectation envelope: " << to_string(rep.outcome) << " (eta*=" << fmt12(rep.eta_star) << ")\n";
        std::cout << "pathwise violations: " << violations << " of " << o.paths << "\n";
    }
    return (rep.outcome == Outcome::Fail || violations > 0) ? kVerificationFailure : kOk;
}

int cmd_atlas(const Common& c, bool all, const std::vector<std::string>& scenarios) {
    std::vector<std::string> names = scenarios;
    if (all || names.empty()) names = atlas_scenarios();
    const std::vector<FailureReport> reports = run_atlas(names);
    CsvTable t({"scenario", "observed", "control_passed", "key", "value"});
    bool ok = true;
    for (const auto& r : reports) {
        ok &= r.ok();
        for (const auto& w : r.witness)
            t.add_row({r.scenario, r.observed ? "1" : "0", r.control_passed ? "1" : "0", w.key, fmt12(w.value)});
        if (!c.quiet)
            std::cout << r.scenario << ": expected failure " << (r.observed ? "observed" : "NOT observed")
                      << ", control " << (r.control_passed ? "ok" : "FAILED") << "\n";
    }
    write_atomic(resolve_out(c.out, "atlas.csv"), t.str());
    return ok ? kOk : kAtlasAnomaly;
}

int cmd_numbers(const Common& c) {
    const std::string text = numbers_json(numbers_table());
    const std::string path = resolve_out(c.out, "numbers.json");
    write_atomic(path, text);
    if (!c.quiet) std::cout << "wrote " << path << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sigma-lab: energy decay on measure-time clocks"};
    app.require_subcommand(1);

    Common run_c, cert_c, gamma_c, sto_c, atlas_c, num_c;
    std::string run_scenario, cert_scenario;
    auto* run_cmd = app.add_subcommand("run", "run a scenario and write trajectory and envelope CSV");
    run_cmd->add_option("scenario", run_scenario, "preset name")->check(CLI::IsMember(preset_names()));
    add_common(run_cmd, run_c);

    auto* cert_cmd = app.add_subcommand("certify", "run the certification checklist");
    cert_cmd->add_option("scenario", cert_scenario, "preset name (default baseline)")->check(CLI::IsMember(preset_names()));
    add_common(cert_cmd, cert_c);

    double gamma_tau = 1.0;
    auto* gamma_cmd = app.add_subcommand("gamma-study", "recovery and SAT residue rates for sin(pi x)");
    gamma_cmd->add_option("--tau-scale", gamma_tau, "SAT scale, tau_h = scale / h");
    add_common(gamma_cmd, gamma_c);

    StochasticOpts so;
    auto* sto_cmd = app.add_subcommand("stochastic", "Monte Carlo expectation and pathwise envelopes");
    sto_cmd->add_option("--law", so.law, "poisson or markov");
    sto_cmd->add_option("--rate", so.rate, "Poisson intensity");
    sto_cmd->add_option("--alpha", so.alpha, "atom mass");
    sto_cmd->add_option("--base", so.base, "base density w");
    sto_cmd->add_option("--horizon", so.horizon, "horizon T");
    sto_cmd->add_option("--paths", so.paths, "number of paths");
    sto_cmd->add_option("--kappa", so.kappa, "dissipation parameter");
    sto_cmd->add_option("--c-sigma", so.c_sigma, "structural constant");
    sto_cmd->add_option("--delta", so.delta, "noise allowance in [0, 1)");
    sto_cmd->add_option("--level", so.level, "damping level of the active Markov state");
    sto_cmd->add_option("--switch-rate", so.switch_rate, "symmetric Markov switching rate");
    add_common(sto_cmd, sto_c);

    bool atlas_all = false;
    std::vector<std::string> atlas_names;
    auto* atlas_cmd = app.add_subcommand("atlas", "run the failure atlas");
    atlas_cmd->add_flag("--all", atlas_all, "all scenarios");
    atlas_cmd->add_option("--scenario", atlas_names, "scenario name")->check(CLI::IsMember(atlas_scenarios()));
    add_common(atlas_cmd, atlas_c);

    auto* num_cmd = app.add_subcommand("numbers", "write the baseline parameter table");
    add_common(num_cmd, num_c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (*run_cmd) return cmd_run(run_c, run_scenario);
        if (*cert_cmd) return cmd_certify(cert_c, cert_scenario);
        if (*gamma_cmd) return cmd_gamma(gamma_c, gamma_tau);
        if (*sto_cmd) return cmd_stochastic(sto_c, so);
        if (*atlas_cmd) return cmd_atlas(atlas_c, atlas_all, atlas_names);
        if (*num_cmd) return cmd_numbers(num_c);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kConfigError;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kVerificationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}
