#include "sigmalab/runner.hpp"

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "sigmalab/errors.hpp"
#include "sigmalab/io.hpp"

namespace sigmalab {

double configured_c_sigma(const RunConfig& cfg) {
    if (cfg.calibration.c_sigma) return *cfg.calibration.c_sigma;
    return cfg.calibration.c0 * cfg.damping.a_omega * cfg.calibration.lambda_omega;
}

namespace {

std::vector<JumpMap> build_jumps(const RunConfig& cfg, const LinearSystem& sys, double kappa, double c_sigma,
                                 int n_velocity) {
    std::vector<JumpMap> maps;
    for (std::size_t k = 0; k < cfg.clock.atoms.size(); ++k) {
        const AtomSpec& a = cfg.clock.atoms[k];
        switch (a.jump) {
            case JumpKind::Ledger: maps.push_back(ledger_map(sys.dim(), kappa, c_sigma, a.alpha)); break;
            case JumpKind::Scale: maps.push_back(scale_map(sys.dim(), a.amplitude)); break;
            case JumpKind::Cayley: {
                std::vector<int> idx;
                for (int i = 0; i < n_velocity; ++i) idx.push_back(i);
                maps.push_back(cayley_tick(sys.energy, idx, a.theta));
                break;
            }
        }
    }
    return maps;
}

}  // namespace

Assembled assemble(const RunConfig& cfg) {
    if (cfg.scenario == "worked-sigma") throw DomainError("assemble: worked-sigma has no dynamics");
    Assembled a{cfg.clock.build(), LinearSystem(), {}, Eigen::VectorXd(), StepPlan(), cfg.calibration.kappa,
                configured_c_sigma(cfg), std::nullopt, Eigen::VectorXd()};
    a.plan.dt = cfg.integrator.dt;
    a.plan.integrator = integrator_from_string(cfg.integrator.kind);
    a.plan.cfl_override = cfg.integrator.cfl_override;
    if (cfg.scenario == "scalar-oracle") {
        a.system = scalar_system(a.kappa * a.c_sigma);
        a.jumps = build_jumps(cfg, a.system, a.kappa, a.c_sigma, 1);
        a.u0 = Eigen::VectorXd::Ones(1);
        return a;
    }
    const SbpOperator op = build_sbp(cfg.space.n, cfg.space.L, cfg.space.order);
    const Eigen::VectorXd x = op.nodes();
    a.damping = Eigen::VectorXd::Constant(op.n, cfg.damping.background);
    const bool whole = cfg.damping.lo <= 0.0 && cfg.damping.hi >= cfg.space.L;
    for (int i = 0; i < op.n; ++i)
        if (whole || (x(i) > cfg.damping.lo && x(i) < cfg.damping.hi)) a.damping(i) = cfg.damping.a_omega;
    a.system = assemble_damped_wave(op, a.damping, cfg.sat.sat, cfg.sat.allow_flipped);
    a.system.name = cfg.scenario;
    a.op = op;
    a.jumps = build_jumps(cfg, a.system, a.kappa, a.c_sigma, op.n);
    if (cfg.initial == "mode") {
        a.u0 = max_phase_mode_state(a.system, slowest_mode(a.system, 1.0));
    } else {
        Eigen::VectorXd u(op.n);
        for (int i = 0; i < op.n; ++i) u(i) = std::exp(-100.0 * std::pow(x(i) / cfg.space.L - 0.5, 2));
        a.u0 = wave_state_from_displacement(op, u);
    }
    return a;
}

RunArtifacts run(const RunConfig& cfg) {
    RunArtifacts out;
    if (cfg.scenario == "worked-sigma") {
        const WorkedExemplar w = worked_exemplar();
        const double expected[] = {0.0, 0.0, 0.8, 0.8, 1.4, 1.4, 1.4};
        CsvTable t({"t", "left_limit", "sigma", "benchmark"});
        bool ok = w.rows.size() == 7;
        for (std::size_t i = 0; i < w.rows.size(); ++i) {
            const auto& r = w.rows[i];
            t.add_row({fmt12(r.t), r.left_limit ? "1" : "0", fmt12(r.sigma), fmt12(r.benchmark)});
            ok &= i < 7 && std::abs(r.sigma - expected[i]) <= 1e-12;
        }
        out.files.push_back({"worked_sigma.csv", t.str()});
        out.verified = ok;
        out.summary = ok ? "worked-sigma: sigma and benchmark rows reproduced" : "worked-sigma: mismatch";
        return out;
    }

    const Assembled a = assemble(cfg);
    const Trajectory tr = integrate_on_clock(a.system, a.clock, a.jumps, a.u0, a.plan);
    const double E0 = tr.samples.front().E;
    CsvTable t({"t", "sigma", "E", "event", "envelope"});
    for (const auto& s : tr.samples) {
        const double B = E0 * std::exp(-2.0 * a.kappa * a.c_sigma * s.sigma);
        t.add_row({fmt12(s.t), fmt12(s.sigma), fmt12(s.E), to_string(s.event), fmt12(B)});
    }
    const EnvelopeReport rep = envelope_report(tr, a.clock, a.kappa, a.c_sigma);
    out.files.push_back({cfg.trajectory_csv, t.str()});
    out.files.push_back({cfg.report_csv, EnvelopeReport::csv_header() + "\n" + rep.csv_row() + "\n"});
    out.report = rep;
    out.verified = rep.max_violation <= cfg.tolerance;
    std::ostringstream os;
    os << cfg.scenario << ": max_violation=" << fmt12(rep.max_violation) << " tolerance=" << fmt12(cfg.tolerance)
       << (out.verified ? " ok" : " VIOLATED");
    out.summary = os.str();
    return out;
}

std::vector<NumberEntry> numbers_table() {
    const std::string src = "baseline parameter table";
    return {
        {"reporting window", "(T, sigma(T))", {8.0, 8.0}, "wall time used as sigma", src},
        {"grid spacing in sigma-time", "h", {0.02}, "Delta sigma", src},
        {"SAT scale", "tau_h", {50.0}, "τ_h ≃ h⁻¹", src},
        {"dissipation parameter", "kappa", {0.60}, "envelope exp(-2 kappa c_sigma sigma(t))", src},
        {"CFL / spectral bound", "Lambda_max", {1.8}, "explicit steps need dt <= 2 / Lambda_max", src},
        {"GCC damping", "a_omega", {0.15}, "lower bound on damping over omega", src},
        {"GCC geometric constant", "lambda_omega", {0.70}, "geometric control constant", src},
        {"sigma variation", "Var_sigma", {0.22}, "admissible window point", "admissible window"},
        {"admissible h range", "h", {0.006, 0.050}, "window bounds", "admissible window"},
        {"admissible Var_sigma range", "Var_sigma", {0.12, 0.28}, "window bounds", "admissible window"},
    };
}

std::string numbers_json(const std::vector<NumberEntry>& table) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : table)
        arr.push_back({{"quantity", e.quantity}, {"symbol", e.symbol}, {"value", e.value}, {"note", e.note},
                       {"source", e.source}});
    return arr.dump(2) + "\n";
}

std::vector<NumberEntry> parse_numbers(const std::string& json_text) {
    const auto arr = nlohmann::json::parse(json_text);
    std::vector<NumberEntry> out;
    for (const auto& e : arr)
        out.push_back({e.at("quantity").get<std::string>(), e.at("symbol").get<std::string>(),
                       e.at("value").get<std::vector<double>>(), e.at("note").get<std::string>(),
                       e.at("source").get<std::string>()});
    return out;
}

}  // namespace sigmalab
