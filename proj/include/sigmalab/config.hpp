#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigmalab/clock.hpp"
#include "sigmalab/jumps.hpp"
#include "sigmalab/sbp.hpp"

namespace sigmalab {

struct AtomSpec {
    double t = 0.0;
    double alpha = 0.0;
    JumpKind jump = JumpKind::Ledger;
    double theta = 0.5;  // Cayley strength
    double amplitude = 1.0;  // Scale factor
};

struct ClockSpec {
    double horizon = 8.0;
    std::vector<Segment> segments;  // empty means density 1 on [0, horizon]
    std::vector<AtomSpec> atoms;

    SigmaClock build() const;
};

struct SpaceSpec {
    int n = 51;
    double L = 1.0;
    int order = 2;

    double h() const { return L / (n - 1); }
};

struct DampingSpec {
    double a_omega = 0.15;
    double lo = 0.0;
    double hi = 1.0;
    double background = 0.0;
};

struct SatSpec {
    SatConfig sat{};
    bool allow_flipped = false;
};

struct IntegratorSpec {
    std::string kind = "midpoint";
    double dt = 0.02;
    bool cfl_override = false;
    double lambda_max = 1.8;
};

struct CalibrationSpec {
    double c0 = 1.0;
    double kappa = 0.6;
    double lambda_omega = 0.7;
    std::optional<double> c_sigma;  // overrides c0 a_omega lambda_omega
};

struct WindowSpec {
    double h_min = 0.006;
    double h_max = 0.050;
    double var_min = 0.12;
    double var_max = 0.28;
    std::optional<double> var_sigma;  // else the total variation of E/E0 along the run
};

struct RunConfig {
    std::string scenario;
    std::uint64_t seed = 1;
    ClockSpec clock;
    SpaceSpec space;
    DampingSpec damping;
    SatSpec sat;
    IntegratorSpec integrator;
    CalibrationSpec calibration;
    WindowSpec window;
    std::string initial = "mode";  // mode | bump
    double tolerance = 1e-3;       // envelope tolerance (relative)
    std::string trajectory_csv = "trajectory.csv";
    std::string report_csv = "envelope.csv";
};

/// Known scenario names: worked-sigma, scalar-oracle, gcc-uniform, gcc-hetero, baseline.
std::vector<std::string> preset_names();
RunConfig preset(const std::string& scenario);

/// Parses a JSON document. "scenario" is required and selects the preset that the other
/// sections override. Unknown keys and type mismatches raise ConfigError with the key path.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace sigmalab
