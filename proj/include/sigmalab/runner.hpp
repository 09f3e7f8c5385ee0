#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sigmalab/config.hpp"
#include "sigmalab/integrators.hpp"
#include "sigmalab/ledger.hpp"
#include "sigmalab/models.hpp"

namespace sigmalab {

/// Everything a scalar or wave scenario needs to integrate.
struct Assembled {
    SigmaClock clock;
    LinearSystem system;
    std::vector<JumpMap> jumps;
    Eigen::VectorXd u0;
    StepPlan plan;
    double kappa = 0.0;
    double c_sigma = 0.0;
    std::optional<SbpOperator> op;  // wave scenarios only
    Eigen::VectorXd damping;
};

/// c_sigma from the calibration section: the explicit value when given, else c0 a_omega lambda_omega.
double configured_c_sigma(const RunConfig& cfg);

/// Builds system, jumps and initial data; wave scenarios throw DomainError for a flipped SAT
/// unless allow_flipped is set.
Assembled assemble(const RunConfig& cfg);

struct RunArtifacts {
    std::vector<std::pair<std::string, std::string>> files;  // file name, content
    std::optional<EnvelopeReport> report;
    bool verified = false;
    std::string summary;
};

/// Deterministic; file contents use 12 significant digits.
RunArtifacts run(const RunConfig& cfg);

struct NumberEntry {
    std::string quantity;
    std::string symbol;
    std::vector<double> value;
    std::string note;
    std::string source;

    bool operator==(const NumberEntry&) const = default;
};

/// Baseline constants with their provenance labels.
std::vector<NumberEntry> numbers_table();
std::string numbers_json(const std::vector<NumberEntry>& table);
std::vector<NumberEntry> parse_numbers(const std::string& json_text);

}  // namespace sigmalab
