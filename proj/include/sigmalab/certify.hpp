#pragma once

#include <string>
#include <vector>

#include "sigmalab/atlas.hpp"
#include "sigmalab/config.hpp"

namespace sigmalab {

enum class CheckStatus { Pass, Fail, Skipped };
std::string to_string(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Skipped;
    std::string note;
    std::vector<Witness> witness;
};

struct Certificate {
    std::vector<CheckResult> checks;

    bool pass() const;  // all non-skipped checks pass
    const CheckResult& check(const std::string& name) const;
    std::string csv() const;  // check,status,key,value,note
};

/// Checklist: clock, H1..H4, SAT sign/scale, CFL window, discrete Gronwall premise, envelope,
/// admissible window and Gamma recovery. Failures are recorded, never thrown. Checks that need
/// the full semi-discrete system are skipped when the SAT check fails.
Certificate certify(const RunConfig& cfg);

}  // namespace sigmalab
