#pragma once

// One-call verification runner: conservation, involution blocks, ranks,
// left/right agreement, limit slopes and the family-specific certificates,
// collected into a deterministic result bundle.

#include "koalint/config.hpp"
#include "koalint/verify.hpp"

namespace koalint::driver {

struct InvolutionBlock {
    std::vector<std::string> labels;
    std::vector<std::vector<verify::BracketReport>> rows;  // row i holds pairs (i, j > i)
};

struct VerifyResults {
    config::SystemConfig cfg;
    std::vector<verify::BracketReport> conservation;
    std::vector<InvolutionBlock> involution;
    std::vector<verify::RankReport> ranks;
    std::vector<verify::PointwiseReport> left_right;
    std::vector<verify::LimitReport> limits;
    std::vector<verify::PointwiseReport> identities;
    std::vector<std::string> errata_notes;

    bool all_pass() const;
};

// Options taken from the config; seed/points/tol may be overridden upstream.
verify::SweepOptions sweep_options(const config::SystemAssembly& sys);

VerifyResults run_verification(const config::SystemAssembly& sys);

}  // namespace koalint::driver
