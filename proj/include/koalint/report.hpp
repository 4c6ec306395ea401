#pragma once

// Report rendering.  The JSON is emitted by hand so that key order is the
// documented section order and every float carries 17 significant digits;
// identical runs therefore produce byte-identical files (modulo the optional
// generated_at stamp).

#include <string>
#include <vector>

#include "koalint/driver.hpp"
#include "koalint/dynamics.hpp"

namespace koalint::report {

std::string render_verify_report(const driver::VerifyResults& results, bool with_timestamp);

std::string render_trajectory_csv(const dynamics::Trajectory& traj);

struct ScanRow {
    double value = 0.0;
    double max_scaled_residual = 0.0;
    int median_rank = 0;
    int expected_rank = 0;
    double limit_diff = 0.0;
    bool pass = false;
};

std::string render_scan_csv(const std::string& parameter, const std::vector<ScanRow>& rows);

}  // namespace koalint::report
