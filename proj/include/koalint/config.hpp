#pragma once

// System configs (JSON) and the per-family assembly consumed by the
// verification driver and the CLI.  Unknown or inapplicable fields are
// rejected so parameter-name typos cannot silently fall back to defaults.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "koalint/observable.hpp"
#include "koalint/verify.hpp"

namespace koalint::config {

enum class Family { sw, sw_general_f, sw_deformed, sw_deformed_general_f, stackel, comodule };
enum class FChoice { linear, quadratic, exp2z };

struct SystemConfig {
    Family family = Family::sw;
    int n = 1;
    double omega2 = 1.0;
    std::vector<double> b;
    double z = 0.0;
    double sigma = 0.0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double b1 = 1.0;
    FChoice f_choice = FChoice::linear;
    std::uint64_t seed = 42;
    int n_points = 100;
    double tol = 1e-10;
};

std::string family_name(Family family);
std::string f_choice_name(FChoice choice);

// throws ConfigInvalid with a field-path diagnostic
SystemConfig parse_config(const std::string& json_text, int max_n = 12);
SystemConfig load_config(const std::string& path, int max_n = 12);

// F-family member with exact derivatives; exp2z is (e^{2zu}-1)/(2z) scaled by
// omega^2, which collapses to the linear choice at z = 0.
SmoothFn make_f_choice(FChoice choice, double omega2, double z);

struct LimitSpec {
    std::string label;
    std::string parameter;                           // "z" or "sigma"
    std::function<Observable(double)> quantity_at;   // quantity as a function of the parameter
    Observable reference;                            // exact limit function
};

struct SystemAssembly {
    SystemConfig cfg;
    verify::Labeled hamiltonian;
    std::vector<verify::Labeled> conserved;  // conservation targets (excluding H)
    // involution is checked blockwise: the separation integrals Z_j commute
    // with H and each other but not with the coalgebra towers
    std::vector<std::vector<verify::Labeled>> involution_blocks;
    std::vector<verify::Labeled> rank_set;
    int expected_rank = 0;
    std::vector<verify::Labeled> rank_set_extended;  // empty when no extra integral applies
    int expected_rank_extended = 0;
    std::optional<std::pair<verify::Labeled, verify::Labeled>> left_right;
    std::vector<LimitSpec> limits;
    std::function<bool(const PhasePoint&)> accept;   // sampling admission filter
    std::vector<std::string> errata_notes;
    PhasePoint default_initial_state;
};

SystemAssembly build_system(const SystemConfig& cfg);

}  // namespace koalint::config
