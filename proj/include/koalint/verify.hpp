#pragma once

// Verification harness: bracket residual sweeps, involution matrices,
// functional-independence ranks, pointwise identities and deformation-limit
// slopes.  Every sweep derives one RNG stream per sample index from the master
// seed, so reports are byte-reproducible for a given config and seed,
// independent of thread count.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "koalint/observable.hpp"
#include "koalint/rng.hpp"

namespace koalint::verify {

struct Labeled {
    std::string label;
    Observable fn;
};

struct SweepOptions {
    int n_points = 100;
    double tol = 1e-10;
    std::uint64_t seed = 42;
    int max_retries = 10;   // resamples per point before SamplingExhausted
    int rank_points = 5;    // probe points for the rank check (median)
    double rank_tol = 1e-8;
    // optional extra admission filter on sampled points (e.g. the comodule
    // denominator margin); a rejected draw counts as a retry
    std::function<bool(const PhasePoint&)> accept;
};

struct BracketReport {
    std::string left;
    std::string right;
    double max_scaled = 0.0;  // max |{f,g}| / max(1, |grad f||grad g|)
    double max_raw = 0.0;
    int points = 0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    bool pass = false;
};

struct RankReport {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> singular_values;  // one list per probe point
    std::vector<int> rank_per_point;
    int median_rank = 0;
    int expected_rank = 0;
    double rank_tol = 1e-8;
    std::uint64_t seed = 0;
    bool pass = false;
};

struct PointwiseReport {
    std::string label;
    double max_scaled = 0.0;  // max |f - g| / max(1, |f|, |g|)
    int points = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    bool pass = false;
};

struct LimitReport {
    std::string label;
    std::string parameter;           // "z" or "sigma"
    std::vector<double> values;      // strictly decreasing toward 0
    std::vector<double> max_diffs;   // max |Q_value - Q_0| over the points
    double order = 0.0;              // least-squares slope of log diff vs log value
    double zero_diff = 0.0;          // max |Q(0) - reference|, expected exactly 0
    bool exact_at_zero = false;
    std::uint64_t seed = 0;
    bool pass = false;               // order >= 0.9 and exact at zero
};

// Deterministic sample points, each regular for every observable listed.
std::vector<PhasePoint> sample_points(int arity, int n_points, const SweepOptions& opt,
                                      std::span<const Observable* const> regular_for);

std::vector<BracketReport> check_conservation(const Labeled& hamiltonian,
                                              std::span<const Labeled> integrals,
                                              const SweepOptions& opt);

// All unordered pairs; row i holds the entries against j > i.
std::vector<std::vector<BracketReport>> check_involution(std::span<const Labeled> fns,
                                                         const SweepOptions& opt);

RankReport independence_rank(std::span<const Labeled> fns, int expected_rank,
                             const SweepOptions& opt);

PointwiseReport check_pointwise_equal(const std::string& label, const Observable& f,
                                      const Observable& g, const SweepOptions& opt, double tol);

// Left/right tower agreement at the full window, tolerance 1e-12.
PointwiseReport check_left_right(const std::string& label, const Observable& left,
                                 const Observable& right, const SweepOptions& opt);

LimitReport check_limit_order(const std::string& label, const std::string& parameter,
                              const std::function<Observable(double)>& quantity_at,
                              const Observable& reference, std::span<const double> values,
                              const SweepOptions& opt);

// Worker cap: min(hardware, KOALINT_THREADS if set); at least 1.
int worker_count();
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace koalint::verify
