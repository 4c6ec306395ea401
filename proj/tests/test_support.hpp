#pragma once

// Shared helpers for the test suites: box sampling, the central-difference
// gradient oracle (kept independent of the dual-number path it checks), and
// scaled bracket residuals.

#include <cmath>
#include <vector>

#include "koalint/observable.hpp"
#include "koalint/rng.hpp"

namespace koalint::testing {

inline PhasePoint box_point(std::uint64_t seed, std::uint64_t index, int n) {
    SplitMix64 rng(mix_seed(seed, index));
    return sample_box_point(rng, n);
}

// O(h^2) central differences; no dual numbers anywhere in here.
inline std::vector<double> central_difference_gradient(const Observable& f, const PhasePoint& x,
                                                       double h) {
    const int n = x.n();
    std::vector<double> grad(2 * n);
    PhasePoint lo = x, hi = x;
    for (int i = 0; i < n; ++i) {
        hi.q[i] = x.q[i] + h;
        lo.q[i] = x.q[i] - h;
        grad[i] = (f.eval(hi) - f.eval(lo)) / (2.0 * h);
        hi.q[i] = x.q[i];
        lo.q[i] = x.q[i];
    }
    for (int i = 0; i < n; ++i) {
        hi.p[i] = x.p[i] + h;
        lo.p[i] = x.p[i] - h;
        grad[n + i] = (f.eval(hi) - f.eval(lo)) / (2.0 * h);
        hi.p[i] = x.p[i];
        lo.p[i] = x.p[i];
    }
    return grad;
}

inline double norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

// |{f,g}| / max(1, |grad f| |grad g|)
inline double scaled_bracket(const Observable& f, const Observable& g, const PhasePoint& x) {
    auto gf = gradient(f, x);
    auto gg = gradient(g, x);
    const int n = x.n();
    double raw = 0.0;
    for (int i = 0; i < n; ++i) raw += gf[i] * gg[n + i] - gf[n + i] * gg[i];
    return std::abs(raw) / std::max(1.0, norm(gf) * norm(gg));
}

// |{f,g} - expected| / max(1, |grad f| |grad g|, |expected|)
inline double scaled_bracket_identity(const Observable& f, const Observable& g, double expected,
                                      const PhasePoint& x) {
    auto gf = gradient(f, x);
    auto gg = gradient(g, x);
    const int n = x.n();
    double raw = 0.0;
    for (int i = 0; i < n; ++i) raw += gf[i] * gg[n + i] - gf[n + i] * gg[i];
    return std::abs(raw - expected) / std::max({1.0, norm(gf) * norm(gg), std::abs(expected)});
}

}  // namespace koalint::testing
