#pragma once

#include <vector>

#include "koalint/errors.hpp"

namespace koalint {

// A point (q_1..q_N, p_1..p_N) in canonical phase space, {q_i, p_j} = delta_ij.
struct PhasePoint {
    std::vector<double> q;
    std::vector<double> p;

    PhasePoint() = default;
    PhasePoint(std::vector<double> q_in, std::vector<double> p_in)
        : q(std::move(q_in)), p(std::move(p_in)) {
        if (q.size() != p.size())
            throw DimensionMismatch("phase point needs q and p of equal length");
    }

    int n() const { return static_cast<int>(q.size()); }
};

}  // namespace koalint
