#pragma once

// Separable deformed Hamiltonian H = sum_i a_i(q) (p_i^2/2 + U_i(q_i)) with
// explicit separability matrix B, closed-form inverse entries, and the tower
// of separation integrals Z_j.  All z -> 0 limits collapse to the undeformed
// oscillator family exactly.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "koalint/observable.hpp"
#include "koalint/sl2_deformed.hpp"

namespace koalint::stackel {

struct System {
    sl2z::Params params;  // N >= 2
};

void validate(const System& sys);

Observable hamiltonian(const System& sys);

struct Coefficients {
    std::vector<Observable> a;                      // a_i(q), positive on the sampling box
    std::vector<std::function<double(double)>> U;   // U_i(q_i); boundary entries carry the
                                                    // omega^2 terms and need z != 0
};
Coefficients coefficients(const System& sys);

// B with rows b_1N, b_{i,i-1}, b_ii; satisfies sum_j b_ij(q_j) a_j(q) = delta_i1.
Eigen::MatrixXd separability_matrix(const System& sys, const PhasePoint& x);

// det B in closed form: (-1)^(N+1) * 1/2 * prod_i e^{-z q_i^2}/sinhc(z, q_i^2).
// The sign alternates with N; the magnitude is the usual product form.
double determinant_closed_form(const System& sys, const PhasePoint& x);

// Closed-form inverse of B: first column equals a_i, upper entries drop the
// factor 2 and truncate the suffix window at column j.
Eigen::MatrixXd inverse_coefficients(const System& sys, const PhasePoint& x);

// Z_j, j = 2..N; in involution with the Hamiltonian and with each other.
Observable z_integral(const System& sys, int j);

// The z -> 0 form: 1/2 sum_{i<j}(p_i^2 + b_i/q_i^2) + omega^2/2 sum_{k<j} q_k^2.
Observable z_integral_limit(const System& sys, int j);

}  // namespace koalint::stackel
