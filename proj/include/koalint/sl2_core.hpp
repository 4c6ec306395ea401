#pragma once

// Undeformed sl(2) systems: N-particle generators, the oscillator-with-
// centrifugal-terms Hamiltonian, the left/right towers of conserved
// quantities, the generalized F-family and the Liouville integrals.

#include <vector>

#include "koalint/observable.hpp"

namespace koalint::sl2 {

struct Params {
    int n = 1;
    double omega2 = 1.0;        // oscillator strength omega^2 >= 0
    std::vector<double> b;      // centrifugal coefficients, one per site
};

void validate(const Params& params);

// f- = sum q_i^2,  f+ = sum (p_i^2 + b_i/q_i^2),  f3 = sum q_i p_i.
// They close the sl(2) brackets {f3,f+} = 2f+, {f3,f-} = -2f-, {f-,f+} = 4f3.
Observable generator_minus(const Params& params);
Observable generator_plus(const Params& params);
Observable generator_three(const Params& params);

// H = f+ + omega^2 f-
Observable sw_hamiltonian(const Params& params);

// (q_i p_j - q_j p_i)^2 + b_i q_j^2/q_i^2 + b_j q_i^2/q_j^2, 1-based, i < j
Observable pair_invariant(const Params& params, int i, int j);

// Left tower C^(m) on sites 1..m and right tower I^(m) on sites N-m+1..N,
// m = 2..N.  Both Poisson-commute with the Hamiltonian; C^(N) == I^(N).
Observable left_integral(const Params& params, int m);
Observable right_integral(const Params& params, int m);

// H = f+ + F(f-) for any smooth F supplied with its exact derivative(s).
Observable generalized_hamiltonian(const Params& params, const SmoothFn& F);

// M_i = p_i^2 + omega^2 q_i^2 + b_i/q_i^2 - H/N; sum_i M_i == 0.
Observable liouville_integral(const Params& params, int i);

}  // namespace koalint::sl2
