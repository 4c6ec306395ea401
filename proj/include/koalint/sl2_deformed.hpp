#pragma once

// Non-standard deformation of the sl(2) systems.  The deformation couples the
// sites through exponential long-range factors exp(z*K) built from prefix and
// suffix sums of q^2; everything reduces to the undeformed module exactly at
// z = 0 (same floating-point operations, not just the same limit).

#include <vector>

#include "koalint/observable.hpp"
#include "koalint/sl2_core.hpp"

namespace koalint::sl2z {

struct Params {
    sl2::Params base;
    double z = 0.0;  // deformation strength; z = 0 is always admissible
};

void validate(const Params& params);

// Long-range window functions of q^2 alone (1-based indices):
//   K_i^(m)  = -sum_{k<i} q_k^2 + sum_{i<l<=m} q_l^2        (leading window)
//   R_i^(m)  = -sum_{N-m<k<i} q_k^2 + sum_{i<l<=N} q_l^2    (trailing window)
// and the pair sums K_ij = K_i + K_j, R_ij = R_i + R_j.
Observable k_function(int n_sites, int m, int i);
Observable k_function_pair(int n_sites, int m, int i, int j);
Observable r_function(int n_sites, int m, int i);
Observable r_function_pair(int n_sites, int m, int i, int j);

struct Generators {
    Observable minus;  // sum q_i^2 (undeformed)
    Observable plus;   // sum (sinhc(z,q_i^2) p_i^2 + b_i/(q_i^2 sinhc)) e^{z K_i}
    Observable three;  // sum sinhc(z,q_i^2) q_i p_i e^{z K_i}
};

// Closes the deformed brackets {f3,f+} = 2 f+ cosh(z f-),
// {f3,f-} = -2 sinh(z f-)/z, {f-,f+} = 4 f3.
Generators deformed_generators(const Params& params);

// H_z = f+ + omega^2 f-
Observable deformed_sw_hamiltonian(const Params& params);

// sinhc_i sinhc_j (q_i p_j - q_j p_i)^2 + ratio terms; reduces to the
// undeformed pair invariant at z = 0.
Observable pair_invariant(const Params& params, int i, int j);

// Deformed towers C_z^(m) (leading window) and I_z^(m) (trailing window).
Observable deformed_left_integral(const Params& params, int m);
Observable deformed_right_integral(const Params& params, int m);

// H = f+ + F(f-) with the deformed generators.
Observable deformed_generalized_hamiltonian(const Params& params, const SmoothFn& F);

}  // namespace koalint::sl2z
