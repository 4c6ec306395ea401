#pragma once

// Two-particle comodule deformation.  Particle 1 carries the centrifugal
// realization (adds b1/q1^2), particle 2 the plain one; the coupled images of
// the generators {M, H, D, C, P, K} produce the deformed Hamiltonian and its
// companion integral.  Only the "left" integral exists for this family.

#include <map>
#include <string>

#include "koalint/observable.hpp"

namespace koalint::comodule {

struct Params {
    double sigma = 0.0;    // deformation strength
    double lambda1 = 1.0;  // realization constant, particle 1
    double lambda2 = 1.0;  // realization constant, particle 2
    double b1 = 1.0;       // centrifugal coefficient (particle 1 only)
};

void validate(const Params& params);

// Deformed two-particle Hamiltonian, transcribed as the explicit blocks in
// powers of sigma.  Regular where q1 != 0 (when b1 != 0) and
// 1 + sigma*lambda2*p2 != 0.
Observable h_sigma(const Params& params);

// Companion integral: (1/4) D_img^2 - H_img * C_img composed from the
// coaction images; Poisson-commutes with h_sigma.
Observable c_sigma(const Params& params);

// Coupled two-particle images of the six generators, keyed "M","H","D","C",
// "P","K".  At sigma = 0 every image is the plain two-site sum.
std::map<std::string, Observable> coaction_images(const Params& params);

// sigma -> 0 references: the N = 2 oscillator Hamiltonian with unit frequency
// and overall 1/2 normalization, and the printed limit of the integral.
Observable h_limit(const Params& params);
Observable c_limit(const Params& params);

}  // namespace koalint::comodule
