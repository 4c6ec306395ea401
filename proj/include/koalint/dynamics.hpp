#pragma once

// Hamilton's equations for any observable Hamiltonian, integrated with either
// classical fixed-step RK4 or an embedded adaptive pair, plus conservation
// drift reporting.  The deformed Hamiltonians are not kinetic-plus-potential
// separable, so a general-purpose RK with drift monitoring is the contract
// here rather than a splitting method.

#include <span>
#include <string>
#include <vector>

#include "koalint/observable.hpp"
#include "koalint/verify.hpp"

namespace koalint::dynamics {

enum class Method { rk4, adaptive };

struct Options {
    Method method = Method::adaptive;
    double dt = 1e-3;        // rk4 step
    double rel_tol = 1e-10;  // adaptive per-step relative tolerance
    double abs_tol = 1e-12;
    double min_step = 1e-14;
};

struct Trajectory {
    std::vector<double> times;       // strictly increasing
    std::vector<PhasePoint> states;  // uniform arity
    std::string hamiltonian;
    std::string method;
    double step_or_tol = 0.0;
};

// (dq/dt, dp/dt) = (dH/dp, -dH/dq)
std::vector<double> hamilton_rhs(const Observable& hamiltonian, const PhasePoint& x);

// Integrates to t_end.  Watches the Hamiltonian's guard expressions (q_i with
// a centrifugal term, comodule denominators) for sign changes between
// accepted steps and raises SingularEncounter on a crossing.
Trajectory integrate(const Observable& hamiltonian, const std::string& label,
                     const PhasePoint& x0, double t_end, const Options& opt = {});

struct Drift {
    std::string label;
    double max_drift = 0.0;  // max_t |F(x(t)) - F(x(0))| / max(1, |F(x(0))|)
};

std::vector<Drift> drift_report(const Trajectory& traj, std::span<const verify::Labeled> fns);

}  // namespace koalint::dynamics
