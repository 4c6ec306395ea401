#pragma once

// Phase-space observables with exact forward-mode differentiation.
//
// An Observable owns the same expression instantiated at three scalar levels:
// double (plain evaluation), Dual<double> (gradients, brackets) and
// Dual<Dual<double>> (gradients of brackets, i.e. one nesting level).
// Observables are immutable after construction and safe to evaluate
// concurrently.

#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "koalint/dual.hpp"
#include "koalint/errors.hpp"
#include "koalint/phase.hpp"

namespace koalint {

// Evaluation-time precondition attached to an observable.  Guards are checked
// once per public entry point; the integrator also watches their values for
// sign changes along trajectories.
struct Guard {
    enum class Kind {
        coordinate_nonzero,    // q[site] != 0 (centrifugal term present)
        momentum_denominator,  // 1 + coef*p[site] != 0
    };

    Kind kind = Kind::coordinate_nonzero;
    int site = 0;
    double coef = 0.0;

    void check(std::span<const double> q, std::span<const double> p) const;
    double watch_value(std::span<const double> q, std::span<const double> p) const;

    bool operator==(const Guard&) const = default;
};

std::vector<Guard> merge_guards(std::vector<Guard> a, const std::vector<Guard>& b);

class Observable {
public:
    using Body0 = std::function<double(std::span<const double>, std::span<const double>)>;
    using Body1 = std::function<Dual1(std::span<const Dual1>, std::span<const Dual1>)>;
    using Body2 = std::function<Dual2(std::span<const Dual2>, std::span<const Dual2>)>;

    Observable() = default;

    int arity() const { return arity_; }
    const std::vector<Guard>& guards() const { return guards_; }
    bool has_second_order() const { return static_cast<bool>(f2_); }

    // throws DimensionMismatch / SingularPoint / DegenerateDenominator
    void check_point(const PhasePoint& x) const;

    double eval(const PhasePoint& x) const;

    // Directional derivative along tangent = (dq_1..dq_N, dp_1..dp_N);
    // .v equals eval(x) bitwise, .d is linear in the tangent.
    Dual1 eval_dual(const PhasePoint& x, std::span<const double> tangent) const;

    // Unchecked evaluation on raw spans of any supported scalar level.
    template <class T>
    T eval_raw(std::span<const T> q, std::span<const T> p) const {
        if constexpr (std::is_same_v<T, double>) {
            return f0_(q, p);
        } else if constexpr (std::is_same_v<T, Dual1>) {
            return f1_(q, p);
        } else {
            static_assert(std::is_same_v<T, Dual2>);
            if (!f2_)
                throw Error("observable does not support second-order evaluation "
                            "(brackets nest at most one level deep)");
            return f2_(q, p);
        }
    }

    static Observable from_bodies(int arity, Body0 f0, Body1 f1, Body2 f2,
                                  std::vector<Guard> guards = {});

private:
    int arity_ = 0;
    Body0 f0_;
    Body1 f1_;
    Body2 f2_;
    std::vector<Guard> guards_;
};

// Builds an observable from one generic body, callable at all three scalar
// levels as body(span<const T> q, span<const T> p) -> T.
template <class F>
Observable make_observable(int arity, F body, std::vector<Guard> guards = {}) {
    return Observable::from_bodies(
        arity,
        [body](std::span<const double> q, std::span<const double> p) -> double {
            return body(q, p);
        },
        [body](std::span<const Dual1> q, std::span<const Dual1> p) -> Dual1 {
            return body(q, p);
        },
        [body](std::span<const Dual2> q, std::span<const Dual2> p) -> Dual2 {
            return body(q, p);
        },
        std::move(guards));
}

// Full gradient (df/dq_1..df/dq_N, df/dp_1..df/dp_N) via 2N dual passes.
std::vector<double> gradient(const Observable& f, const PhasePoint& x);

// Gradient at an arbitrary scalar level (machinery for nested brackets).
template <class T>
void gradient_raw(const Observable& f, std::span<const T> q, std::span<const T> p,
                  std::span<T> grad_q, std::span<T> grad_p) {
    const int n = f.arity();
    std::vector<Dual<T>> dq(n), dp(n);
    for (int i = 0; i < n; ++i) {
        dq[i].v = q[i];
        dp[i].v = p[i];
    }
    for (int k = 0; k < n; ++k) {
        dq[k].d = 1.0;
        grad_q[k] = f.eval_raw<Dual<T>>(dq, dp).d;
        dq[k].d = 0.0;
    }
    for (int k = 0; k < n; ++k) {
        dp[k].d = 1.0;
        grad_p[k] = f.eval_raw<Dual<T>>(dq, dp).d;
        dp[k].d = 0.0;
    }
}

// Canonical bracket {f,g} = sum_i df/dq_i dg/dp_i - df/dp_i dg/dq_i.
double poisson_bracket(const Observable& f, const Observable& g, const PhasePoint& x);

// {f,g} packaged as an observable; supports value and gradient evaluation
// (enough for Jacobi-identity checks), not further nesting.
Observable bracket_observable(const Observable& f, const Observable& g);

Observable operator+(const Observable& a, const Observable& b);
Observable operator-(const Observable& a, const Observable& b);
Observable operator*(const Observable& a, const Observable& b);
Observable operator*(double c, const Observable& a);
Observable operator+(const Observable& a, double c);

Observable constant_observable(int arity, double value);
Observable coordinate_q(int arity, int site);  // 1-based site
Observable coordinate_p(int arity, int site);

// Smooth scalar function supplied with exact derivatives; d2f is optional and
// only needed when the containing observable is bracket-nested.
struct SmoothFn {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;
};

inline double apply_smooth(const SmoothFn& F, double u) { return F.f(u); }

inline Dual1 apply_smooth(const SmoothFn& F, const Dual1& u) {
    return {F.f(u.v), u.d * F.df(u.v)};
}

inline Dual2 apply_smooth(const SmoothFn& F, const Dual2& u) {
    if (!F.d2f)
        throw Error("smooth function lacks a second derivative");
    Dual1 fu{F.f(u.v.v), u.v.d * F.df(u.v.v)};
    Dual1 dfu{F.df(u.v.v), u.v.d * F.d2f(u.v.v)};
    return {fu, u.d * dfu};
}

}  // namespace koalint
