#include "koalint/observable.hpp"

#include <algorithm>
#include <utility>

namespace koalint {

void Guard::check(std::span<const double> q, std::span<const double> p) const {
    switch (kind) {
        case Kind::coordinate_nonzero:
            if (q[site] == 0.0)
                throw SingularPoint("q[" + std::to_string(site + 1) + "] == 0 at a centrifugal term");
            break;
        case Kind::momentum_denominator:
            if (1.0 + coef * p[site] == 0.0)
                throw DegenerateDenominator("1 + sigma*lambda2*p[" + std::to_string(site + 1) +
                                            "] == 0");
            break;
    }
}

double Guard::watch_value(std::span<const double> q, std::span<const double> p) const {
    return kind == Kind::coordinate_nonzero ? q[site] : 1.0 + coef * p[site];
}

std::vector<Guard> merge_guards(std::vector<Guard> a, const std::vector<Guard>& b) {
    for (const Guard& g : b)
        if (std::find(a.begin(), a.end(), g) == a.end()) a.push_back(g);
    return a;
}

Observable Observable::from_bodies(int arity, Body0 f0, Body1 f1, Body2 f2,
                                   std::vector<Guard> guards) {
    Observable obs;
    obs.arity_ = arity;
    obs.f0_ = std::move(f0);
    obs.f1_ = std::move(f1);
    obs.f2_ = std::move(f2);
    obs.guards_ = std::move(guards);
    return obs;
}

void Observable::check_point(const PhasePoint& x) const {
    if (x.n() != arity_)
        throw DimensionMismatch("observable of arity " + std::to_string(arity_) +
                                " evaluated at a point with N = " + std::to_string(x.n()));
    for (const Guard& g : guards_) g.check(x.q, x.p);
}

double Observable::eval(const PhasePoint& x) const {
    check_point(x);
    return f0_(x.q, x.p);
}

Dual1 Observable::eval_dual(const PhasePoint& x, std::span<const double> tangent) const {
    check_point(x);
    if (static_cast<int>(tangent.size()) != 2 * arity_)
        throw DimensionMismatch("tangent must have 2N components");
    std::vector<Dual1> dq(arity_), dp(arity_);
    for (int i = 0; i < arity_; ++i) {
        dq[i] = {x.q[i], tangent[i]};
        dp[i] = {x.p[i], tangent[arity_ + i]};
    }
    return f1_(dq, dp);
}

std::vector<double> gradient(const Observable& f, const PhasePoint& x) {
    f.check_point(x);
    const int n = f.arity();
    std::vector<double> grad(2 * n);
    gradient_raw<double>(f, x.q, x.p, std::span<double>(grad).subspan(0, n),
                         std::span<double>(grad).subspan(n, n));
    return grad;
}

double poisson_bracket(const Observable& f, const Observable& g, const PhasePoint& x) {
    if (f.arity() != g.arity())
        throw DimensionMismatch("bracket of observables with different arities");
    f.check_point(x);
    g.check_point(x);
    const int n = f.arity();
    std::vector<double> fq(n), fp(n), gq(n), gp(n);
    gradient_raw<double>(f, x.q, x.p, fq, fp);
    gradient_raw<double>(g, x.q, x.p, gq, gp);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += fq[i] * gp[i] - fp[i] * gq[i];
    return acc;
}

namespace {

template <class T>
T bracket_body(const Observable& f, const Observable& g, std::span<const T> q,
               std::span<const T> p) {
    const int n = f.arity();
    std::vector<T> fq(n), fp(n), gq(n), gp(n);
    gradient_raw<T>(f, q, p, fq, fp);
    gradient_raw<T>(g, q, p, gq, gp);
    T acc = 0.0;
    for (int i = 0; i < n; ++i) acc += fq[i] * gp[i] - fp[i] * gq[i];
    return acc;
}

}  // namespace

Observable bracket_observable(const Observable& f, const Observable& g) {
    if (f.arity() != g.arity())
        throw DimensionMismatch("bracket of observables with different arities");
    return Observable::from_bodies(
        f.arity(),
        [f, g](std::span<const double> q, std::span<const double> p) -> double {
            return bracket_body<double>(f, g, q, p);
        },
        [f, g](std::span<const Dual1> q, std::span<const Dual1> p) -> Dual1 {
            return bracket_body<Dual1>(f, g, q, p);
        },
        nullptr, merge_guards(f.guards(), g.guards()));
}

namespace {

// Pointwise combination; each scalar level survives iff both operands have it.
template <class Op>
Observable pointwise(const Observable& a, const Observable& b, Op op) {
    if (a.arity() != b.arity())
        throw DimensionMismatch("combining observables with different arities");
    Observable::Body2 f2;
    if (a.has_second_order() && b.has_second_order()) {
        f2 = [a, b, op](std::span<const Dual2> q, std::span<const Dual2> p) -> Dual2 {
            return op(a.eval_raw<Dual2>(q, p), b.eval_raw<Dual2>(q, p));
        };
    }
    return Observable::from_bodies(
        a.arity(),
        [a, b, op](std::span<const double> q, std::span<const double> p) -> double {
            return op(a.eval_raw<double>(q, p), b.eval_raw<double>(q, p));
        },
        [a, b, op](std::span<const Dual1> q, std::span<const Dual1> p) -> Dual1 {
            return op(a.eval_raw<Dual1>(q, p), b.eval_raw<Dual1>(q, p));
        },
        std::move(f2), merge_guards(a.guards(), b.guards()));
}

template <class Op>
Observable map_unary(const Observable& a, Op op) {
    Observable::Body2 f2;
    if (a.has_second_order()) {
        f2 = [a, op](std::span<const Dual2> q, std::span<const Dual2> p) -> Dual2 {
            return op(a.eval_raw<Dual2>(q, p));
        };
    }
    return Observable::from_bodies(
        a.arity(),
        [a, op](std::span<const double> q, std::span<const double> p) -> double {
            return op(a.eval_raw<double>(q, p));
        },
        [a, op](std::span<const Dual1> q, std::span<const Dual1> p) -> Dual1 {
            return op(a.eval_raw<Dual1>(q, p));
        },
        std::move(f2), a.guards());
}

}  // namespace

Observable operator+(const Observable& a, const Observable& b) {
    return pointwise(a, b, [](const auto& x, const auto& y) { return x + y; });
}

Observable operator-(const Observable& a, const Observable& b) {
    return pointwise(a, b, [](const auto& x, const auto& y) { return x - y; });
}

Observable operator*(const Observable& a, const Observable& b) {
    return pointwise(a, b, [](const auto& x, const auto& y) { return x * y; });
}

Observable operator*(double c, const Observable& a) {
    return map_unary(a, [c](const auto& x) { return c * x; });
}

Observable operator+(const Observable& a, double c) {
    return map_unary(a, [c](const auto& x) { return x + c; });
}

Observable constant_observable(int arity, double value) {
    return make_observable(arity, [value]<class T>(std::span<const T>, std::span<const T>) -> T {
        return T(value);
    });
}

Observable coordinate_q(int arity, int site) {
    if (site < 1 || site > arity) throw BadTowerIndex("coordinate site out of range");
    return make_observable(arity,
                           [i = site - 1]<class T>(std::span<const T> q, std::span<const T>) -> T {
                               return q[i];
                           });
}

Observable coordinate_p(int arity, int site) {
    if (site < 1 || site > arity) throw BadTowerIndex("coordinate site out of range");
    return make_observable(arity,
                           [i = site - 1]<class T>(std::span<const T>, std::span<const T> p) -> T {
                               return p[i];
                           });
}

}  // namespace koalint
