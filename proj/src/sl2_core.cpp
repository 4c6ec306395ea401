#include "koalint/sl2_core.hpp"

namespace koalint::sl2 {

void validate(const Params& params) {
    if (params.n < 1) throw Error("particle count must be positive");
    if (params.omega2 < 0.0) throw Error("omega2 must be non-negative");
    if (static_cast<int>(params.b.size()) != params.n)
        throw Error("b must have one coefficient per site");
}

namespace {

// sites [lo, hi] (0-based, inclusive) carrying a centrifugal term
std::vector<Guard> window_guards(const std::vector<double>& b, int lo, int hi) {
    std::vector<Guard> g;
    for (int i = lo; i <= hi; ++i)
        if (b[i] != 0.0) g.push_back({Guard::Kind::coordinate_nonzero, i, 0.0});
    return g;
}

template <class T>
T pair_term(std::span<const T> q, std::span<const T> p, int i, int j, double bi, double bj) {
    T ang = q[i] * p[j] - q[j] * p[i];
    T acc = ang * ang;
    if (bi != 0.0) acc += bi * (q[j] * q[j]) / (q[i] * q[i]);
    if (bj != 0.0) acc += bj * (q[i] * q[i]) / (q[j] * q[j]);
    return acc;
}

void check_pair(const Params& params, int i, int j) {
    if (i < 1 || j <= i || j > params.n)
        throw BadTowerIndex("pair indices need 1 <= i < j <= N");
}

void check_tower(const Params& params, int m) {
    if (m < 2 || m > params.n) throw BadTowerIndex("tower index needs 2 <= m <= N");
}

}  // namespace

Observable generator_minus(const Params& params) {
    validate(params);
    return make_observable(params.n,
                           [n = params.n]<class T>(std::span<const T> q, std::span<const T>) -> T {
                               T acc = 0.0;
                               for (int i = 0; i < n; ++i) acc += q[i] * q[i];
                               return acc;
                           });
}

Observable generator_plus(const Params& params) {
    validate(params);
    return make_observable(
        params.n,
        [n = params.n, b = params.b]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            T acc = 0.0;
            for (int i = 0; i < n; ++i) {
                T site = p[i] * p[i];
                if (b[i] != 0.0) site += b[i] / (q[i] * q[i]);
                acc += site;
            }
            return acc;
        },
        window_guards(params.b, 0, params.n - 1));
}

Observable generator_three(const Params& params) {
    validate(params);
    return make_observable(params.n,
                           [n = params.n]<class T>(std::span<const T> q, std::span<const T> p) -> T {
                               T acc = 0.0;
                               for (int i = 0; i < n; ++i) acc += q[i] * p[i];
                               return acc;
                           });
}

Observable sw_hamiltonian(const Params& params) {
    validate(params);
    return make_observable(
        params.n,
        [n = params.n, b = params.b, om2 = params.omega2]<class T>(std::span<const T> q,
                                                                   std::span<const T> p) -> T {
            T plus = 0.0, minus = 0.0;
            for (int i = 0; i < n; ++i) {
                T site = p[i] * p[i];
                if (b[i] != 0.0) site += b[i] / (q[i] * q[i]);
                plus += site;
                minus += q[i] * q[i];
            }
            return plus + om2 * minus;
        },
        window_guards(params.b, 0, params.n - 1));
}

Observable pair_invariant(const Params& params, int i, int j) {
    validate(params);
    check_pair(params, i, j);
    std::vector<Guard> guards;
    if (params.b[i - 1] != 0.0) guards.push_back({Guard::Kind::coordinate_nonzero, i - 1, 0.0});
    if (params.b[j - 1] != 0.0) guards.push_back({Guard::Kind::coordinate_nonzero, j - 1, 0.0});
    return make_observable(
        params.n,
        [i0 = i - 1, j0 = j - 1, bi = params.b[i - 1], bj = params.b[j - 1]]<class T>(
            std::span<const T> q, std::span<const T> p) -> T {
            return pair_term(q, p, i0, j0, bi, bj);
        },
        std::move(guards));
}

Observable left_integral(const Params& params, int m) {
    validate(params);
    check_tower(params, m);
    return make_observable(
        params.n,
        [m, b = params.b]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            T acc = 0.0;
            for (int i = 0; i < m; ++i) {
                for (int j = i + 1; j < m; ++j) acc += pair_term(q, p, i, j, b[i], b[j]);
                if (b[i] != 0.0) acc += b[i];
            }
            return -acc;
        },
        window_guards(params.b, 0, m - 1));
}

Observable right_integral(const Params& params, int m) {
    validate(params);
    check_tower(params, m);
    const int lo = params.n - m;
    return make_observable(
        params.n,
        [lo, n = params.n, b = params.b]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            T acc = 0.0;
            for (int i = lo; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) acc += pair_term(q, p, i, j, b[i], b[j]);
                if (b[i] != 0.0) acc += b[i];
            }
            return -acc;
        },
        window_guards(params.b, lo, params.n - 1));
}

Observable generalized_hamiltonian(const Params& params, const SmoothFn& F) {
    validate(params);
    if (!F.f || !F.df) throw Error("F needs a value and an exact derivative");
    return make_observable(
        params.n,
        [n = params.n, b = params.b, F]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            T plus = 0.0, minus = 0.0;
            for (int i = 0; i < n; ++i) {
                T site = p[i] * p[i];
                if (b[i] != 0.0) site += b[i] / (q[i] * q[i]);
                plus += site;
                minus += q[i] * q[i];
            }
            return plus + apply_smooth(F, minus);
        },
        window_guards(params.b, 0, params.n - 1));
}

Observable liouville_integral(const Params& params, int i) {
    validate(params);
    if (i < 1 || i > params.n) throw BadTowerIndex("site index needs 1 <= i <= N");
    return make_observable(
        params.n,
        [i0 = i - 1, n = params.n, b = params.b,
         om2 = params.omega2]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            T plus = 0.0, minus = 0.0;
            for (int k = 0; k < n; ++k) {
                T site = p[k] * p[k];
                if (b[k] != 0.0) site += b[k] / (q[k] * q[k]);
                plus += site;
                minus += q[k] * q[k];
            }
            T h = plus + om2 * minus;
            T own_site = p[i0] * p[i0];
            if (b[i0] != 0.0) own_site += b[i0] / (q[i0] * q[i0]);
            T own = own_site + om2 * (q[i0] * q[i0]);
            return own - h / static_cast<double>(n);
        },
        window_guards(params.b, 0, params.n - 1));
}

}  // namespace koalint::sl2
