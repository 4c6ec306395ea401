#include "koalint/sl2_deformed.hpp"

namespace koalint::sl2z {

void validate(const Params& params) {
    sl2::validate(params.base);
}

namespace {

std::vector<Guard> window_guards(const std::vector<double>& b, int lo, int hi) {
    std::vector<Guard> g;
    for (int i = lo; i <= hi; ++i)
        if (b[i] != 0.0) g.push_back({Guard::Kind::coordinate_nonzero, i, 0.0});
    return g;
}

// prefix[i] = q_0^2 + ... + q_{i-1}^2
template <class T>
std::vector<T> prefix_q2(std::span<const T> q) {
    std::vector<T> s(q.size() + 1);
    s[0] = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s[i + 1] = s[i] + q[i] * q[i];
    return s;
}

// window field at site i over [lo, hi]: suffix minus prefix of q^2
template <class T>
T window_field(const std::vector<T>& prefix, int i, int lo, int hi) {
    return (prefix[hi + 1] - prefix[i + 1]) - (prefix[i] - prefix[lo]);
}

// deformed pair block; identical operation order to the undeformed pair term
// so the z = 0 values agree bitwise
template <class T>
T pair_term_z(double z, std::span<const T> q, std::span<const T> p, int i, int j, double bi,
              double bj) {
    T q2i = q[i] * q[i];
    T q2j = q[j] * q[j];
    T si = sinhc(z, q2i);
    T sj = sinhc(z, q2j);
    T ang = q[i] * p[j] - q[j] * p[i];
    T acc = (si * sj) * (ang * ang);
    if (bi != 0.0) acc += bi * (q2j * sj) / (q2i * si);
    if (bj != 0.0) acc += bj * (q2i * si) / (q2j * sj);
    return acc;
}

void check_window(int n, int lo1, int m, int i, int j) {
    // lo1 is the smallest admissible 1-based site of the window
    if (m < 1 || m > n || i < lo1 || i > n || (j >= 0 && (j <= i || j > n)))
        throw BadTowerIndex("window index out of range");
}

}  // namespace

Observable k_function(int n_sites, int m, int i) {
    check_window(n_sites, 1, m, i, -1);
    if (i > m) throw BadTowerIndex("window index out of range");
    return make_observable(n_sites,
                           [i0 = i - 1, m]<class T>(std::span<const T> q, std::span<const T>) -> T {
                               T acc = 0.0;
                               for (int k = 0; k < i0; ++k) acc -= q[k] * q[k];
                               for (int l = i0 + 1; l < m; ++l) acc += q[l] * q[l];
                               return acc;
                           });
}

Observable k_function_pair(int n_sites, int m, int i, int j) {
    check_window(n_sites, 1, m, i, j);
    if (j > m) throw BadTowerIndex("window index out of range");
    return k_function(n_sites, m, i) + k_function(n_sites, m, j);
}

Observable r_function(int n_sites, int m, int i) {
    const int lo1 = n_sites - m + 1;
    check_window(n_sites, lo1, m, i, -1);
    return make_observable(
        n_sites, [i0 = i - 1, lo0 = lo1 - 1, n = n_sites]<class T>(std::span<const T> q,
                                                                   std::span<const T>) -> T {
            T acc = 0.0;
            for (int k = lo0; k < i0; ++k) acc -= q[k] * q[k];
            for (int l = i0 + 1; l < n; ++l) acc += q[l] * q[l];
            return acc;
        });
}

Observable r_function_pair(int n_sites, int m, int i, int j) {
    check_window(n_sites, n_sites - m + 1, m, i, j);
    return r_function(n_sites, m, i) + r_function(n_sites, m, j);
}

Generators deformed_generators(const Params& params) {
    validate(params);
    const int n = params.base.n;
    const double z = params.z;
    const auto& b = params.base.b;

    Generators g;
    g.minus = sl2::generator_minus(params.base);
    g.plus = make_observable(
        n,
        [n, z, b]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            auto s = prefix_q2(q);
            T acc = 0.0;
            for (int i = 0; i < n; ++i) {
                T q2 = q[i] * q[i];
                T sc = sinhc(z, q2);
                T site = sc * (p[i] * p[i]);
                if (b[i] != 0.0) site += b[i] / (q2 * sc);
                acc += site * exp(z * window_field(s, i, 0, n - 1));
            }
            return acc;
        },
        window_guards(b, 0, n - 1));
    g.three = make_observable(n, [n, z]<class T>(std::span<const T> q, std::span<const T> p) -> T {
        auto s = prefix_q2(q);
        T acc = 0.0;
        for (int i = 0; i < n; ++i) {
            T q2 = q[i] * q[i];
            acc += (sinhc(z, q2) * (q[i] * p[i])) * exp(z * window_field(s, i, 0, n - 1));
        }
        return acc;
    });
    return g;
}

Observable deformed_sw_hamiltonian(const Params& params) {
    validate(params);
    const int n = params.base.n;
    return make_observable(
        n,
        [n, z = params.z, b = params.base.b,
         om2 = params.base.omega2]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            auto s = prefix_q2(q);
            T plus = 0.0, minus = 0.0;
            for (int i = 0; i < n; ++i) {
                T q2 = q[i] * q[i];
                T sc = sinhc(z, q2);
                T site = sc * (p[i] * p[i]);
                if (b[i] != 0.0) site += b[i] / (q2 * sc);
                plus += site * exp(z * window_field(s, i, 0, n - 1));
                minus += q[i] * q[i];
            }
            return plus + om2 * minus;
        },
        window_guards(params.base.b, 0, n - 1));
}

Observable pair_invariant(const Params& params, int i, int j) {
    validate(params);
    if (i < 1 || j <= i || j > params.base.n)
        throw BadTowerIndex("pair indices need 1 <= i < j <= N");
    std::vector<Guard> guards;
    if (params.base.b[i - 1] != 0.0)
        guards.push_back({Guard::Kind::coordinate_nonzero, i - 1, 0.0});
    if (params.base.b[j - 1] != 0.0)
        guards.push_back({Guard::Kind::coordinate_nonzero, j - 1, 0.0});
    return make_observable(
        params.base.n,
        [z = params.z, i0 = i - 1, j0 = j - 1, bi = params.base.b[i - 1],
         bj = params.base.b[j - 1]]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            return pair_term_z(z, q, p, i0, j0, bi, bj);
        },
        std::move(guards));
}

Observable deformed_left_integral(const Params& params, int m) {
    validate(params);
    if (m < 2 || m > params.base.n) throw BadTowerIndex("tower index needs 2 <= m <= N");
    return make_observable(
        params.base.n,
        [m, z = params.z, b = params.base.b]<class T>(std::span<const T> q,
                                                      std::span<const T> p) -> T {
            auto s = prefix_q2(q);
            T acc = 0.0;
            for (int i = 0; i < m; ++i) {
                T ki = window_field(s, i, 0, m - 1);
                for (int j = i + 1; j < m; ++j) {
                    T kj = window_field(s, j, 0, m - 1);
                    acc += pair_term_z(z, q, p, i, j, b[i], b[j]) * exp(z * (ki + kj));
                }
                if (b[i] != 0.0) acc += b[i] * exp((2.0 * z) * ki);
            }
            return -acc;
        },
        window_guards(params.base.b, 0, m - 1));
}

Observable deformed_right_integral(const Params& params, int m) {
    validate(params);
    const int n = params.base.n;
    if (m < 2 || m > n) throw BadTowerIndex("tower index needs 2 <= m <= N");
    const int lo = n - m;
    return make_observable(
        n,
        [lo, n, z = params.z, b = params.base.b]<class T>(std::span<const T> q,
                                                          std::span<const T> p) -> T {
            auto s = prefix_q2(q);
            T acc = 0.0;
            for (int i = lo; i < n; ++i) {
                T ri = window_field(s, i, lo, n - 1);
                for (int j = i + 1; j < n; ++j) {
                    T rj = window_field(s, j, lo, n - 1);
                    acc += pair_term_z(z, q, p, i, j, b[i], b[j]) * exp(z * (ri + rj));
                }
                if (b[i] != 0.0) acc += b[i] * exp((2.0 * z) * ri);
            }
            return -acc;
        },
        window_guards(params.base.b, lo, n - 1));
}

Observable deformed_generalized_hamiltonian(const Params& params, const SmoothFn& F) {
    validate(params);
    if (!F.f || !F.df) throw Error("F needs a value and an exact derivative");
    const int n = params.base.n;
    return make_observable(
        n,
        [n, z = params.z, b = params.base.b, F]<class T>(std::span<const T> q,
                                                         std::span<const T> p) -> T {
            auto s = prefix_q2(q);
            T plus = 0.0, minus = 0.0;
            for (int i = 0; i < n; ++i) {
                T q2 = q[i] * q[i];
                T sc = sinhc(z, q2);
                T site = sc * (p[i] * p[i]);
                if (b[i] != 0.0) site += b[i] / (q2 * sc);
                plus += site * exp(z * window_field(s, i, 0, n - 1));
                minus += q[i] * q[i];
            }
            return plus + apply_smooth(F, minus);
        },
        window_guards(params.base.b, 0, n - 1));
}

}  // namespace koalint::sl2z
