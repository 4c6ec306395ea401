#include "koalint/stackel.hpp"

#include <cmath>

namespace koalint::stackel {

void validate(const System& sys) {
    sl2z::validate(sys.params);
    if (sys.params.base.n < 2) throw Error("separable family needs N >= 2");
}

namespace {

std::vector<Guard> centrifugal_guards(const std::vector<double>& b) {
    std::vector<Guard> g;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i] != 0.0) g.push_back({Guard::Kind::coordinate_nonzero, static_cast<int>(i), 0.0});
    return g;
}

template <class T>
std::vector<T> prefix_q2(std::span<const T> q) {
    std::vector<T> s(q.size() + 1);
    s[0] = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s[i + 1] = s[i] + q[i] * q[i];
    return s;
}

}  // namespace

Observable hamiltonian(const System& sys) {
    validate(sys);
    const int n = sys.params.base.n;
    return make_observable(
        n,
        [n, z = sys.params.z, b = sys.params.base.b,
         om2 = sys.params.base.omega2]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            auto s = prefix_q2(q);
            T acc = 0.0;
            for (int i = 0; i < n; ++i) {
                T q2 = q[i] * q[i];
                T sc = sinhc(z, q2);
                T inner = p[i] * p[i];
                if (b[i] != 0.0) inner += b[i] / ((q2 * sc) * sc);
                T suffix = s[n] - s[i + 1];
                acc += sc * exp(z * q2) * exp((2.0 * z) * suffix) * inner;
            }
            T total = s[n];
            return acc + om2 * (total * expm1_over((2.0 * z) * total));
        },
        centrifugal_guards(sys.params.base.b));
}

Coefficients coefficients(const System& sys) {
    validate(sys);
    const int n = sys.params.base.n;
    const double z = sys.params.z;
    const double om2 = sys.params.base.omega2;

    Coefficients out;
    out.a.reserve(n);
    out.U.reserve(n);
    for (int i = 0; i < n; ++i) {
        out.a.push_back(make_observable(
            n, [i, n, z]<class T>(std::span<const T> q, std::span<const T>) -> T {
                auto s = prefix_q2(q);
                T q2 = q[i] * q[i];
                return 2.0 * sinhc(z, q2) * exp(z * q2) * exp((2.0 * z) * (s[n] - s[i + 1]));
            }));

        const double bi = sys.params.base.b[i];
        const bool first = (i == 0), last = (i == n - 1);
        out.U.push_back([bi, z, om2, first, last](double qi) -> double {
            const double q2 = qi * qi;
            const double sc = sinhc(z, q2);
            double u = 0.0;
            if (bi != 0.0) {
                if (qi == 0.0) throw SingularPoint("U_i undefined at q_i = 0");
                u += (bi * 0.5) / ((q2 * sc) * sc);
            }
            if (om2 != 0.0 && (first || last)) {
                // boundary omega^2 terms carry a 1/(4z) factor
                if (z == 0.0) throw Error("boundary potentials need z != 0 when omega2 != 0");
                const double edge = om2 / (4.0 * z) / sc;
                if (first) u += edge * std::exp(z * q2);
                if (last) u -= edge * std::exp(-z * q2);
            }
            return u;
        });
    }
    return out;
}

Eigen::MatrixXd separability_matrix(const System& sys, const PhasePoint& x) {
    validate(sys);
    const int n = sys.params.base.n;
    if (x.n() != n) throw DimensionMismatch("point dimension does not match the system");
    const double z = sys.params.z;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    auto q2 = [&](int i) { return x.q[i] * x.q[i]; };
    B(0, n - 1) = std::exp(-z * q2(n - 1)) / (2.0 * sinhc(z, q2(n - 1)));
    for (int i = 1; i < n; ++i) {
        B(i, i - 1) = std::exp(-z * q2(i - 1)) / sinhc(z, q2(i - 1));
        B(i, i) = -std::exp(z * q2(i)) / sinhc(z, q2(i));
    }
    return B;
}

double determinant_closed_form(const System& sys, const PhasePoint& x) {
    validate(sys);
    const int n = sys.params.base.n;
    const double z = sys.params.z;
    double prod = 0.5;
    for (int i = 0; i < n; ++i) {
        const double q2 = x.q[i] * x.q[i];
        prod *= std::exp(-z * q2) / sinhc(z, q2);
    }
    return (n % 2 == 1) ? prod : -prod;
}

Eigen::MatrixXd inverse_coefficients(const System& sys, const PhasePoint& x) {
    validate(sys);
    const int n = sys.params.base.n;
    if (x.n() != n) throw DimensionMismatch("point dimension does not match the system");
    const double z = sys.params.z;
    std::vector<double> s(n + 1, 0.0);
    for (int i = 0; i < n; ++i) s[i + 1] = s[i] + x.q[i] * x.q[i];

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double q2 = x.q[i] * x.q[i];
        const double base = sinhc(z, q2) * std::exp(z * q2);
        A(i, 0) = 2.0 * base * std::exp(2.0 * z * (s[n] - s[i + 1]));
        for (int j = i + 1; j < n; ++j)
            A(i, j) = base * std::exp(2.0 * z * (s[j] - s[i + 1]));
    }
    return A;
}

Observable z_integral(const System& sys, int j) {
    validate(sys);
    const int n = sys.params.base.n;
    if (j < 2 || j > n) throw BadTowerIndex("separation integral index needs 2 <= j <= N");
    std::vector<Guard> guards;
    for (int i = 0; i < j - 1; ++i)
        if (sys.params.base.b[i] != 0.0)
            guards.push_back({Guard::Kind::coordinate_nonzero, i, 0.0});
    return make_observable(
        n,
        [jm1 = j - 1, z = sys.params.z, b = sys.params.base.b,
         om2 = sys.params.base.omega2]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            auto s = prefix_q2(q);
            T acc = 0.0;
            for (int i = 0; i < jm1; ++i) {
                T q2 = q[i] * q[i];
                T sc = sinhc(z, q2);
                T inner = p[i] * p[i];
                if (b[i] != 0.0) inner += b[i] / ((q2 * sc) * sc);
                T win = s[jm1] - s[i + 1];
                acc += (0.5 * sc) * exp(z * q2) * exp((2.0 * z) * win) * inner;
            }
            T lead = s[jm1];
            return acc + om2 * ((0.5 * lead) * expm1_over((2.0 * z) * lead));
        },
        std::move(guards));
}

Observable z_integral_limit(const System& sys, int j) {
    validate(sys);
    const int n = sys.params.base.n;
    if (j < 2 || j > n) throw BadTowerIndex("separation integral index needs 2 <= j <= N");
    std::vector<Guard> guards;
    for (int i = 0; i < j - 1; ++i)
        if (sys.params.base.b[i] != 0.0)
            guards.push_back({Guard::Kind::coordinate_nonzero, i, 0.0});
    return make_observable(
        n,
        [jm1 = j - 1, b = sys.params.base.b,
         om2 = sys.params.base.omega2]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            T acc = 0.0;
            T lead = 0.0;
            for (int i = 0; i < jm1; ++i) {
                T q2 = q[i] * q[i];
                T inner = p[i] * p[i];
                if (b[i] != 0.0) inner += b[i] / q2;
                acc += 0.5 * inner;
                lead += q[i] * q[i];
            }
            return acc + om2 * (0.5 * lead);
        },
        std::move(guards));
}

}  // namespace koalint::stackel
