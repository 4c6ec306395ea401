#pragma once

// Forward-mode dual numbers.  Dual<double> carries one directional derivative,
// Dual<Dual<double>> one second-order direction (needed for brackets of
// brackets).  Arithmetic follows the product/chain rules exactly; there is no
// truncation error anywhere in this header.

#include <cmath>

namespace koalint {

// make the double overloads visible to unqualified calls in generic bodies
using std::cosh;
using std::exp;
using std::expm1;
using std::sinh;

template <class T>
struct Dual {
    T v{};  // value
    T d{};  // directional derivative

    Dual() = default;
    Dual(double x) : v(x), d() {}  // constants have zero derivative
    Dual(T value, T deriv) : v(value), d(deriv) {}
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual1>;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) { return value_of(x.v); }

template <class T>
Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T>
Dual<T> operator+(const Dual<T>& a, double b) { return {a.v + b, a.d}; }
template <class T>
Dual<T> operator+(double a, const Dual<T>& b) { return {a + b.v, b.d}; }

template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a, double b) { return {a.v - b, a.d}; }
template <class T>
Dual<T> operator-(double a, const Dual<T>& b) { return {a - b.v, -b.d}; }

template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T>
Dual<T> operator*(const Dual<T>& a, double b) { return {a.v * b, a.d * b}; }
template <class T>
Dual<T> operator*(double a, const Dual<T>& b) { return {a * b.v, a * b.d}; }

template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, double b) { return {a.v / b, a.d / b}; }
template <class T>
Dual<T> operator/(double a, const Dual<T>& b) {
    return {a / b.v, (-a) * b.d / (b.v * b.v)};
}

template <class T>
Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) { a = a + b; return a; }
template <class T>
Dual<T>& operator+=(Dual<T>& a, double b) { a = a + b; return a; }
template <class T>
Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) { a = a - b; return a; }
template <class T>
Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b) { a = a * b; return a; }

template <class T>
Dual<T> exp(const Dual<T>& x) {
    using std::exp;
    auto e = exp(x.v);
    return {e, x.d * e};
}

template <class T>
Dual<T> expm1(const Dual<T>& x) {
    using std::exp;
    using std::expm1;
    return {expm1(x.v), x.d * exp(x.v)};
}

template <class T>
Dual<T> sinh(const Dual<T>& x) {
    using std::cosh;
    using std::sinh;
    return {sinh(x.v), x.d * cosh(x.v)};
}

template <class T>
Dual<T> cosh(const Dual<T>& x) {
    using std::cosh;
    using std::sinh;
    return {cosh(x.v), x.d * sinh(x.v)};
}

// Series switch threshold shared by the stable primitives below.  The quartic
// tail keeps the branch error under 1e-20 at the switch point.
inline constexpr double kSeriesTau = 1e-4;

// sinh(z*u)/(z*u), total in both arguments; equals 1 exactly when z*u == 0.
template <class T>
T sinhc(double z, const T& u) {
    using std::sinh;
    T w = z * u;
    if (std::abs(value_of(w)) < kSeriesTau) {
        T w2 = w * w;
        return 1.0 + w2 * (1.0 / 6.0) + (w2 * w2) * (1.0 / 120.0);
    }
    return sinh(w) / w;
}

// (e^x - 1)/x, equal to 1 exactly at x == 0.
template <class T>
T expm1_over(const T& x) {
    using std::expm1;
    if (std::abs(value_of(x)) < kSeriesTau) {
        return 1.0 + x * 0.5 + (x * x) * (1.0 / 6.0) + ((x * x) * x) * (1.0 / 24.0);
    }
    return expm1(x) / x;
}

}  // namespace koalint
