#include "koalint/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace koalint::dynamics {

std::vector<double> hamilton_rhs(const Observable& hamiltonian, const PhasePoint& x) {
    auto grad = gradient(hamiltonian, x);
    const int n = hamiltonian.arity();
    std::vector<double> rhs(2 * n);
    for (int i = 0; i < n; ++i) {
        rhs[i] = grad[n + i];
        rhs[n + i] = -grad[i];
    }
    return rhs;
}

namespace {

PhasePoint to_point(int n, std::span<const double> y) {
    return PhasePoint(std::vector<double>(y.begin(), y.begin() + n),
                      std::vector<double>(y.begin() + n, y.end()));
}

std::vector<double> rhs_of(const Observable& h, int n, std::span<const double> y) {
    return hamilton_rhs(h, to_point(n, y));
}

void check_watches(const Observable& h, const PhasePoint& prev, const PhasePoint& next,
                   double t) {
    for (const Guard& g : h.guards()) {
        const double a = g.watch_value(prev.q, prev.p);
        const double b = g.watch_value(next.q, next.p);
        if (b == 0.0 || a * b < 0.0)
            throw SingularEncounter("trajectory reached a singular surface near t = " +
                                    std::to_string(t));
    }
}

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;

}  // namespace

Trajectory integrate(const Observable& hamiltonian, const std::string& label,
                     const PhasePoint& x0, double t_end, const Options& opt) {
    if (x0.n() != hamiltonian.arity())
        throw DimensionMismatch("initial state does not match the Hamiltonian");
    if (t_end <= 0.0) throw Error("t_end must be positive");
    if (opt.method == Method::rk4 && opt.dt <= 0.0) throw Error("dt must be positive");

    // a start on the singular surface is an immediate encounter, not a sample
    for (const Guard& g : hamiltonian.guards())
        if (g.watch_value(x0.q, x0.p) == 0.0)
            throw SingularEncounter("initial state lies on a singular surface (t = 0)");

    const int n = hamiltonian.arity();
    const int dim = 2 * n;

    Trajectory traj;
    traj.hamiltonian = label;
    traj.method = opt.method == Method::rk4 ? "rk4" : "adaptive";
    traj.step_or_tol = opt.method == Method::rk4 ? opt.dt : opt.rel_tol;
    traj.times.push_back(0.0);
    traj.states.push_back(x0);

    std::vector<double> y(dim);
    for (int i = 0; i < n; ++i) {
        y[i] = x0.q[i];
        y[n + i] = x0.p[i];
    }

    auto push_state = [&](double t, std::span<const double> state) {
        PhasePoint next = to_point(n, state);
        check_watches(hamiltonian, traj.states.back(), next, t);
        traj.times.push_back(t);
        traj.states.push_back(std::move(next));
    };

    if (opt.method == Method::rk4) {
        if (t_end / opt.dt > 2e9) throw Error("step count exceeds 2e9; increase dt");
        const int nsteps = static_cast<int>(std::ceil(t_end / opt.dt - 1e-12));
        double t = 0.0;
        std::vector<double> k1, k2, k3, k4, tmp(dim);
        for (int step = 1; step <= nsteps; ++step) {
            const double h = step == nsteps ? t_end - t : opt.dt;
            k1 = rhs_of(hamiltonian, n, y);
            for (int i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
            k2 = rhs_of(hamiltonian, n, tmp);
            for (int i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
            k3 = rhs_of(hamiltonian, n, tmp);
            for (int i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
            k4 = rhs_of(hamiltonian, n, tmp);
            for (int i = 0; i < dim; ++i)
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            t = step == nsteps ? t_end : t + h;
            push_state(t, y);
        }
        return traj;
    }

    // adaptive embedded pair, FSAL
    double t = 0.0;
    double h = std::min(1e-2, t_end);
    std::vector<double> k1 = rhs_of(hamiltonian, n, y);
    std::vector<double> k2, k3, k4, k5, k6, k7, ynew(dim), tmp(dim);
    while (t < t_end) {
        if (t_end - t < opt.min_step) break;  // numerically at the endpoint
        h = std::min(h, t_end - t);
        if (h < opt.min_step) throw StepUnderflow("adaptive step fell below the minimum");

        for (int i = 0; i < dim; ++i) tmp[i] = y[i] + h * A21 * k1[i];
        k2 = rhs_of(hamiltonian, n, tmp);
        for (int i = 0; i < dim; ++i) tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        k3 = rhs_of(hamiltonian, n, tmp);
        for (int i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        k4 = rhs_of(hamiltonian, n, tmp);
        for (int i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        k5 = rhs_of(hamiltonian, n, tmp);
        for (int i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] +
                                 A65 * k5[i]);
        k6 = rhs_of(hamiltonian, n, tmp);
        for (int i = 0; i < dim; ++i)
            ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        k7 = rhs_of(hamiltonian, n, ynew);

        double err = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                                  E7 * k7[i]);
            const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / dim);

        if (err <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
            push_state(t, y);
        }
        const double factor = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return traj;
}

std::vector<Drift> drift_report(const Trajectory& traj, std::span<const verify::Labeled> fns) {
    if (traj.states.empty()) throw Error("empty trajectory");
    std::vector<Drift> out;
    out.reserve(fns.size());
    for (const auto& f : fns) {
        const double f0 = f.fn.eval(traj.states.front());
        const double scale = std::max(1.0, std::abs(f0));
        double worst = 0.0;
        for (const auto& x : traj.states)
            worst = std::max(worst, std::abs(f.fn.eval(x) - f0) / scale);
        out.push_back({f.label, worst});
    }
    return out;
}

}  // namespace koalint::dynamics
