#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "koalint/dynamics.hpp"
#include "koalint/sl2_core.hpp"
#include "koalint/sl2_deformed.hpp"
#include "test_support.hpp"

using namespace koalint;
using testing::box_point;

namespace {

Observable harmonic() {  // p^2 + q^2, angular frequency 2
    return sl2::sw_hamiltonian({1, 1.0, {0.0}});
}

double state_distance(const PhasePoint& a, const PhasePoint& b) {
    double acc = 0.0;
    for (int i = 0; i < a.n(); ++i) {
        acc += (a.q[i] - b.q[i]) * (a.q[i] - b.q[i]);
        acc += (a.p[i] - b.p[i]) * (a.p[i] - b.p[i]);
    }
    return std::sqrt(acc);
}

double period_return_error(double dt) {
    const double period = std::acos(-1.0);  // 2*pi / 2
    PhasePoint x0({1.0}, {0.0});
    dynamics::Options opt;
    opt.method = dynamics::Method::rk4;
    opt.dt = dt;
    auto traj = dynamics::integrate(harmonic(), "harmonic", x0, period, opt);
    return state_distance(traj.states.back(), x0);
}

}  // namespace

TEST_CASE("Hamiltonian vector field") {
    // oscillator at (q,p) = (1,0): qdot = 2p = 0, pdot = -2q = -2
    auto rhs = dynamics::hamilton_rhs(harmonic(), PhasePoint({1.0}, {0.0}));
    CHECK(rhs[0] == 0.0);
    CHECK(rhs[1] == -2.0);

    // free motion: qdot = 2p, pdot = 0
    auto free2 = sl2::sw_hamiltonian({2, 0.0, {0.0, 0.0}});
    PhasePoint x({0.3, -0.8}, {1.1, -0.4});
    auto rhs2 = dynamics::hamilton_rhs(free2, x);
    CHECK(rhs2[0] == 2.0 * 1.1);
    CHECK(rhs2[1] == 2.0 * -0.4);
    CHECK(rhs2[2] == 0.0);
    CHECK(rhs2[3] == 0.0);

    // deformed field matches central differences of the Hamiltonian
    sl2z::Params dz{{2, 1.0, {1.0, 0.5}}, 0.2};
    auto h = sl2z::deformed_sw_hamiltonian(dz);
    for (int k = 0; k < 10; ++k) {
        PhasePoint y = box_point(503, k, 2);
        auto exact = dynamics::hamilton_rhs(h, y);
        auto fd = testing::central_difference_gradient(h, y, 1e-5);
        for (int i = 0; i < 2; ++i) {
            REQUIRE(std::abs(exact[i] - fd[2 + i]) <= 1e-7 * std::max(1.0, std::abs(fd[2 + i])));
            REQUIRE(std::abs(exact[2 + i] + fd[i]) <= 1e-7 * std::max(1.0, std::abs(fd[i])));
        }
    }
}

TEST_CASE("rk4 returns to the start after one oscillator period") {
    CHECK(period_return_error(1e-3) <= 1e-8);
}

TEST_CASE("rk4 global error scales as dt^4") {
    // steps chosen inside the truncation-dominated regime; below dt ~ 1e-3
    // the period-return error sits on the rounding floor (~1e-13)
    const double coarse = period_return_error(2e-2);
    const double fine = period_return_error(1e-2);
    const double ratio = coarse / fine;
    CHECK(ratio > 16.0 * 0.7);
    CHECK(ratio < 16.0 * 1.3);
}

TEST_CASE("zero Hamiltonian leaves the state constant") {
    auto zero = constant_observable(2, 0.0);
    PhasePoint x0({1.0, -0.5}, {0.3, 0.2});
    auto traj = dynamics::integrate(zero, "zero", x0, 1.0, {});
    for (const auto& x : traj.states) CHECK(state_distance(x, x0) == 0.0);
}

TEST_CASE("trajectory times are strictly increasing") {
    auto traj = dynamics::integrate(harmonic(), "harmonic", PhasePoint({1.0}, {0.0}), 1.0, {});
    REQUIRE(traj.times.size() >= 2);
    for (std::size_t k = 1; k < traj.times.size(); ++k)
        CHECK(traj.times[k] > traj.times[k - 1]);
    CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adaptive integration conserves the tower integral") {
    sl2::Params params{2, 1.0, {1.0, 1.0}};
    auto h = sl2::sw_hamiltonian(params);
    PhasePoint x0({1.0, 1.1}, {0.3, -0.2});
    auto traj = dynamics::integrate(h, "sw2", x0, 10.0, {});
    std::vector<verify::Labeled> fns{{"H", h}, {"C(2)", sl2::left_integral(params, 2)}};
    for (const auto& d : dynamics::drift_report(traj, fns)) CHECK(d.max_drift <= 1e-8);
}

TEST_CASE("drift report: deformed towers, constants, and a non-conserved probe") {
    sl2z::Params dz{{3, 1.0, {1.0, 1.0, 1.0}}, 0.2};
    auto h = sl2z::deformed_sw_hamiltonian(dz);
    PhasePoint x0({1.0, 1.1, 0.9}, {0.3, -0.2, 0.1});
    auto traj = dynamics::integrate(h, "deformed3", x0, 5.0, {});

    std::vector<verify::Labeled> fns{
        {"Cz(2)", sl2z::deformed_left_integral(dz, 2)},
        {"Cz(3)", sl2z::deformed_left_integral(dz, 3)},
        {"Iz(2)", sl2z::deformed_right_integral(dz, 2)},
        {"const", constant_observable(3, 4.2)},
        {"q1", coordinate_q(3, 1)},
    };
    auto drifts = dynamics::drift_report(traj, fns);
    CHECK(drifts[0].max_drift <= 1e-7);
    CHECK(drifts[1].max_drift <= 1e-7);
    CHECK(drifts[2].max_drift <= 1e-7);
    CHECK(drifts[3].max_drift == 0.0);
    CHECK(drifts[4].max_drift > 1e-2);  // generic motion moves q1
}

TEST_CASE("tightening the adaptive tolerance tightens the drift") {
    sl2::Params params{2, 1.0, {1.0, 1.0}};
    auto h = sl2::sw_hamiltonian(params);
    PhasePoint x0({1.0, 1.1}, {0.3, -0.2});
    std::vector<verify::Labeled> fns{{"C(2)", sl2::left_integral(params, 2)}};

    std::vector<double> drifts;
    for (double tol : {1e-8, 1e-10, 1e-12}) {
        dynamics::Options opt;
        opt.rel_tol = tol;
        auto traj = dynamics::integrate(h, "sw2", x0, 10.0, opt);
        drifts.push_back(dynamics::drift_report(traj, fns).front().max_drift);
    }
    // monotone within a factor of 2 (rounding floor allowed for)
    CHECK(drifts[1] <= 2.0 * drifts[0]);
    CHECK(drifts[2] <= 2.0 * drifts[1]);
}

TEST_CASE("singular encounters") {
    sl2::Params params{1, 1.0, {1.0}};
    auto h = sl2::sw_hamiltonian(params);

    // starting on the singular surface fails immediately
    CHECK_THROWS_AS(dynamics::integrate(h, "sw1", PhasePoint({0.0}, {1.0}), 1.0, {}),
                    SingularEncounter);

    // a guarded coordinate crossing zero mid-trajectory is detected: harmonic
    // motion from q = 1 crosses q = 0 within a quarter period
    auto guarded = make_observable(
        1,
        []<class T>(std::span<const T> q, std::span<const T> p) -> T {
            return p[0] * p[0] + q[0] * q[0];
        },
        {{Guard::Kind::coordinate_nonzero, 0, 0.0}});
    CHECK_THROWS_AS(dynamics::integrate(guarded, "guarded", PhasePoint({1.0}, {0.0}), 2.0, {}),
                    SingularEncounter);

    // the repulsive barrier keeps the same motion regular when it is physical
    CHECK_NOTHROW(dynamics::integrate(h, "sw1", PhasePoint({0.4}, {-1.5}), 5.0, {}));
}

TEST_CASE("adaptive step underflow is reported") {
    dynamics::Options opt;
    opt.rel_tol = 0.0;
    opt.abs_tol = 1e-300;  // unachievable accuracy forces the step to collapse
    CHECK_THROWS_AS(dynamics::integrate(harmonic(), "harmonic", PhasePoint({1.0}, {0.0}), 1.0, opt),
                    StepUnderflow);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(dynamics::integrate(harmonic(), "h", PhasePoint({1.0, 2.0}, {0.0, 0.0}), 1.0,
                                        {}),
                    DimensionMismatch);
    CHECK_THROWS_AS(dynamics::integrate(harmonic(), "h", PhasePoint({1.0}, {0.0}), -1.0, {}),
                    Error);
    dynamics::Options bad;
    bad.method = dynamics::Method::rk4;
    bad.dt = 0.0;
    CHECK_THROWS_AS(dynamics::integrate(harmonic(), "h", PhasePoint({1.0}, {0.0}), 1.0, bad),
                    Error);
    CHECK_THROWS_AS(dynamics::drift_report(dynamics::Trajectory{}, {}), Error);
}
