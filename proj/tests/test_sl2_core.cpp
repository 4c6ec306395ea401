#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "koalint/sl2_core.hpp"
#include "koalint/verify.hpp"
#include "test_support.hpp"

using namespace koalint;
using testing::box_point;
using testing::scaled_bracket;
using testing::scaled_bracket_identity;

namespace {

sl2::Params params_for(int n) {
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) b[i] = 0.5 + 0.25 * i;
    return {n, 1.3, b};
}

}  // namespace

TEST_CASE("generator values at hand-checked points") {
    sl2::Params p2{2, 1.0, {0.0, 0.0}};
    CHECK(sl2::generator_minus(p2).eval(PhasePoint({1.0, 2.0}, {0.0, 0.0})) == 5.0);

    sl2::Params p1{1, 1.0, {1.0}};
    CHECK(sl2::generator_plus(p1).eval(PhasePoint({1.0}, {1.0})) == 2.0);

    // {f-, f+} = 4 f3 at the unit point with b = 0
    auto fm = sl2::generator_minus(p2);
    auto fp = sl2::generator_plus(p2);
    auto f3 = sl2::generator_three(p2);
    PhasePoint unit({1.0, 1.0}, {1.0, 1.0});
    CHECK(poisson_bracket(fm, fp, unit) == 8.0);
    CHECK(4.0 * f3.eval(unit) == 8.0);
}

TEST_CASE("sl(2) closure at random points for N in {1,2,3,4,6}") {
    for (int n : {1, 2, 3, 4, 6}) {
        auto params = params_for(n);
        auto fm = sl2::generator_minus(params);
        auto fp = sl2::generator_plus(params);
        auto f3 = sl2::generator_three(params);
        for (int k = 0; k < 100; ++k) {
            PhasePoint x = box_point(100 + n, k, n);
            REQUIRE(scaled_bracket_identity(f3, fp, 2.0 * fp.eval(x), x) <= 1e-11);
            REQUIRE(scaled_bracket_identity(f3, fm, -2.0 * fm.eval(x), x) <= 1e-11);
            REQUIRE(scaled_bracket_identity(fm, fp, 4.0 * f3.eval(x), x) <= 1e-11);
        }
    }
}

TEST_CASE("one-particle Casimir evaluates to -b1") {
    sl2::Params p1{1, 1.0, {0.75}};
    auto fm = sl2::generator_minus(p1);
    auto fp = sl2::generator_plus(p1);
    auto f3 = sl2::generator_three(p1);
    for (int k = 0; k < 100; ++k) {
        PhasePoint x = box_point(31, k, 1);
        const double cas = f3.eval(x) * f3.eval(x) - fm.eval(x) * fp.eval(x);
        REQUIRE(std::abs(cas + 0.75) <= 1e-12 * std::max(1.0, std::abs(fm.eval(x) * fp.eval(x))));
    }
}

TEST_CASE("Hamiltonian values") {
    CHECK(sl2::sw_hamiltonian({1, 1.0, {1.0}}).eval(PhasePoint({1.0}, {1.0})) == 3.0);
    CHECK(sl2::sw_hamiltonian({2, 1.0, {1.0, 1.0}}).eval(PhasePoint({1.0, 1.0}, {0.0, 0.0})) ==
          4.0);

    // free reduction: b = 0, omega2 = 0
    sl2::Params free3{3, 0.0, {0.0, 0.0, 0.0}};
    auto h = sl2::sw_hamiltonian(free3);
    for (int k = 0; k < 20; ++k) {
        PhasePoint x = box_point(37, k, 3);
        double kinetic = 0.0;
        for (double pi : x.p) kinetic += pi * pi;
        CHECK(h.eval(x) == kinetic);
    }
}

TEST_CASE("pair invariant values") {
    sl2::Params b0{2, 1.0, {0.0, 0.0}};
    CHECK(sl2::pair_invariant(b0, 1, 2).eval(PhasePoint({1.0, 1.0}, {1.0, 1.0})) == 0.0);
    CHECK(sl2::pair_invariant(b0, 1, 2).eval(PhasePoint({1.0, 1.0}, {1.0, -1.0})) == 4.0);

    sl2::Params b1{2, 1.0, {1.0, 1.0}};
    CHECK(sl2::pair_invariant(b1, 1, 2).eval(PhasePoint({1.0, 2.0}, {0.0, 0.0})) == 4.25);

    CHECK_THROWS_AS(sl2::pair_invariant(b1, 2, 1), BadTowerIndex);
    CHECK_THROWS_AS(sl2::pair_invariant(b1, 1, 3), BadTowerIndex);
}

TEST_CASE("pair invariant is symmetric under site exchange together with b exchange") {
    sl2::Params forward{2, 1.0, {0.8, 1.7}};
    sl2::Params swapped{2, 1.0, {1.7, 0.8}};
    auto f = sl2::pair_invariant(forward, 1, 2);
    auto g = sl2::pair_invariant(swapped, 1, 2);
    for (int k = 0; k < 100; ++k) {
        PhasePoint x = box_point(42, k, 2);
        PhasePoint y({x.q[1], x.q[0]}, {x.p[1], x.p[0]});
        const double a = f.eval(x), b = g.eval(y);
        CHECK(std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("tower values and site windows") {
    sl2::Params p2{2, 1.0, {1.0, 1.0}};
    CHECK(sl2::left_integral(p2, 2).eval(PhasePoint({1.0, 1.0}, {0.0, 0.0})) == -4.0);

    // N=3: C(2) lives on sites 1,2 and I(2) on sites 2,3
    auto p3 = params_for(3);
    auto c2 = sl2::left_integral(p3, 2);
    auto i2 = sl2::right_integral(p3, 2);
    for (int k = 0; k < 20; ++k) {
        PhasePoint x = box_point(41, k, 3);
        auto gc = gradient(c2, x);
        CHECK(gc[2] == 0.0);  // d/dq3
        CHECK(gc[5] == 0.0);  // d/dp3
        auto gi = gradient(i2, x);
        CHECK(gi[0] == 0.0);
        CHECK(gi[3] == 0.0);
    }

    // all b = 0 and p = 0 makes every tower member vanish
    sl2::Params zero4{4, 1.0, {0.0, 0.0, 0.0, 0.0}};
    PhasePoint rest({1.0, -0.7, 1.3, 0.6}, {0.0, 0.0, 0.0, 0.0});
    for (int m = 2; m <= 4; ++m) {
        CHECK(sl2::left_integral(zero4, m).eval(rest) == 0.0);
        CHECK(sl2::right_integral(zero4, m).eval(rest) == 0.0);
    }

    CHECK_THROWS_AS(sl2::left_integral(p3, 1), BadTowerIndex);
    CHECK_THROWS_AS(sl2::right_integral(p3, 4), BadTowerIndex);
}

TEST_CASE("towers equal the Casimir composed with the window generators") {
    for (int n : {2, 3}) {
        auto params = params_for(n);
        auto fm = sl2::generator_minus(params);
        auto fp = sl2::generator_plus(params);
        auto f3 = sl2::generator_three(params);
        auto cn = sl2::left_integral(params, n);
        for (int k = 0; k < 50; ++k) {
            PhasePoint x = box_point(43 + n, k, n);
            const double via_casimir =
                f3.eval(x) * f3.eval(x) - fm.eval(x) * fp.eval(x);
            REQUIRE(std::abs(cn.eval(x) - via_casimir) <=
                    1e-12 * std::max(1.0, std::abs(via_casimir)));
        }
    }
}

TEST_CASE("conservation and tower involution up to N = 6") {
    for (int n : {2, 3, 4, 6}) {
        auto params = params_for(n);
        auto h = sl2::sw_hamiltonian(params);
        std::vector<Observable> towers;
        for (int m = 2; m <= n; ++m) towers.push_back(sl2::left_integral(params, m));
        for (int m = 2; m <= n; ++m) towers.push_back(sl2::right_integral(params, m));
        for (int k = 0; k < 30; ++k) {
            PhasePoint x = box_point(47 + n, k, n);
            for (const auto& f : towers) REQUIRE(scaled_bracket(h, f, x) <= 1e-10);
        }
        // within-tower pairs
        const int half = n - 1;
        for (int k = 0; k < 20; ++k) {
            PhasePoint x = box_point(53 + n, k, n);
            for (int a = 0; a < half; ++a)
                for (int b = a + 1; b < half; ++b) {
                    REQUIRE(scaled_bracket(towers[a], towers[b], x) <= 1e-10);
                    REQUIRE(scaled_bracket(towers[half + a], towers[half + b], x) <= 1e-10);
                }
        }
    }
}

TEST_CASE("left and right towers with overlapping partial windows do not commute") {
    // N=3: C(2) on sites {1,2} and I(2) on sites {2,3}; with b=0 this bracket
    // is -4 L12 L23 L13, which is generically nonzero
    auto p3 = params_for(3);
    auto c2 = sl2::left_integral(p3, 2);
    auto i2 = sl2::right_integral(p3, 2);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k)
        worst = std::max(worst, scaled_bracket(c2, i2, box_point(59, k, 3)));
    CHECK(worst > 1e-3);

    // at N=4 the 2-site windows are disjoint and the bracket vanishes
    auto p4 = params_for(4);
    auto c2d = sl2::left_integral(p4, 2);
    auto i2d = sl2::right_integral(p4, 2);
    for (int k = 0; k < 50; ++k)
        REQUIRE(scaled_bracket(c2d, i2d, box_point(61, k, 4)) <= 1e-12);
}

TEST_CASE("full-window left and right integrals agree pointwise") {
    for (int n : {2, 3, 4, 5, 6}) {
        auto params = params_for(n);
        auto cn = sl2::left_integral(params, n);
        auto in = sl2::right_integral(params, n);
        for (int k = 0; k < 100; ++k) {
            PhasePoint x = box_point(67 + n, k, n);
            const double a = cn.eval(x), b = in.eval(x);
            REQUIRE(std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}));
        }
    }
}

TEST_CASE("functional independence: quasi-maximal rank, maximal with M1") {
    for (int n : {3, 4}) {
        auto params = params_for(n);
        std::vector<verify::Labeled> set{{"H", sl2::sw_hamiltonian(params)}};
        for (int m = 2; m <= n; ++m)
            set.push_back({"C" + std::to_string(m), sl2::left_integral(params, m)});
        for (int m = 2; m <= n - 1; ++m)
            set.push_back({"I" + std::to_string(m), sl2::right_integral(params, m)});
        verify::SweepOptions opt;
        opt.seed = 71 + n;
        auto rank = verify::independence_rank(set, 2 * n - 2, opt);
        CHECK(rank.pass);
        CHECK(rank.median_rank == 2 * n - 2);

        set.push_back({"M1", sl2::liouville_integral(params, 1)});
        auto extended = verify::independence_rank(set, 2 * n - 1, opt);
        CHECK(extended.pass);
        CHECK(extended.median_rank == 2 * n - 1);
    }
}

TEST_CASE("generalized Hamiltonian family") {
    auto params = params_for(3);

    // the linear choice reproduces the oscillator Hamiltonian bitwise
    SmoothFn linear{[om2 = params.omega2](double u) { return om2 * u; },
                    [om2 = params.omega2](double) { return om2; }, [](double) { return 0.0; }};
    auto hf = sl2::generalized_hamiltonian(params, linear);
    auto h = sl2::sw_hamiltonian(params);
    for (int k = 0; k < 50; ++k) {
        PhasePoint x = box_point(73, k, 3);
        CHECK(hf.eval(x) == h.eval(x));
    }

    // F = 0, b = 0 leaves the free Hamiltonian
    sl2::Params free3{3, 0.0, {0.0, 0.0, 0.0}};
    SmoothFn zerof{[](double) { return 0.0; }, [](double) { return 0.0; },
                   [](double) { return 0.0; }};
    auto hfree = sl2::generalized_hamiltonian(free3, zerof);
    for (int k = 0; k < 20; ++k) {
        PhasePoint x = box_point(74, k, 3);
        double kinetic = 0.0;
        for (double pi : x.p) kinetic += pi * pi;
        CHECK(hfree.eval(x) == kinetic);
    }

    // F(u) = u^2 stays in involution with both towers
    SmoothFn quad{[](double u) { return u * u; }, [](double u) { return 2.0 * u; },
                  [](double) { return 2.0; }};
    auto hq = sl2::generalized_hamiltonian(params, quad);
    auto c2 = sl2::left_integral(params, 2);
    auto c3 = sl2::left_integral(params, 3);
    auto i2 = sl2::right_integral(params, 2);
    for (int k = 0; k < 100; ++k) {
        PhasePoint x = box_point(75, k, 3);
        REQUIRE(scaled_bracket(hq, c2, x) <= 1e-10);
        REQUIRE(scaled_bracket(hq, c3, x) <= 1e-10);
        REQUIRE(scaled_bracket(hq, i2, x) <= 1e-10);
    }

    CHECK_THROWS_AS(sl2::generalized_hamiltonian(params, SmoothFn{}), Error);
}

TEST_CASE("Liouville integrals") {
    sl2::Params p2{2, 1.0, {1.0, 1.0}};
    CHECK(sl2::liouville_integral(p2, 1).eval(PhasePoint({1.0, 1.0}, {0.0, 0.0})) == 0.0);

    sl2::Params p1{1, 1.0, {1.0}};
    for (int k = 0; k < 20; ++k)
        CHECK(sl2::liouville_integral(p1, 1).eval(box_point(77, k, 1)) == 0.0);

    auto p3 = params_for(3);
    auto h = sl2::sw_hamiltonian(p3);
    std::vector<Observable> ms;
    for (int i = 1; i <= 3; ++i) ms.push_back(sl2::liouville_integral(p3, i));
    for (int k = 0; k < 50; ++k) {
        PhasePoint x = box_point(79, k, 3);
        double sum = 0.0;
        for (const auto& m : ms) sum += m.eval(x);
        REQUIRE(std::abs(sum) <= 1e-13 * std::max(1.0, std::abs(h.eval(x))));
        for (const auto& m : ms) REQUIRE(scaled_bracket(h, m, x) <= 1e-10);
    }

    CHECK_THROWS_AS(sl2::liouville_integral(p3, 0), BadTowerIndex);
    CHECK_THROWS_AS(sl2::liouville_integral(p3, 4), BadTowerIndex);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(sl2::validate({0, 1.0, {}}), Error);
    CHECK_THROWS_AS(sl2::validate({2, -1.0, {1.0, 1.0}}), Error);
    CHECK_THROWS_AS(sl2::validate({2, 1.0, {1.0}}), Error);
}
