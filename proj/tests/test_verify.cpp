#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "koalint/sl2_core.hpp"
#include "koalint/sl2_deformed.hpp"
#include "koalint/verify.hpp"
#include "test_support.hpp"

using namespace koalint;

namespace {

sl2::Params params_for(int n) {
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) b[i] = 0.5 + 0.25 * i;
    return {n, 1.3, b};
}

std::vector<verify::Labeled> tower_set(const sl2::Params& params, bool left, bool right) {
    std::vector<verify::Labeled> out;
    if (left)
        for (int m = 2; m <= params.n; ++m)
            out.push_back({"C(" + std::to_string(m) + ")", sl2::left_integral(params, m)});
    if (right)
        for (int m = 2; m <= params.n; ++m)
            out.push_back({"I(" + std::to_string(m) + ")", sl2::right_integral(params, m)});
    return out;
}

}  // namespace

TEST_CASE("conservation sweep: towers pass, corrupted integral fails") {
    auto params = params_for(3);
    verify::Labeled h{"H", sl2::sw_hamiltonian(params)};
    auto integrals = tower_set(params, true, true);
    verify::SweepOptions opt;
    opt.seed = 401;

    auto reports = verify::check_conservation(h, integrals, opt);
    CHECK(reports.size() == integrals.size());
    for (const auto& r : reports) {
        CHECK(r.pass);
        CHECK(r.points == 100);
        CHECK(r.seed == 401);
    }

    // H against itself is trivially conserved
    std::vector<verify::Labeled> self{{"H", h.fn}};
    CHECK(verify::check_conservation(h, self, opt).front().pass);

    // negative control: C(2) + q1 is not conserved
    std::vector<verify::Labeled> corrupted{
        {"C(2)+q1", sl2::left_integral(params, 2) + coordinate_q(3, 1)}};
    auto bad = verify::check_conservation(h, corrupted, opt);
    CHECK_FALSE(bad.front().pass);
    CHECK(bad.front().max_scaled > 1e-4);
}

TEST_CASE("involution sweep: towers blockwise, corrupted pair fails") {
    auto params = params_for(4);
    verify::SweepOptions opt;
    opt.seed = 409;

    for (bool left : {true, false}) {
        auto block = tower_set(params, left, !left);
        auto rows = verify::check_involution(block, opt);
        REQUIRE(rows.size() == block.size());
        for (const auto& row : rows)
            for (const auto& r : row) CHECK(r.pass);
    }

    // singleton set is vacuously fine
    std::vector<verify::Labeled> single{{"C(2)", sl2::left_integral(params, 2)}};
    auto rows = verify::check_involution(single, opt);
    CHECK(rows.size() == 1);
    CHECK(rows.front().empty());

    // a tower member plus a coordinate breaks the block
    std::vector<verify::Labeled> corrupted{
        {"C(2)", sl2::left_integral(params, 2)},
        {"C(3)+q1", sl2::left_integral(params, 3) + coordinate_q(4, 1)}};
    auto bad = verify::check_involution(corrupted, opt);
    CHECK_FALSE(bad[0][0].pass);
}

TEST_CASE("overlapping left/right windows measure as genuinely non-commuting") {
    auto params = params_for(3);
    verify::SweepOptions opt;
    opt.seed = 419;
    std::vector<verify::Labeled> mixed{{"C(2)", sl2::left_integral(params, 2)},
                                       {"I(2)", sl2::right_integral(params, 2)}};
    auto rows = verify::check_involution(mixed, opt);
    CHECK_FALSE(rows[0][0].pass);
    CHECK(rows[0][0].max_scaled > 1e-3);

    // the same windows under deformation stay non-commuting
    sl2z::Params dz{params_for(3), 0.3};
    std::vector<verify::Labeled> mixed_z{{"Cz(2)", sl2z::deformed_left_integral(dz, 2)},
                                         {"Iz(2)", sl2z::deformed_right_integral(dz, 2)}};
    auto rows_z = verify::check_involution(mixed_z, opt);
    CHECK_FALSE(rows_z[0][0].pass);

    // disjoint windows at N = 4 commute
    auto p4 = params_for(4);
    std::vector<verify::Labeled> disjoint{{"C(2)", sl2::left_integral(p4, 2)},
                                          {"I(2)", sl2::right_integral(p4, 2)}};
    CHECK(verify::check_involution(disjoint, opt)[0][0].pass);
}

TEST_CASE("independence rank: expected values and degenerate control") {
    auto params = params_for(3);
    verify::SweepOptions opt;
    opt.seed = 421;

    std::vector<verify::Labeled> set{{"H", sl2::sw_hamiltonian(params)}};
    for (int m = 2; m <= 3; ++m)
        set.push_back({"C(" + std::to_string(m) + ")", sl2::left_integral(params, m)});
    set.push_back({"I(2)", sl2::right_integral(params, 2)});
    auto rank = verify::independence_rank(set, 4, opt);
    CHECK(rank.pass);
    CHECK(rank.median_rank == 4);
    CHECK(rank.rank_per_point.size() == 5);

    // duplicated function has rank 1
    std::vector<verify::Labeled> dup{{"H", sl2::sw_hamiltonian(params)},
                                     {"H", sl2::sw_hamiltonian(params)}};
    auto dup_rank = verify::independence_rank(dup, 2, opt);
    CHECK_FALSE(dup_rank.pass);
    CHECK(dup_rank.median_rank == 1);

    set.push_back({"M1", sl2::liouville_integral(params, 1)});
    CHECK(verify::independence_rank(set, 5, opt).median_rank == 5);
}

TEST_CASE("left/right agreement and the mismatched-window control") {
    verify::SweepOptions opt;
    opt.seed = 431;

    auto p4 = params_for(4);
    CHECK(verify::check_left_right("C(4) == I(4)", sl2::left_integral(p4, 4),
                                   sl2::right_integral(p4, 4), opt)
              .pass);

    sl2z::Params dz{params_for(3), 0.3};
    CHECK(verify::check_left_right("Cz(3) == Iz(3)", sl2z::deformed_left_integral(dz, 3),
                                   sl2z::deformed_right_integral(dz, 3), opt)
              .pass);

    // partial windows are different functions: reported, not thrown
    auto p3 = params_for(3);
    auto mism = verify::check_left_right("C(2) vs I(2)", sl2::left_integral(p3, 2),
                                         sl2::right_integral(p3, 2), opt);
    CHECK_FALSE(mism.pass);
    CHECK(mism.max_scaled > 1e-2);
}

TEST_CASE("limit order: first-order convergence, exact zero, corrupted controls") {
    auto base = params_for(2);
    verify::SweepOptions opt;
    opt.seed = 433;
    std::vector<double> zs{1e-2, 1e-3, 1e-4};

    auto quantity = [base](double z) { return sl2z::deformed_left_integral({base, z}, 2); };
    auto good = verify::check_limit_order("Cz(2)", "z", quantity, sl2::left_integral(base, 2), zs,
                                          opt);
    CHECK(good.pass);
    CHECK(good.order > 0.9);
    CHECK(good.order < 1.2);
    CHECK(good.exact_at_zero);
    CHECK(good.zero_diff == 0.0);

    // constant offset: differences stop shrinking, slope collapses
    auto offset = [base](double z) {
        return sl2z::deformed_left_integral({base, z}, 2) + 0.5;
    };
    auto flat = verify::check_limit_order("Cz(2)+0.5", "z", offset, sl2::left_integral(base, 2),
                                          zs, opt);
    CHECK_FALSE(flat.pass);
    CHECK(flat.order < 0.5);  // the offset floors the differences at 0.5
    CHECK_FALSE(flat.exact_at_zero);

    // wrong ordering of the values is a usage error
    std::vector<double> increasing{1e-4, 1e-3};
    CHECK_THROWS_AS(verify::check_limit_order("Cz(2)", "z", quantity,
                                              sl2::left_integral(base, 2), increasing, opt),
                    Error);
}

TEST_CASE("sweeps are deterministic and thread-count independent") {
    auto params = params_for(3);
    verify::Labeled h{"H", sl2::sw_hamiltonian(params)};
    auto integrals = tower_set(params, true, true);
    verify::SweepOptions opt;
    opt.seed = 439;

    auto first = verify::check_conservation(h, integrals, opt);
    auto second = verify::check_conservation(h, integrals, opt);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].max_scaled == second[i].max_scaled);
        CHECK(first[i].max_raw == second[i].max_raw);
    }

    setenv("KOALINT_THREADS", "1", 1);
    auto serial = verify::check_conservation(h, integrals, opt);
    unsetenv("KOALINT_THREADS");
    for (std::size_t i = 0; i < first.size(); ++i)
        CHECK(first[i].max_scaled == serial[i].max_scaled);

    // a different seed samples different points
    opt.seed = 440;
    auto other = verify::check_conservation(h, integrals, opt);
    bool any_different = false;
    for (std::size_t i = 0; i < first.size(); ++i)
        any_different = any_different || other[i].max_raw != first[i].max_raw;
    CHECK(any_different);
}

TEST_CASE("sampling respects the admission filter and exhausts honestly") {
    verify::SweepOptions opt;
    opt.seed = 443;
    opt.n_points = 10;
    opt.accept = [](const PhasePoint&) { return false; };
    auto params = params_for(2);
    auto h = sl2::sw_hamiltonian(params);
    const Observable* regs[] = {&h};
    CHECK_THROWS_AS(verify::sample_points(2, 10, opt, regs), SamplingExhausted);

    opt.accept = [](const PhasePoint& x) { return x.q[0] > 0.0; };
    auto points = verify::sample_points(2, 10, opt, regs);
    CHECK(points.size() == 10);
    for (const auto& x : points) CHECK(x.q[0] > 0.0);
}

TEST_CASE("parallel_for propagates exceptions and covers all indices") {
    std::vector<int> hits(257, 0);
    verify::parallel_for(257, [&](int i) { hits[i] = 1; });
    for (int h : hits) CHECK(h == 1);

    CHECK_THROWS_AS(verify::parallel_for(64,
                                         [](int i) {
                                             if (i == 13) throw Error("boom");
                                         }),
                    Error);
}
