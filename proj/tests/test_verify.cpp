#include "superstab/verify.hpp"

#include "superstab/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

using namespace superstab;

namespace {

PotentialFamily three_body_reference() {
    return PotentialFamily(1, {{3, PerOrderParams{1.0, 1.0, 12.0, 6.0}}});
}

// Naive re-implementation of the grouped supremum: enumerate raw candidate
// tuples recursively with no subset machinery, as an independent oracle.
double naive_group_sup(const ToyLatticeInstance& inst, const std::vector<int>& cubes,
                       const std::vector<int>& counts) {
    const int n_off = inst.candidates_per_cube();
    double best = 0.0;
    std::vector<CandidatePoint> tuple;
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t group, int placed,
                                                         int next_off) {
        if (group == cubes.size()) {
            best = std::max(best, inst.table_value(tuple));
            return;
        }
        if (placed == counts[group]) {
            rec(group + 1, 0, 0);
            return;
        }
        for (int off = next_off; off < n_off; ++off) {
            tuple.push_back({cubes[group], off});
            rec(group, placed + 1, off + 1);
            tuple.pop_back();
        }
    };
    rec(0, 0, 0);
    return best;
}

}  // namespace

TEST_CASE("table value conventions") {
    ToyLatticeInstance inst(3, 4, 5, ToyLatticeInstance::Table::Windowed);
    std::vector<CandidatePoint> single_cube{{1, 0}, {1, 1}, {1, 2}};
    CHECK(inst.table_value(single_cube) == 0.0);
    std::vector<CandidatePoint> coincident{{0, 1}, {0, 1}, {2, 0}};
    CHECK(inst.table_value(coincident) == 0.0);
    std::vector<CandidatePoint> cross{{0, 1}, {0, 2}, {2, 0}};
    const double v = inst.table_value(cross);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    std::vector<CandidatePoint> permuted{{2, 0}, {0, 2}, {0, 1}};
    CHECK(inst.table_value(permuted) == v);
}

TEST_CASE("translation-invariant table shifts with the cube pattern") {
    ToyLatticeInstance inst(3, 5, 17, ToyLatticeInstance::Table::TranslationInvariant);
    std::vector<CandidatePoint> base{{0, 1}, {1, 3}, {2, 0}};
    std::vector<CandidatePoint> shifted{{2, 1}, {3, 3}, {4, 0}};
    CHECK(inst.table_value(base) == inst.table_value(shifted));
    std::vector<CandidatePoint> wide{{0, 1}, {1, 3}, {4, 0}};
    CHECK(inst.table_value(wide) == 0.0);  // beyond the support range
}

TEST_CASE("constant cross-cube table: pair supremum is the constant") {
    ToyLatticeInstance inst(2, 3, 1, ToyLatticeInstance::Table::ConstantCrossCube);
    inst.set_constant_value(0.7);
    const std::vector<int> cubes{0, 2};
    const std::vector<int> counts{1, 1};
    CHECK(inst.group_supremum(cubes, counts) == 0.7);
    const std::vector<int> same{1, 1};
    CHECK(inst.group_supremum(same, counts) == 0.0);  // single-cube tuples are zero
}

TEST_CASE("grouped suprema match a naive enumerator") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        ToyLatticeInstance inst(3, 3, seed, ToyLatticeInstance::Table::Windowed);
        for (const auto& [cubes, counts] :
             std::vector<std::pair<std::vector<int>, std::vector<int>>>{
                 {{0, 1}, {1, 2}}, {{0, 1}, {2, 1}}, {{0, 1, 2}, {1, 1, 1}}, {{2, 0}, {2, 1}}}) {
            CHECK(inst.group_supremum(cubes, counts) ==
                  doctest::Approx(naive_group_sup(inst, cubes, counts)).epsilon(1e-15));
        }
    }
}

TEST_CASE("zero table gives zero sums everywhere") {
    ToyLatticeInstance inst(3, 3, 0, ToyLatticeInstance::Table::ConstantCrossCube);
    inst.set_constant_value(0.0);
    CHECK(inst.ordered_cube_sum(1, 2, 1) == 0.0);
    const std::vector<int> ks{2};
    CHECK(inst.distinct_cube_sum(1, ks, 1) == 0.0);
    const auto report = composition_sum_check(inst);
    CHECK(report.passed);
    CHECK(report.lhs == 0.0);
    CHECK(report.rhs == 0.0);
}

TEST_CASE("composition sums dominate: 100 seeded instances, p in {3,4}") {
    for (int p : {3, 4}) {
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const int cubes = 3 + static_cast<int>(seed % 3);  // 3..5
            const auto table = seed % 2 == 0 ? ToyLatticeInstance::Table::Windowed
                                             : ToyLatticeInstance::Table::TranslationInvariant;
            const auto inst = ToyLatticeInstance::seeded(p, cubes, seed, table);
            const auto report = composition_sum_check(inst);
            CHECK_MESSAGE(report.passed, "p=", p, " seed=", seed, " lhs=", report.lhs,
                          " rhs=", report.rhs);
        }
    }
}

TEST_CASE("single spread tuple: ordering overcount makes the dominance strict") {
    ToyLatticeInstance inst(3, 3, 0, ToyLatticeInstance::Table::SingleTuple);
    inst.set_constant_value(1.0);
    inst.set_single_tuple({{0, 0}, {1, 0}, {2, 0}});
    // At the left cube the only composition term is the distinct-set one,
    // counted once; the ordered sum sees both orders of the other two cubes.
    double lhs = 0.0;
    for (int j = 2; j <= 3; ++j) {
        if (j == 2) {
            const std::vector<int> ks{2};
            lhs += inst.distinct_cube_sum(1, ks, 0);
        } else {
            const std::vector<int> ks{1, 1};
            lhs += inst.distinct_cube_sum(1, ks, 0);
        }
    }
    const double rhs = inst.ordered_cube_sum(1, 2, 0);
    CHECK(lhs == 1.0);
    CHECK(rhs == 2.0);
    CHECK(composition_sum_check(inst).passed);
}

TEST_CASE("occupancy-weighted dominance: 100 seeded instances, j in {2,3}") {
    for (int p : {3, 4}) {
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const int cubes = 3 + static_cast<int>(seed % 3);
            const auto inst = ToyLatticeInstance::seeded(p, cubes, seed);
            std::vector<std::vector<int>> comps;
            if (p == 3) comps = {{1, 2}, {1, 1, 1}};
            else comps = {{1, 3}, {2, 2}, {1, 1, 2}};
            for (const auto& comp : comps) {
                const auto report = occupancy_weighted_sum_check(inst, comp);
                CHECK_MESSAGE(report.passed, "p=", p, " seed=", seed, " lhs=", report.lhs,
                              " rhs=", report.rhs);
            }
        }
    }
}

TEST_CASE("occupancy-weighted dominance needs the shift-invariant table") {
    // A table concentrated on one lopsided tuple (two points in cube 0, one
    // in cube 1) breaks the claim when cube 0 is the heavier one: the set
    // {0,1} contributes through the 2+1 assignment while the anchored sums
    // at cube 0 only see the 1+2 shape, which the table does not support.
    ToyLatticeInstance inst(3, 2, 0, ToyLatticeInstance::Table::SingleTuple);
    inst.set_constant_value(1.0);
    inst.set_single_tuple({{0, 0}, {0, 1}, {1, 0}});
    inst.set_occupancy({{0, 2}, {1, 1}});
    const std::vector<int> comp{1, 2};
    const auto report = occupancy_weighted_sum_check(inst, comp);
    CHECK_FALSE(report.passed);
    CHECK(report.lhs == doctest::Approx(9.0));
    CHECK(report.rhs == doctest::Approx(2.0));
}

TEST_CASE("anchored sums: swap symmetry and multiplicity counting") {
    // With a shift-invariant table and sums running over every cube within
    // range, anchoring a different group size rescales the distinct-cube sum
    // by the size multiplicities: each translation class of a placement is
    // counted once per group of the anchored size. Swapping sizes of equal
    // multiplicity is therefore an exact symmetry; a repeated size picks up
    // the exact count ratio.
    for (std::uint64_t seed : {3ull, 8ull, 21ull}) {
        ToyLatticeInstance inst(4, 5, seed, ToyLatticeInstance::Table::TranslationInvariant);
        const int delta = 2;

        const std::vector<int> c{3};  // (1 | {3}) vs (3 | {1}): multiplicities 1 and 1
        const std::vector<int> d{1};
        CHECK(inst.distinct_cube_sum(1, c, delta) ==
              doctest::Approx(inst.distinct_cube_sum(3, d, delta)).epsilon(1e-12));

        // (1 | {1,2}) anchors one of two size-1 groups; (2 | {1,1}) anchors
        // the single size-2 group. The sums differ by exactly that 2:1 count.
        const std::vector<int> a{1, 2};
        const std::vector<int> b{1, 1};
        CHECK(inst.distinct_cube_sum(1, a, delta) ==
              doctest::Approx(2.0 * inst.distinct_cube_sum(2, b, delta)).epsilon(1e-12));
    }

    // Three-body case: (1 | {2}) vs (2 | {1}), multiplicities 1 and 1.
    for (std::uint64_t seed : {5ull, 13ull}) {
        ToyLatticeInstance inst(3, 5, seed, ToyLatticeInstance::Table::TranslationInvariant);
        const std::vector<int> two{2};
        const std::vector<int> one{1};
        CHECK(inst.distinct_cube_sum(1, two, 2) ==
              doctest::Approx(inst.distinct_cube_sum(2, one, 2)).epsilon(1e-12));
    }
}

TEST_CASE("energy floor for the reference family") {
    const auto fam = three_body_reference();
    const double lambda = 0.29;

    // Fewer points than the order: the energy is zero, the floor nonpositive.
    Configuration tiny{1, {{0.1}, {0.4}}};
    const auto small = energy_floor_check(fam, tiny, 3, lambda);
    CHECK(small.passed);
    CHECK(small.lhs == 0.0);
    CHECK(small.rhs <= 0.0);

    // Ten points clustered inside one cube.
    Configuration cluster{1, {}};
    Rng crng(55);
    for (int i = 0; i < 10; ++i) cluster.points.push_back({0.1 + 0.028 * crng.uniform()});
    CHECK(energy_floor_check(fam, cluster, 3, lambda).passed);

    // Seeded random configurations.
    Rng rng(123);
    for (int t = 0; t < 200; ++t) {
        Configuration gamma{1, {}};
        const int n = static_cast<int>(rng.uniform_int(2, 20));
        const double side = rng.uniform(0.3, 6.0);
        for (int i = 0; i < n; ++i) gamma.points.push_back({rng.uniform(0.0, side)});
        const auto report = energy_floor_check(fam, gamma, 3, lambda);
        CHECK_MESSAGE(report.passed, "t=", t, " lhs=", report.lhs, " rhs=", report.rhs);
    }
}

TEST_CASE("power-mean chain") {
    const std::vector<double> a{2.0, 3.0};
    const std::vector<int> m{1, 1};
    const auto report = power_mean_chain_check(a, m);
    CHECK(report.passed);
    CHECK(report.worst_margin >= 0.0);
    // 2*3 = 6 <= (2^2+3^2)/2 = 6.5 <= 13.

    const std::vector<Rational> eq{Rational(3, 2), Rational(3, 2), Rational(3, 2)};
    const std::vector<int> w{2, 1, 3};
    const auto exact = power_mean_chain_check_exact(eq, w);
    CHECK(exact.passed);
    CHECK(exact.first_tight);

    const std::vector<Rational> neq{Rational(3, 2), Rational(5, 2)};
    const std::vector<int> w2{1, 2};
    const auto exact2 = power_mean_chain_check_exact(neq, w2);
    CHECK(exact2.passed);
    CHECK_FALSE(exact2.first_tight);

    Rng rng(77);
    for (int t = 0; t < 1000; ++t) {
        const int j = static_cast<int>(rng.uniform_int(1, 5));
        std::vector<double> av(j);
        std::vector<int> mv(j);
        for (int i = 0; i < j; ++i) {
            av[i] = rng.uniform(1e-3, 10.0);
            mv[i] = static_cast<int>(rng.uniform_int(1, 6));
        }
        CHECK(power_mean_chain_check(av, mv).passed);
    }
}

TEST_CASE("binomial bounds, exhaustively to 30") {
    CHECK(binomial_bounds_check(30).passed);
    // Hand case n = 5, k = 2: 25/4 <= 10 <= 25/2.
    CHECK(binomial_bounds_check(5).passed);
}

TEST_CASE("falsifier finds nothing against certified constants") {
    const auto fam = PotentialFamily::worked_example();
    const auto cert = certify(fam, 0.29, 3, 1e-6);
    REQUIRE(cert.verdict == Verdict::Superstable);
    const auto report =
        superstability_falsifier(fam, cert.A2, cert.B, 0.29, 2.0, 500, 2025);
    CHECK(report.passed);
    CHECK(report.worst_margin >= 0.0);
}

TEST_CASE("falsifier catches deliberately corrupted constants") {
    const auto fam = PotentialFamily::worked_example();
    const auto cert = certify(fam, 0.29, 3, 1e-6);
    // Dropping B to zero while attractive tails exist must be caught.
    const auto report = superstability_falsifier(fam, cert.A2, 0.0, 0.29, 2.0, 2000, 2025);
    CHECK_FALSE(report.passed);
    CHECK(report.lhs < report.rhs);
    CHECK_FALSE(report.witness.empty());
}
