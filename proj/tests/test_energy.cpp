#include "superstab/energy.hpp"

#include "superstab/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace superstab;

namespace {

PotentialFamily three_body_reference() {
    return PotentialFamily(1, {{3, PerOrderParams{1.0, 1.0, 12.0, 6.0}}});
}

Configuration line_config(std::initializer_list<double> xs) {
    Configuration gamma{1, {}};
    for (double x : xs) gamma.points.push_back({x});
    return gamma;
}

// Slow oracle: direct nested loops over subsets, recomputing each value from
// scratch, independent of the library's subset generator.
double enumerate_pairs_and_triples(const PotentialFamily& fam, const Configuration& gamma) {
    const auto n = gamma.points.size();
    double sum = 0.0;
    if (fam.has_order(2)) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                std::vector<Point> pts{gamma.points[i], gamma.points[j]};
                sum += p_body_value(fam, 2, pts);
            }
    }
    if (fam.has_order(3)) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k) {
                    std::vector<Point> pts{gamma.points[i], gamma.points[j], gamma.points[k]};
                    sum += p_body_value(fam, 3, pts);
                }
    }
    return sum;
}

}  // namespace

TEST_CASE("single-subset and small-count energies") {
    const auto fam = three_body_reference();
    const auto gamma = line_config({0.0, 0.25, 0.75});
    const double expected = std::pow(1.5, -12.0) - std::pow(1.5, -6.0);
    CHECK(p_body_energy(fam, gamma, 3) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(p_body_energy(fam, line_config({0.0, 1.0}), 3) == 0.0);
    CHECK(total_energy(fam, line_config({0.3}), 3).total == 0.0);
}

TEST_CASE("four equally spaced points against the slow oracle") {
    const auto fam = PotentialFamily::worked_example();
    const auto gamma = line_config({0.0, 0.4, 0.8, 1.2});
    const auto breakdown = total_energy(fam, gamma, 3);
    const double oracle = enumerate_pairs_and_triples(fam, gamma);
    CHECK(breakdown.total == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(breakdown.per_order.at(2) + breakdown.per_order.at(3) ==
          doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("random configurations against the slow oracle") {
    const auto fam = PotentialFamily::worked_example();
    Rng rng(23);
    for (int t = 0; t < 30; ++t) {
        Configuration gamma{1, {}};
        const int n = static_cast<int>(rng.uniform_int(2, 9));
        for (int i = 0; i < n; ++i) gamma.points.push_back({rng.uniform(-2, 2)});
        const auto breakdown = total_energy(fam, gamma, 3);
        const double oracle = enumerate_pairs_and_triples(fam, gamma);
        CHECK(breakdown.total == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("singular tuples short-circuit to +inf") {
    const auto pair_family = PotentialFamily::worked_example();
    auto dup = line_config({0.2, 0.2, 0.9});
    CHECK(std::isinf(p_body_energy(pair_family, dup, 2)));
    CHECK(std::isinf(total_energy(pair_family, dup, 3).total));

    // A three-body-only family is singular only when a full triple coincides.
    const auto fam3 = three_body_reference();
    CHECK(std::isfinite(p_body_energy(fam3, dup, 3)));
    auto triple = line_config({0.2, 0.2, 0.2, 0.9});
    CHECK(std::isinf(p_body_energy(fam3, triple, 3)));
}

TEST_CASE("pair zero crossing at unit distance") {
    PotentialFamily fam(1, {{2, PerOrderParams{1.0, 1.0, 3.0, 2.0}}});
    CHECK(total_energy(fam, line_config({0.0, 1.0}), 2).total ==
          doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("enumeration guard") {
    const auto fam = three_body_reference();
    Configuration big{1, {}};
    for (int i = 0; i < 45; ++i) big.points.push_back({0.07 * i});
    CHECK_THROWS_AS(total_energy(fam, big, 3), std::invalid_argument);
    EnergyGuards relaxed;
    relaxed.allow_large = true;
    CHECK(std::isfinite(total_energy(fam, big, 3, relaxed).total));
}

TEST_CASE("stability right-hand sides") {
    CHECK(stability_rhs(OccupancyMap{{CubeIndex{0}, 3}}, 1.0, 0.0, 2.0) == 9.0);
    CHECK(stability_rhs(OccupancyMap{{CubeIndex{0}, 5}}, 0.0, 2.0, 1.0) == -10.0);
    CHECK(stability_rhs(OccupancyMap{{CubeIndex{0}, 2}, {CubeIndex{1}, 1}}, 0.5, 21.0, 2.0) ==
          doctest::Approx(-60.5));
}

TEST_CASE("energy invariances") {
    const auto fam = PotentialFamily::worked_example();
    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        Configuration gamma{1, {}};
        const int n = static_cast<int>(rng.uniform_int(3, 8));
        for (int i = 0; i < n; ++i) gamma.points.push_back({rng.uniform(-2, 2)});
        const double base = total_energy(fam, gamma, 3).total;

        Configuration shuffled = gamma;
        for (std::size_t i = shuffled.points.size() - 1; i > 0; --i)
            std::swap(shuffled.points[i],
                      shuffled.points[static_cast<std::size_t>(
                          rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
        CHECK(total_energy(fam, shuffled, 3).total == doctest::Approx(base).epsilon(1e-12));

        Configuration moved = gamma;
        const double shift = rng.uniform(-7, 7);
        for (auto& x : moved.points) x[0] += shift;
        CHECK(total_energy(fam, moved, 3).total ==
              doctest::Approx(base).epsilon(1e-11));
    }
}

TEST_CASE("distant clusters decouple") {
    const auto fam = PotentialFamily::worked_example();
    auto left = line_config({0.0, 0.3, 0.7});
    auto right = line_config({0.1, 0.5});
    const double separation = 4000.0;
    Configuration both = left;
    for (auto x : right.points) {
        x[0] += separation;
        both.points.push_back(x);
    }
    const double sum_parts = total_energy(fam, left, 3).total +
                             total_energy(fam, right, 3).total;
    CHECK(total_energy(fam, both, 3).total == doctest::Approx(sum_parts).epsilon(1e-9));
}

TEST_CASE("truncation consistency in the order cap") {
    const auto fam = PotentialFamily::worked_example();
    const auto gamma = line_config({0.0, 0.45, 0.9, 1.4, 2.0});
    const auto full = total_energy(fam, gamma, 3);
    const auto pairs_only = total_energy(fam, gamma, 2);
    CHECK(full.total == doctest::Approx(pairs_only.total + p_body_energy(fam, gamma, 3))
                            .epsilon(1e-12));
}
