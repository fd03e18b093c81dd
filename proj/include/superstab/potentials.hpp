#pragma once

#include "superstab/geometry.hpp"
#include "superstab/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace superstab {

// One order of the inverse-power-sum family:
//   V_p(x_1..x_p) = A / S^m - B / S^n,   S = sum of pairwise Euclidean distances.
// Constraints: A > 0, B >= 0, m > n, n > (p-1)*d.
struct PerOrderParams {
    double repulsion_amp = 1.0;    // A
    double attraction_amp = 0.0;   // B
    double repulsion_exp = 2.0;    // m
    double attraction_exp = 1.0;   // n
};

// Bounds relating the pairwise-distance sum to the largest pairwise distance:
//   lower * max <= S <= upper * max.
// lower = p-1 in every dimension. upper = (p - floor(p/2)) * floor(p/2) on the
// line (achieved by a two-point split) and p(p-1)/2 otherwise.
struct PairwiseSumCoefficients {
    double lower = 1.0;
    double upper = 1.0;
};

PairwiseSumCoefficients pairwise_sum_coefficients(int p, int dimension);

class PotentialFamily {
public:
    PotentialFamily(int dimension, std::map<int, PerOrderParams> per_order);

    // Family generated from the closed-form catalog: n(p) = p, m(p) = p + 1,
    // A_p = upper_coeff(p,1)^(p+1), B_p = half the admissible cap
    // p^((p-4)/2 - eps) / 2^((2p-1)/2). One-dimensional by construction.
    static PotentialFamily reference_catalog(double epsilon, int p_max);

    // Built-in d=1 reference example: the three-body order with
    // A = B = 1, m = 12, n = 6, plus the catalog pair order (eps = 0.1).
    static PotentialFamily worked_example();

    int dimension() const { return dimension_; }
    int max_order() const { return per_order_.empty() ? 1 : per_order_.rbegin()->first; }
    bool has_order(int p) const { return per_order_.count(p) != 0; }
    const PerOrderParams& params(int p) const;
    const std::map<int, PerOrderParams>& orders() const { return per_order_; }

private:
    int dimension_;
    std::map<int, PerOrderParams> per_order_;
};

// Sum of Euclidean pairwise distances of p >= 2 points; zero iff all coincide.
double pairwise_distance_sum(std::span<const Point> points);

// V_p at the given tuple; +inf when all points coincide (A > 0 there).
double p_body_value(const PotentialFamily& fam, int p, std::span<const Point> points);

// min(0, V_p) and max(0, V_p).
double p_body_negative_part(const PotentialFamily& fam, int p, std::span<const Point> points);
double p_body_positive_part(const PotentialFamily& fam, int p, std::span<const Point> points);

// Lower bound on V_p over any p-tuple confined to one cube of rib lambda:
//   A'/D^m - B'/D^n with D = lambda*sqrt(d), A' = A/upper^m, B' = B/(p-1)^n.
double in_cube_lower_bound(const PotentialFamily& fam, int p, double lambda);

// Exact-rational variant (d = 1, integral exponents required).
Rational in_cube_lower_bound_exact(const PotentialFamily& fam, int p, const Rational& lambda);

// Largest rib such that every stored order is nonnegative on tuples confined
// to a single cube: min over p of (A/B)^(1/(m-n)) / (upper_coeff * sqrt(d)).
// Orders with B = 0 impose no constraint; +inf when nothing constrains.
double max_repulsion_rib(const PotentialFamily& fam);

struct InvarianceReport {
    bool passed = true;
    std::string first_violation;  // empty when passed
    std::uint64_t seed = 0;
    int trials = 0;
};

// Seeded spot-check of the structural assumptions: permutation symmetry and
// translation invariance to relative 1e-12, and nonnegativity on tuples drawn
// inside one cube of rib min(lambda, max_repulsion_rib).
InvarianceReport invariance_spot_check(const PotentialFamily& fam, int p, int trials,
                                       std::uint64_t seed,
                                       std::optional<double> lambda = std::nullopt);

}  // namespace superstab
