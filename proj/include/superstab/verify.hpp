#pragma once

#include "superstab/criteria.hpp"
#include "superstab/energy.hpp"
#include "superstab/potentials.hpp"
#include "superstab/rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace superstab {

struct ViolationReport {
    std::uint64_t seed = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string witness;  // description of the worst/violating case
    bool passed = true;
    double worst_margin = 0.0;  // slack of the binding comparison (>= 0 iff passed)
};

// A candidate point inside a unit-rib cube lattice on the line: cube index
// plus an index into the fixed per-cube offset table.
struct CandidatePoint {
    int cube = 0;
    int offset = 0;

    friend auto operator<=>(const CandidatePoint&, const CandidatePoint&) = default;
};

// Finite surrogate for the cube-wise suprema of an attractive-part magnitude.
// A tabulated symmetric function W stands in for |V_p^-| over a d = 1 lattice
// of unit cubes; candidate points per cube make every supremum an exact finite
// maximum. W is zero on tuples confined to one cube and on tuples with
// coincident points.
//
// Two table flavors:
//  - Windowed: W is a seeded hash of the candidate multiset; defined only for
//    cubes 0..L-1. Enough for checks that hold for arbitrary tables.
//  - TranslationInvariant: W depends only on the cube-shape of the tuple
//    (indices shifted so the leftmost cube is 0) and vanishes when the tuple
//    spans more than `range` cubes. Checks that rely on shifting cube
//    patterns around need this flavor; the windowed table admits
//    counterexamples (see tests).
class ToyLatticeInstance {
public:
    enum class Table { Windowed, TranslationInvariant, ConstantCrossCube, SingleTuple };

    ToyLatticeInstance(int p, int num_cubes, std::uint64_t seed,
                       Table table = Table::TranslationInvariant, int range = 2);

    static ToyLatticeInstance seeded(int p, int num_cubes, std::uint64_t seed,
                                     Table table = Table::TranslationInvariant);

    int p() const { return p_; }
    int num_cubes() const { return num_cubes_; }
    int range() const { return range_; }
    std::uint64_t seed() const { return seed_; }
    Table table() const { return table_; }
    int candidates_per_cube() const { return static_cast<int>(offsets_.size()); }

    void set_constant_value(double v) { constant_value_ = v; }
    void set_single_tuple(std::vector<CandidatePoint> tuple);
    void set_occupancy(std::map<int, std::int64_t> occ) { occupancy_ = std::move(occ); }
    const std::map<int, std::int64_t>& occupancy() const { return occupancy_; }

    // W on a multiset of candidate points (order irrelevant).
    double table_value(std::span<const CandidatePoint> tuple) const;

    // Supremum over per-cube selections for a grouped placement: counts[i]
    // distinct candidates drawn from cube cubes[i]; selections of different
    // groups are independent even when cubes repeat. (Exact maximum.)
    double group_supremum(std::span<const int> cubes, std::span<const int> counts) const;

    // Sum over ordered (repetition allowed) m-tuples of cubes of the grouped
    // supremum with k points in `delta` and one point in each tuple cube.
    double ordered_cube_sum(int k, int m, int delta) const;

    // Sum over unordered sets of distinct cubes (all different from `delta`)
    // and over assignments of the group sizes `ks` to those cubes. Each
    // distinct assignment of the multiset {ks} counts exactly once:
    // permutations exchanging equal group sizes do not create new terms.
    double distinct_cube_sum(int k, std::span<const int> ks, int delta) const;

    // Cubes over which lattice sums run, centered near `delta`: the windowed
    // table owns cubes 0..L-1 only; the translation-invariant table extends
    // to every cube within `range` of delta (terms vanish beyond).
    std::vector<int> cube_domain(int delta) const;

private:
    int p_;
    int num_cubes_;
    int range_;
    std::uint64_t seed_;
    Table table_;
    std::vector<double> offsets_;
    double constant_value_ = 1.0;
    std::vector<CandidatePoint> single_tuple_;
    std::map<int, std::int64_t> occupancy_;
};

// Composition-sum dominance: the sum over all nondecreasing compositions
// (k1 <= ... <= kj, sum = p, 2 <= j <= p) of the distinct-cube sums anchored
// at each cube is dominated by the ordered one-point-per-cube sum at that
// cube. Holds for arbitrary tables.
ViolationReport composition_sum_check(const ToyLatticeInstance& inst);

// Occupancy-weighted dominance for a chosen composition: the occupancy-power
// weighted sum over distinct occupied cube sets is at most j times the
// anchored distinct-cube sums weighted by per-cube occupancy powers. Requires
// a translation-invariant table.
ViolationReport occupancy_weighted_sum_check(const ToyLatticeInstance& inst,
                                             std::span<const int> composition);

// Energy floor for a single order: the enumerated p-body energy dominates
//   sum over cubes with count >= p of count^p (vpp_lower/p^p - p*ip) - p*ip*sum_k k^(p-1) |gamma|
// with the module surrogates for vpp_lower and ip.
ViolationReport energy_floor_check(const PotentialFamily& fam, const Configuration& gamma, int p,
                                   double lambda);

// Weighted power-mean chain: prod a_i^{m_i} <= (1/M) sum m_i a_i^M <= sum a_i^M
// with M = sum m_i. Double version with absolute tolerance 1e-9.
ViolationReport power_mean_chain_check(std::span<const double> a, std::span<const int> m);

// Exact-rational version; also reports whether the first inequality is tight.
struct PowerMeanExactResult {
    bool passed = false;
    bool first_tight = false;
};
PowerMeanExactResult power_mean_chain_check_exact(std::span<const Rational> a,
                                                  std::span<const int> m);

// Exhaustively verifies n^k/k^k <= C(n,k) <= n^k/k! for 1 <= k <= n <= n_max
// in exact integer arithmetic.
ViolationReport binomial_bounds_check(int n_max);

// Randomized search for a violation of U(gamma) >= A * sum count^m_exp - B*|gamma|
// over seeded configuration shapes: uniform boxes, single-cube clusters
// (sizes 2..30), two-cluster dumbbells and regular grids. Violations are
// reported, never thrown.
ViolationReport superstability_falsifier(const PotentialFamily& fam, double A, double B,
                                         double lambda, double m_exp, int trials,
                                         std::uint64_t seed);

}  // namespace superstab
