#pragma once

#include "superstab/integrals.hpp"
#include "superstab/potentials.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace superstab {

enum class Verdict { Stable, Superstable, StrongSuperstable, Inconclusive };

std::string to_string(Verdict v);

struct PerOrderMargin {
    int p = 3;
    double vpp_lower = 0.0;   // in-cube lower bound on the p-body minimum
    double ip_lattice = 0.0;  // per-cube tail coefficient surrogate
    double margin = 0.0;      // vpp_lower / p^p - p * ip_lattice
};

struct SeriesResult {
    std::vector<double> terms;  // p^(p+1) * ip_lattice for 3 <= p <= p_cap
    double sum = 0.0;
    bool tail_flag = false;  // last term < tail_tol * partial sum and terms decreasing
};

// Constants certifying the pair part: A2 > 0 is required for a superstable
// verdict. B2 = 2*ip_lattice + A2; the +A2 absorbs singleton cubes when the
// occupancy square sum is extended from multiply-occupied cubes to all cubes.
struct PairConstants {
    double A2 = 0.0;
    double B2 = 0.0;
    double lambda = 0.0;
};

struct PairHypothesis {
    Verdict declared = Verdict::Superstable;
    double m_exp = 2.0;  // > 2 for a strong-superstable declaration
    double A2 = 0.0;
    double B2 = 0.0;
};

struct ConditionReport {
    double lambda = 0.0;
    double lambda_a3 = 0.0;
    std::vector<PerOrderMargin> per_p;
    std::vector<double> series_terms;
    double series_sum = 0.0;
    bool tail_flag = false;
    double B = 0.0;
    double A2 = 0.0;
    double B2 = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;  // human-readable reason when inconclusive
};

// Margin of the per-order sufficient condition at rib lambda:
//   in_cube_lower_bound / p^p - p * per-cube tail coefficient.
// Requires p > 2 and lambda <= max_repulsion_rib.
double cube_condition_margin(const PotentialFamily& fam, int p, double lambda);

// Partial sum of p^(p+1) * per-cube tail coefficients for 3 <= p <= p_cap.
SeriesResult tail_series(const PotentialFamily& fam, double lambda, int p_cap, double tail_tol);

// Pair-part constants from the p = 2 instance of the energy floor. Throws
// PairNotCertified when A2 <= 0.
PairConstants pair_constants(const PotentialFamily& fam, double lambda);

struct PairNotCertified : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Largest rib <= max_repulsion_rib at which every per-order margin is
// nonnegative and the pair part certifies; bisection to bracket width tol.
double max_admissible_rib(const PotentialFamily& fam, int p_cap, double tol);

// Bisection root of a decreasing-feasibility predicate over (0, hi]; exposed
// for the worked-example bracket.
double bisect_largest_feasible(double hi, double tol, const std::function<bool(double)>& feasible);

// Assembles margins, the series, B = B2 + series sum, and the verdict. The
// verdict mirrors the pair part's class when every condition passes; a
// declared pair hypothesis overrides the derived constants.
ConditionReport certify(const PotentialFamily& fam, double lambda, int p_cap, double tail_tol,
                        const std::optional<PairHypothesis>& hypothesis = std::nullopt);

}  // namespace superstab
