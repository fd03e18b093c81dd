#pragma once

#include "superstab/geometry.hpp"
#include "superstab/potentials.hpp"

#include <map>

namespace superstab {

// U and its per-order parts. Extended-real semantics: +inf propagates from any
// singular tuple.
struct EnergyBreakdown {
    std::map<int, double> per_order;  // p -> U^(p)
    double total = 0.0;
    std::int64_t n_points = 0;
};

struct EnergyGuards {
    std::size_t max_points = 40;
    int max_order = 6;
    bool allow_large = false;
};

// Sum of V_p over all p-subsets of gamma; 0 when |gamma| < p; +inf as soon as
// a singular tuple appears (remaining enumeration for that order is skipped).
double p_body_energy(const PotentialFamily& fam, const Configuration& gamma, int p);

// Sums p_body_energy for 2 <= p <= p_cap over the orders the family defines.
// Enumeration cost is sum of C(|gamma|, p); guarded by default.
EnergyBreakdown total_energy(const PotentialFamily& fam, const Configuration& gamma, int p_cap,
                             const EnergyGuards& guards = {});

// Right-hand side of the stability definitions:
//   A * sum over cubes of count^m_exp - B * |gamma|.
// A = 0 with m_exp = 1 degenerates to the plain-stability form -B|gamma|.
double stability_rhs(const OccupancyMap& occ, double A, double B, double m_exp);

}  // namespace superstab
