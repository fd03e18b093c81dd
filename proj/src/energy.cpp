#include "superstab/energy.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace superstab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lexicographic enumeration of p-subsets by index; `body` may stop the walk
// early by returning false.
template <typename Body>
void for_each_subset(std::size_t n, int p, Body&& body) {
    std::vector<std::size_t> idx(p);
    for (int i = 0; i < p; ++i) idx[i] = static_cast<std::size_t>(i);
    if (static_cast<std::size_t>(p) > n) return;
    while (true) {
        if (!body(idx)) return;
        int i = p - 1;
        while (i >= 0 && idx[i] == n - static_cast<std::size_t>(p - i)) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

double p_body_energy(const PotentialFamily& fam, const Configuration& gamma, int p) {
    if (p < 2) throw std::invalid_argument("p_body_energy: p must be >= 2");
    if (!fam.has_order(p)) return 0.0;
    if (gamma.size() < static_cast<std::size_t>(p)) return 0.0;
    double sum = 0.0;
    bool singular = false;
    std::vector<Point> tuple(p);
    for_each_subset(gamma.size(), p, [&](const std::vector<std::size_t>& idx) {
        for (int i = 0; i < p; ++i) tuple[static_cast<std::size_t>(i)] = gamma.points[idx[i]];
        const double v = p_body_value(fam, p, tuple);
        if (std::isinf(v)) {
            singular = true;
            return false;  // +inf swamps the rest of this order
        }
        sum += v;
        return true;
    });
    return singular ? kInf : sum;
}

EnergyBreakdown total_energy(const PotentialFamily& fam, const Configuration& gamma, int p_cap,
                             const EnergyGuards& guards) {
    if (p_cap < 2) throw std::invalid_argument("total_energy: p_cap must be >= 2");
    if (p_cap > fam.max_order()) p_cap = fam.max_order();
    if (!guards.allow_large &&
        (gamma.size() > guards.max_points || p_cap > guards.max_order)) {
        std::ostringstream os;
        os << "total_energy: enumeration guard exceeded (|gamma| = " << gamma.size()
           << ", p_cap = " << p_cap << "); pass allow_large to override";
        throw std::invalid_argument(os.str());
    }
    EnergyBreakdown out;
    out.n_points = static_cast<std::int64_t>(gamma.size());
    bool singular = false;
    for (const auto& [p, params] : fam.orders()) {
        if (p > p_cap) break;
        const double u = p_body_energy(fam, gamma, p);
        out.per_order[p] = u;
        if (std::isinf(u)) singular = true;
    }
    if (singular) {
        out.total = kInf;
    } else {
        out.total = 0.0;
        for (const auto& [p, u] : out.per_order) out.total += u;
    }
    return out;
}

double stability_rhs(const OccupancyMap& occ, double A, double B, double m_exp) {
    if (!(A >= 0.0)) throw std::invalid_argument("stability_rhs: A must be nonnegative");
    if (!(B >= 0.0)) throw std::invalid_argument("stability_rhs: B must be nonnegative");
    if (!(m_exp >= 1.0)) throw std::invalid_argument("stability_rhs: m_exp must be >= 1");
    const double power_sum = A == 0.0 ? 0.0 : occupancy_power_sum(occ, m_exp);
    return A * power_sum - B * static_cast<double>(total_points(occ));
}

}  // namespace superstab
