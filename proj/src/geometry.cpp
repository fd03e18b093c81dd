#include "superstab/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace superstab {

CubeIndex cube_index(const Point& x, const PartitionSpec& spec) {
    if (static_cast<int>(x.size()) != spec.dimension)
        throw std::invalid_argument("cube_index: point dimension does not match partition");
    if (!(spec.lambda > 0.0)) throw std::invalid_argument("cube_index: lambda must be positive");
    CubeIndex r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw std::invalid_argument("cube_index: non-finite coordinate");
        const double t = std::floor(x[i] / spec.lambda + 0.5);
        if (std::abs(t) > 9.0e15) throw std::invalid_argument("cube_index: coordinate out of range");
        r[i] = static_cast<std::int64_t>(t);
    }
    return r;
}

OccupancyMap occupancy(const Configuration& gamma, const PartitionSpec& spec) {
    if (gamma.dimension != spec.dimension)
        throw std::invalid_argument("occupancy: configuration dimension does not match partition");
    OccupancyMap counts;
    for (const Point& x : gamma.points) ++counts[cube_index(x, spec)];
    return counts;
}

double occupancy_power_sum(const OccupancyMap& occ, double m) {
    if (!(m >= 1.0)) throw std::invalid_argument("occupancy_power_sum: exponent must be >= 1");
    double sum = 0.0;
    const bool integral = m == std::floor(m) && m <= 64.0;
    for (const auto& [cube, count] : occ) {
        const double c = static_cast<double>(count);
        if (integral) {
            double acc = 1.0;
            for (int i = 0; i < static_cast<int>(m); ++i) acc *= c;
            sum += acc;
        } else {
            sum += std::pow(c, m);
        }
    }
    return sum;
}

std::int64_t total_points(const OccupancyMap& occ) {
    std::int64_t n = 0;
    for (const auto& [cube, count] : occ) n += count;
    return n;
}

}  // namespace superstab
