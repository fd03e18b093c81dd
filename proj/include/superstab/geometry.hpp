#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace superstab {

// A point in R^d. Coordinate count defines the dimension.
using Point = std::vector<double>;

// Finite ordered list of points. Duplicates are allowed on purpose: the
// potential family diverges at coincident tuples and the energy code reports
// +inf instead of silently deduplicating.
struct Configuration {
    int dimension = 1;
    std::vector<Point> points;

    std::size_t size() const { return points.size(); }
};

// Tiling of R^d into half-open axis-aligned cubes of rib `lambda` centered on
// the scaled integer lattice: cube r covers lambda*(r_i - 1/2) <= x_i < lambda*(r_i + 1/2).
struct PartitionSpec {
    double lambda = 1.0;
    int dimension = 1;
};

using CubeIndex = std::vector<std::int64_t>;

// Cube -> point count; only occupied cubes are stored. std::map keeps
// iteration (and hence serialization) order deterministic.
using OccupancyMap = std::map<CubeIndex, std::int64_t>;

// The unique cube containing x. A coordinate exactly on a cube boundary bins
// rightward (the left edge is the closed one): index_i = floor(x_i/lambda + 1/2).
CubeIndex cube_index(const Point& x, const PartitionSpec& spec);

OccupancyMap occupancy(const Configuration& gamma, const PartitionSpec& spec);

// Sum over occupied cubes of count^m, m >= 1. Exact products for integral m.
double occupancy_power_sum(const OccupancyMap& occ, double m);

std::int64_t total_points(const OccupancyMap& occ);

}  // namespace superstab
