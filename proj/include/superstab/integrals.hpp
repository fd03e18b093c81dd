#pragma once

#include "superstab/potentials.hpp"
#include "superstab/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace superstab {

// Value (or upper bound) of the attractive tail integral
//   I_p = integral over (R^d)^(p-1) of |min(0, V_p(0, x_2..x_p))|.
struct IpEstimate {
    int p = 2;
    int d = 1;
    double value = 0.0;
    std::string method;        // "closed-form-bound" | "ball-bound" | "monte-carlo"
    double std_error = 0.0;    // 0 for analytic methods
    std::optional<Rational> exact;  // set when the value was assembled in exact arithmetic
};

struct IntegrationSettings {
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    int shards = 8;
    double truncation_radius = 0.0;  // 0 = choose from the analytic tail target
};

// Volume of the d-ball of radius R: 2 pi^(d/2) R^d / (d Gamma(d/2)).
double ball_volume(int d, double radius);

// Closed-form upper bound for d = 1, assembled from the tail antiderivatives
// of the max-distance majorant B'/max^n - A'/max^m integrated over
// max >= (A/B)^(1/(m-n)). Exact rational arithmetic whenever the threshold is
// an exact rational root (always when m - n = 1 or A = B with integral
// exponents). Throws TranscriptionGuard if the assembled value fails its
// sanity checks.
IpEstimate attractive_integral_bound_1d(const PotentialFamily& fam, int p);

struct TranscriptionGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ball-decomposition bound for d >= 1 (requires n + (1-p)d > 0):
//   B' d (p-1 + C(p-1,2)) / (2^(n-pd) (n+(1-p)d) R0^(n+(1-p)d)) *
//   (pi^(d/2) / (2^(d-1) d Gamma(d/2)))^(p-1)
// with R0 any radius such that V_p >= 0 on tuples inside B(0, R0).
IpEstimate attractive_integral_bound_ball(const PotentialFamily& fam, int p, double r0);

// Largest radius with guaranteed nonnegativity inside the ball:
// (A/B)^(1/(m-n)) / (2 * upper_coeff).
double default_ball_radius(const PotentialFamily& fam, int p);

// Importance-sampled unbiased estimate of the tail integral, truncated at
// settings.truncation_radius with the analytic remainder bound folded into
// std_error. Deterministic given (seed, shards, samples).
IpEstimate attractive_integral_monte_carlo(const PotentialFamily& fam, int p,
                                           const IntegrationSettings& settings);

// Per-cube tail coefficient surrogate: best analytic bound divided by
// lambda^((p-1)d). This is the scaled-integral stand-in for the lattice sum;
// reports flag it as such.
double attractive_integral_per_cube(const PotentialFamily& fam, int p, double lambda);

// Finite upper bound on the integral of the majorant over the region where at
// least one sampled point lies beyond `radius` (used for the truncation tail).
double truncation_tail_bound(const PotentialFamily& fam, int p, double radius);

// Monte Carlo spot-check that the tail integral stays finite when k points of
// the tuple are pinned at a fixed spread-out cluster (intermediate
// integrability case, not certified): returns a finite estimate.
IpEstimate integrability_spot_check(const PotentialFamily& fam, int p, int k,
                                    const IntegrationSettings& settings);

}  // namespace superstab
