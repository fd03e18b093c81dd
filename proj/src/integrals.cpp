#include "superstab/integrals.hpp"

#include "superstab/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

namespace superstab {

namespace {

double tgamma_half(int d) { return std::tgamma(0.5 * d); }

// Number of worker threads for sharded runs: capped by SUPERSTAB_THREADS.
int worker_count(int shards) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("SUPERSTAB_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return std::max(1, std::min(n, shards));
}

struct OrderConstants {
    double A, B, m, n;
    double a_prime, b_prime;
    double sum_threshold;  // (A/B)^(1/(m-n)); sum above it makes the value negative
};

OrderConstants order_constants(const PotentialFamily& fam, int p) {
    const PerOrderParams& q = fam.params(p);
    const auto coeff = pairwise_sum_coefficients(p, fam.dimension());
    OrderConstants c;
    c.A = q.repulsion_amp;
    c.B = q.attraction_amp;
    c.m = q.repulsion_exp;
    c.n = q.attraction_exp;
    c.a_prime = c.A / std::pow(coeff.upper, c.m);
    c.b_prime = c.B / std::pow(coeff.lower, c.n);
    c.sum_threshold = c.B > 0.0 ? std::pow(c.A / c.B, 1.0 / (c.m - c.n)) : 0.0;
    return c;
}

struct ShardResult {
    double sum = 0.0;
    double sum_sq = 0.0;
};

}  // namespace

double ball_volume(int d, double radius) {
    if (d < 1) throw std::invalid_argument("ball_volume: dimension must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("ball_volume: radius must be positive");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) * std::pow(radius, d) /
           (d * tgamma_half(d));
}

IpEstimate attractive_integral_bound_1d(const PotentialFamily& fam, int p) {
    if (fam.dimension() != 1)
        throw std::invalid_argument("attractive_integral_bound_1d: family must be one-dimensional");
    const PerOrderParams& q = fam.params(p);
    IpEstimate est;
    est.p = p;
    est.d = 1;
    est.method = "closed-form-bound";
    if (q.attraction_amp == 0.0) {
        est.exact = Rational(0);
        return est;
    }
    // The bound integrates the majorant B'/t^n - A'/t^m over the tail region
    // t >= T with T = (A/B)^(1/(m-n)), split into the straddling-pair piece
    // (weight (p-1)(p-2), one extra nested antiderivative) and the anchored
    // piece (weight 2(p-1)). Positive denominators follow from n > p-1, m > n.
    const double m = q.repulsion_exp;
    const double n = q.attraction_exp;
    const auto coeff = pairwise_sum_coefficients(p, 1);

    const bool exponents_integral = is_integral(m) && is_integral(n);
    if (exponents_integral) {
        const unsigned gap = static_cast<unsigned>(m - n);
        const Rational ratio =
            rational_from_double(q.repulsion_amp) / rational_from_double(q.attraction_amp);
        if (auto root = exact_kth_root(ratio, gap)) {
            const long mi = static_cast<long>(m);
            const long ni = static_cast<long>(n);
            const Rational a_prime = rational_from_double(q.repulsion_amp) /
                                     rational_pow(rational_from_double(coeff.upper), mi);
            const Rational b_prime = rational_from_double(q.attraction_amp) /
                                     rational_pow(rational_from_double(coeff.lower), ni);
            const Rational tb = b_prime * rational_pow(*root, p - 1 - ni);
            const Rational ta = a_prime * rational_pow(*root, p - 1 - mi);
            const Rational straddle =
                Rational(static_cast<long>(p - 1) * (p - 2)) *
                (tb * Rational(1, ni - p + 2) * (1 + Rational(1, ni - p + 1)) -
                 ta * Rational(1, mi - p + 2) * (1 + Rational(1, mi - p + 1)));
            const Rational anchored =
                Rational(2 * static_cast<long>(p - 1)) *
                (tb / Rational(ni - p + 1) - ta / Rational(mi - p + 1));
            const Rational value = straddle + anchored;
            if (value <= 0) {
                std::ostringstream os;
                os << "attractive_integral_bound_1d: assembled bound is nonpositive for p = " << p;
                throw TranscriptionGuard(os.str());
            }
            est.exact = value;
            est.value = to_double(value);
            return est;
        }
    }

    const double threshold = std::pow(q.repulsion_amp / q.attraction_amp, 1.0 / (m - n));
    const double a_prime = q.repulsion_amp / std::pow(coeff.upper, m);
    const double b_prime = q.attraction_amp / std::pow(coeff.lower, n);
    const double tb = b_prime * std::pow(threshold, p - 1 - n);
    const double ta = a_prime * std::pow(threshold, p - 1 - m);
    const double straddle = (p - 1.0) * (p - 2.0) *
                            (tb / (n - p + 2) * (1.0 + 1.0 / (n - p + 1)) -
                             ta / (m - p + 2) * (1.0 + 1.0 / (m - p + 1)));
    const double anchored = 2.0 * (p - 1.0) * (tb / (n - p + 1) - ta / (m - p + 1));
    est.value = straddle + anchored;
    if (!(est.value > 0.0)) {
        std::ostringstream os;
        os << "attractive_integral_bound_1d: assembled bound is nonpositive for p = " << p;
        throw TranscriptionGuard(os.str());
    }
    return est;
}

double default_ball_radius(const PotentialFamily& fam, int p) {
    const OrderConstants c = order_constants(fam, p);
    if (c.B == 0.0) return std::numeric_limits<double>::infinity();
    const auto coeff = pairwise_sum_coefficients(p, fam.dimension());
    return c.sum_threshold / (2.0 * coeff.upper);
}

IpEstimate attractive_integral_bound_ball(const PotentialFamily& fam, int p, double r0) {
    const PerOrderParams& q = fam.params(p);
    const int d = fam.dimension();
    if (!(r0 > 0.0))
        throw std::invalid_argument("attractive_integral_bound_ball: r0 must be positive");
    const double n = q.attraction_exp;
    const double decay = n + (1.0 - p) * d;
    if (!(decay > 0.0))
        throw std::invalid_argument(
            "attractive_integral_bound_ball: tail does not converge (n + (1-p)d <= 0)");
    IpEstimate est;
    est.p = p;
    est.d = d;
    est.method = "ball-bound";
    if (q.attraction_amp == 0.0) return est;
    const auto coeff = pairwise_sum_coefficients(p, d);
    const double b_prime = q.attraction_amp / std::pow(coeff.lower, n);
    const double pairs = 0.5 * (p - 1.0) * (p - 2.0);  // C(p-1, 2)
    const double shell = std::pow(std::numbers::pi, 0.5 * d) /
                         (std::pow(2.0, d - 1) * d * tgamma_half(d));
    est.value = b_prime * d * (p - 1.0 + pairs) /
                (std::pow(2.0, n - p * d) * decay * std::pow(r0, decay)) *
                std::pow(shell, p - 1.0);
    return est;
}

double truncation_tail_bound(const PotentialFamily& fam, int p, double radius) {
    const OrderConstants c = order_constants(fam, p);
    const int d = fam.dimension();
    if (c.B == 0.0) return 0.0;
    if (!(radius > 0.0)) throw std::invalid_argument("truncation_tail_bound: radius must be positive");
    // On the missed region some |x_i| exceeds the radius; there the integrand
    // is at most B'/(max_j |x_j|)^n. Union bound over which point is largest:
    //   (p-1) * surface(d) * ballvol(d)^(p-2) * B' * R^{-(n-(p-1)d)} / (n-(p-1)d)
    const double decay = c.n - (p - 1.0) * d;
    const double surface = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / tgamma_half(d);
    const double unit_ball = ball_volume(d, 1.0);
    return (p - 1.0) * surface * std::pow(unit_ball, p - 2.0) * c.b_prime *
           std::pow(radius, -decay) / decay;
}

namespace {

// Radial proposal for one free point: uniform over the core ball with
// probability `core_mass`, else a Lebesgue-density ~ r^-n power tail out to
// the truncation radius. Density matched to the integrand decay keeps the
// weight ratio bounded on the sampled region.
struct RadialProposal {
    int d;
    double n;
    double core_radius;
    double trunc_radius;
    double core_mass = 0.5;
    double core_volume;
    double tail_norm;  // integral over the shell of r^-n Lebesgue density

    RadialProposal(int dim, double n_exp, double core, double trunc)
        : d(dim), n(n_exp), core_radius(core), trunc_radius(trunc) {
        core_volume = ball_volume(d, core_radius);
        const double surface = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / tgamma_half(d);
        // integral_{core}^{trunc} r^(d-1) r^-n dr * surface
        const double a = d - n;  // a < 0 under the family constraints
        tail_norm = surface * (std::pow(trunc_radius, a) - std::pow(core_radius, a)) / a;
    }

    // density w.r.t. Lebesgue measure at radius r (0 beyond truncation)
    double density(double r) const {
        if (r <= core_radius) return core_mass / core_volume;
        if (r >= trunc_radius) return 0.0;
        return (1.0 - core_mass) * std::pow(r, -n) / tail_norm;
    }

    double sample_radius(Rng& rng) const {
        if (rng.uniform() < core_mass) return core_radius * std::pow(rng.uniform(), 1.0 / d);
        const double a = d - n;
        const double lo = std::pow(core_radius, a), hi = std::pow(trunc_radius, a);
        return std::pow(lo + rng.uniform() * (hi - lo), 1.0 / a);
    }
};

void sample_direction(Rng& rng, int d, std::vector<double>& out) {
    if (d == 1) {
        out[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
        return;
    }
    // Gaussian direction via Box-Muller; renormalized.
    double norm2 = 0.0;
    do {
        for (int i = 0; i < d; i += 2) {
            double u1 = rng.uniform(), u2 = rng.uniform();
            if (u1 < 1e-300) u1 = 1e-300;
            const double r = std::sqrt(-2.0 * std::log(u1));
            out[i] = r * std::cos(2.0 * std::numbers::pi * u2);
            if (i + 1 < d) out[i + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
        }
        norm2 = 0.0;
        for (int i = 0; i < d; ++i) norm2 += out[i] * out[i];
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (int i = 0; i < d; ++i) out[i] *= inv;
}

// |V_p^-| at (0, x_2..x_p) given flat coordinates of the p-1 free points.
double negative_part_flat(const OrderConstants& c, int p, int d, const std::vector<double>& flat) {
    double s = 0.0;
    for (int i = 0; i < p - 1; ++i) {
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) {
            const double t = flat[i * d + k];
            r2 += t * t;
        }
        s += std::sqrt(r2);
        for (int j = i + 1; j < p - 1; ++j) {
            double q2 = 0.0;
            for (int k = 0; k < d; ++k) {
                const double t = flat[i * d + k] - flat[j * d + k];
                q2 += t * t;
            }
            s += std::sqrt(q2);
        }
    }
    if (s <= c.sum_threshold || s == 0.0) return 0.0;
    const double v = c.A * std::pow(s, -c.m) - c.B * std::pow(s, -c.n);
    return v < 0.0 ? -v : 0.0;
}

ShardResult run_shard(const OrderConstants& c, int p, int d, const RadialProposal& proposal,
                      std::uint64_t shard_seed, std::int64_t samples) {
    Rng rng(shard_seed);
    ShardResult acc;
    const int free_points = p - 1;
    std::vector<double> flat(static_cast<std::size_t>(free_points) * d);
    std::vector<double> dir(d);
    for (std::int64_t s = 0; s < samples; ++s) {
        double inv_density = 1.0;
        for (int i = 0; i < free_points; ++i) {
            const double r = proposal.sample_radius(rng);
            sample_direction(rng, d, dir);
            for (int k = 0; k < d; ++k) flat[i * d + k] = r * dir[k];
            inv_density /= proposal.density(r);
        }
        const double f = negative_part_flat(c, p, d, flat);
        const double w = f * inv_density;
        acc.sum += w;
        acc.sum_sq += w * w;
    }
    return acc;
}

}  // namespace

IpEstimate attractive_integral_monte_carlo(const PotentialFamily& fam, int p,
                                           const IntegrationSettings& settings) {
    if (settings.samples < 1)
        throw std::invalid_argument("attractive_integral_monte_carlo: samples must be >= 1");
    if (settings.shards < 1)
        throw std::invalid_argument("attractive_integral_monte_carlo: shards must be >= 1");
    const int d = fam.dimension();
    const OrderConstants c = order_constants(fam, p);
    IpEstimate est;
    est.p = p;
    est.d = d;
    est.method = "monte-carlo";
    if (c.B == 0.0) return est;

    // Core covers the sign-change region; the truncation radius targets a tail
    // bound three decades under the analytic value estimate (the tail is
    // folded into the error bar, not the value).
    const double core = std::max(2.0 * c.sum_threshold, 1.0);
    double trunc = settings.truncation_radius;
    if (trunc > 0.0 && trunc <= core)
        throw std::invalid_argument(
            "attractive_integral_monte_carlo: truncation radius must exceed the core radius");
    if (!(trunc > 0.0)) {
        double scale = 0.0;
        if (d == 1) {
            scale = attractive_integral_bound_1d(fam, p).value;
        } else {
            scale = attractive_integral_bound_ball(fam, p, default_ball_radius(fam, p)).value;
        }
        const double decay = c.n - (p - 1.0) * d;
        const double lead = truncation_tail_bound(fam, p, 1.0);
        trunc = std::pow(lead / (1e-3 * scale), 1.0 / decay);
        trunc = std::max(trunc, 4.0 * core);
    }

    const RadialProposal proposal(d, c.n, core, trunc);

    const int shards = settings.shards;
    std::vector<std::int64_t> shard_samples(shards, settings.samples / shards);
    for (std::int64_t r = 0; r < settings.samples % shards; ++r) ++shard_samples[r];
    std::vector<std::uint64_t> shard_seeds(shards);
    for (int i = 0; i < shards; ++i)
        shard_seeds[i] = splitmix64(settings.seed ^ (0xA5A5A5A5ull + static_cast<std::uint64_t>(i)));

    std::vector<ShardResult> results(shards);
    const int workers = worker_count(shards);
    if (workers == 1) {
        for (int i = 0; i < shards; ++i)
            results[i] = run_shard(c, p, d, proposal, shard_seeds[i], shard_samples[i]);
    } else {
        std::vector<std::future<void>> jobs;
        std::atomic<int> next{0};
        for (int w = 0; w < workers; ++w) {
            jobs.push_back(std::async(std::launch::async, [&]() {
                for (int i = next.fetch_add(1); i < shards; i = next.fetch_add(1))
                    results[i] = run_shard(c, p, d, proposal, shard_seeds[i], shard_samples[i]);
            }));
        }
        for (auto& j : jobs) j.get();
    }

    // Fixed-order reduction: shard index order, independent of scheduling.
    double sum = 0.0, sum_sq = 0.0;
    for (const ShardResult& r : results) {
        sum += r.sum;
        sum_sq += r.sum_sq;
    }
    const double n_samples = static_cast<double>(settings.samples);
    const double mean = sum / n_samples;
    const double var = std::max(0.0, sum_sq / n_samples - mean * mean);
    est.value = mean;
    est.std_error = std::sqrt(var / n_samples) + truncation_tail_bound(fam, p, trunc);
    return est;
}

double attractive_integral_per_cube(const PotentialFamily& fam, int p, double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("attractive_integral_per_cube: lambda must be positive");
    const int d = fam.dimension();
    double bound = 0.0;
    if (d == 1) {
        bound = attractive_integral_bound_1d(fam, p).value;
    } else {
        const double r0 = default_ball_radius(fam, p);
        if (!std::isfinite(r0)) return 0.0;  // purely repulsive order
        bound = attractive_integral_bound_ball(fam, p, r0).value;
    }
    return bound / std::pow(lambda, (p - 1.0) * d);
}

IpEstimate integrability_spot_check(const PotentialFamily& fam, int p, int k,
                                    const IntegrationSettings& settings) {
    if (k < 1 || k >= p) throw std::invalid_argument("integrability_spot_check: need 1 <= k < p");
    const int d = fam.dimension();
    const OrderConstants c = order_constants(fam, p);
    IpEstimate est;
    est.p = p;
    est.d = d;
    est.method = "monte-carlo";
    if (c.B == 0.0) return est;

    // Pin k points at a seeded cluster, integrate |V_p^-| over the remaining
    // p-k by the same truncated importance sampler.
    Rng pin_rng(splitmix64(settings.seed ^ 0xC0FFEEull));
    std::vector<double> pinned(static_cast<std::size_t>(k) * d);
    for (auto& v : pinned) v = pin_rng.uniform(-2.0, 2.0);

    const double core = std::max(2.0 * c.sum_threshold, 1.0) + 4.0;
    const double trunc = 32.0 * core;
    const RadialProposal proposal(d, c.n, core, trunc);
    Rng rng(settings.seed);
    std::vector<double> flat(static_cast<std::size_t>(p) * d, 0.0);
    for (int i = 0; i < k; ++i)
        for (int kk = 0; kk < d; ++kk) flat[i * d + kk] = pinned[i * d + kk];
    std::vector<double> dir(d);

    double sum = 0.0, sum_sq = 0.0;
    for (std::int64_t s = 0; s < settings.samples; ++s) {
        double inv_density = 1.0;
        for (int i = k; i < p; ++i) {
            const double r = proposal.sample_radius(rng);
            sample_direction(rng, d, dir);
            for (int kk = 0; kk < d; ++kk) flat[i * d + kk] = r * dir[kk];
            inv_density /= proposal.density(r);
        }
        double ssum = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) {
                double q2 = 0.0;
                for (int kk = 0; kk < d; ++kk) {
                    const double t = flat[i * d + kk] - flat[j * d + kk];
                    q2 += t * t;
                }
                ssum += std::sqrt(q2);
            }
        double f = 0.0;
        if (ssum > c.sum_threshold && ssum > 0.0) {
            const double v = c.A * std::pow(ssum, -c.m) - c.B * std::pow(ssum, -c.n);
            f = v < 0.0 ? -v : 0.0;
        }
        const double w = f * inv_density;
        sum += w;
        sum_sq += w * w;
    }
    const double n_samples = static_cast<double>(settings.samples);
    const double mean = sum / n_samples;
    const double var = std::max(0.0, sum_sq / n_samples - mean * mean);
    est.value = mean;
    est.std_error = std::sqrt(var / n_samples);
    return est;
}

}  // namespace superstab
