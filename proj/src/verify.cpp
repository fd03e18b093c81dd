#include "superstab/verify.hpp"

#include "superstab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace superstab {

namespace {

constexpr double kTol = 1e-9;

std::string describe_tuple(std::span<const CandidatePoint> tuple) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < tuple.size(); ++i)
        os << (i ? " " : "") << tuple[i].cube << ":" << tuple[i].offset;
    os << "]";
    return os.str();
}

// Nondecreasing compositions of p into exactly j parts, each >= 1.
std::vector<std::vector<int>> partitions_into(int p, int j) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int, int)> rec = [&](int remaining, int parts_left, int min_part) {
        if (parts_left == 0) {
            if (remaining == 0) out.push_back(cur);
            return;
        }
        for (int k = min_part; k * parts_left <= remaining; ++k) {
            cur.push_back(k);
            rec(remaining - k, parts_left - 1, k);
            cur.pop_back();
        }
    };
    rec(p, j, 1);
    return out;
}

// All k-subsets of {0..n-1}.
std::vector<std::vector<int>> index_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k > n || k < 0) return out;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        out.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

}  // namespace

ToyLatticeInstance::ToyLatticeInstance(int p, int num_cubes, std::uint64_t seed, Table table,
                                       int range)
    : p_(p), num_cubes_(num_cubes), range_(range), seed_(seed), table_(table) {
    if (p_ < 2 || p_ > 6) throw std::invalid_argument("ToyLatticeInstance: p must be in [2, 6]");
    if (num_cubes_ < 2 || num_cubes_ > 8)
        throw std::invalid_argument("ToyLatticeInstance: lattice must have 2..8 cubes");
    if (range_ < 1) throw std::invalid_argument("ToyLatticeInstance: range must be >= 1");
    // Four asymmetric candidate offsets per cube keep every supremum over at
    // most p <= 4 in-cube picks nontrivial without symmetry degeneracies.
    offsets_ = {-0.35, -0.12, 0.1, 0.33};
}

ToyLatticeInstance ToyLatticeInstance::seeded(int p, int num_cubes, std::uint64_t seed,
                                              Table table) {
    ToyLatticeInstance inst(p, num_cubes, seed, table);
    // Seeded occupancies 0..3 per cube with at least two occupied cubes.
    Rng rng(splitmix64(seed ^ 0x0CCull));
    std::map<int, std::int64_t> occ;
    int occupied = 0;
    for (int c = 0; c < num_cubes; ++c) {
        const auto k = rng.uniform_int(0, 3);
        if (k > 0) {
            occ[c] = k;
            ++occupied;
        }
    }
    if (occupied < 2) {
        occ[0] = 2;
        occ[num_cubes - 1] = 1;
    }
    inst.set_occupancy(std::move(occ));
    return inst;
}

void ToyLatticeInstance::set_single_tuple(std::vector<CandidatePoint> tuple) {
    std::sort(tuple.begin(), tuple.end());
    single_tuple_ = std::move(tuple);
}

double ToyLatticeInstance::table_value(std::span<const CandidatePoint> tuple) const {
    std::vector<CandidatePoint> key(tuple.begin(), tuple.end());
    std::sort(key.begin(), key.end());

    // Coincident picks and single-cube tuples are pinned to zero.
    for (std::size_t i = 1; i < key.size(); ++i)
        if (key[i] == key[i - 1]) return 0.0;
    bool single_cube = true;
    for (const CandidatePoint& c : key)
        if (c.cube != key.front().cube) single_cube = false;
    if (single_cube) return 0.0;

    switch (table_) {
        case Table::ConstantCrossCube:
            return constant_value_;
        case Table::SingleTuple:
            return key == single_tuple_ ? constant_value_ : 0.0;
        case Table::Windowed: {
            for (const CandidatePoint& c : key)
                if (c.cube < 0 || c.cube >= num_cubes_) return 0.0;
            std::uint64_t h = splitmix64(seed_ ^ 0x57ull);
            for (const CandidatePoint& c : key) {
                h = hash_combine(h, static_cast<std::uint64_t>(c.cube + 64));
                h = hash_combine(h, static_cast<std::uint64_t>(c.offset));
            }
            return static_cast<double>(h >> 11) * 0x1.0p-53;
        }
        case Table::TranslationInvariant: {
            // Value depends only on the shifted cube pattern, so the table is
            // invariant under whole-tuple cube translations; support is capped
            // at `range` cubes of spread so lattice sums stay finite.
            int min_cube = key.front().cube, max_cube = key.front().cube;
            for (const CandidatePoint& c : key) {
                min_cube = std::min(min_cube, c.cube);
                max_cube = std::max(max_cube, c.cube);
            }
            if (max_cube - min_cube > range_) return 0.0;
            std::uint64_t h = splitmix64(seed_ ^ 0x71ull);
            for (const CandidatePoint& c : key) {
                h = hash_combine(h, static_cast<std::uint64_t>(c.cube - min_cube));
                h = hash_combine(h, static_cast<std::uint64_t>(c.offset));
            }
            return static_cast<double>(h >> 11) * 0x1.0p-53;
        }
    }
    return 0.0;
}

double ToyLatticeInstance::group_supremum(std::span<const int> cubes,
                                          std::span<const int> counts) const {
    if (cubes.size() != counts.size())
        throw std::invalid_argument("group_supremum: cubes/counts size mismatch");
    int total = 0;
    for (int k : counts) {
        if (k < 1) throw std::invalid_argument("group_supremum: composition parts must be >= 1");
        total += k;
    }
    if (total != p_) throw std::invalid_argument("group_supremum: composition must sum to p");

    const int n_off = candidates_per_cube();
    double best = 0.0;
    std::vector<CandidatePoint> tuple;
    tuple.reserve(static_cast<std::size_t>(p_));
    std::function<void(std::size_t)> rec = [&](std::size_t g) {
        if (g == cubes.size()) {
            best = std::max(best, table_value(tuple));
            return;
        }
        for (const auto& subset : index_subsets(n_off, counts[g])) {
            for (int off : subset) tuple.push_back({cubes[g], off});
            rec(g + 1);
            tuple.resize(tuple.size() - subset.size());
        }
    };
    rec(0);
    return best;
}

std::vector<int> ToyLatticeInstance::cube_domain(int delta) const {
    std::vector<int> cubes;
    if (table_ == Table::TranslationInvariant) {
        for (int c = delta - range_; c <= delta + range_; ++c) cubes.push_back(c);
    } else {
        for (int c = 0; c < num_cubes_; ++c) cubes.push_back(c);
    }
    return cubes;
}

double ToyLatticeInstance::ordered_cube_sum(int k, int m, int delta) const {
    if (k < 1 || m < 0 || k + m != p_)
        throw std::invalid_argument("ordered_cube_sum: need k >= 1, m >= 0, k + m = p");
    const std::vector<int> domain = cube_domain(delta);
    std::vector<int> cubes(static_cast<std::size_t>(m) + 1, delta);
    std::vector<int> counts(static_cast<std::size_t>(m) + 1, 1);
    counts[0] = k;
    double sum = 0.0;
    std::function<void(int)> rec = [&](int slot) {
        if (slot == m) {
            sum += group_supremum(cubes, counts);
            return;
        }
        for (int c : domain) {
            cubes[static_cast<std::size_t>(slot) + 1] = c;
            rec(slot + 1);
        }
    };
    rec(0);
    return sum;
}

double ToyLatticeInstance::distinct_cube_sum(int k, std::span<const int> ks, int delta) const {
    int total = k;
    for (int v : ks) total += v;
    if (total != p_) throw std::invalid_argument("distinct_cube_sum: composition must sum to p");
    const int m = static_cast<int>(ks.size());
    std::vector<int> others;
    for (int c : cube_domain(delta))
        if (c != delta) others.push_back(c);

    // Distinct assignments only: for each unordered set of m distinct cubes,
    // walk the distinct permutations of the size multiset {ks}. Equal sizes
    // assigned to the same cubes in a different order are the same placement
    // and are counted once (std::next_permutation on the sorted multiset).
    std::vector<int> sizes(ks.begin(), ks.end());
    std::sort(sizes.begin(), sizes.end());
    double sum = 0.0;
    std::vector<int> cubes(static_cast<std::size_t>(m) + 1, delta);
    std::vector<int> counts(static_cast<std::size_t>(m) + 1, 1);
    counts[0] = k;
    for (const auto& pick : index_subsets(static_cast<int>(others.size()), m)) {
        for (int i = 0; i < m; ++i) cubes[static_cast<std::size_t>(i) + 1] = others[pick[i]];
        std::vector<int> perm = sizes;
        do {
            for (int i = 0; i < m; ++i) counts[static_cast<std::size_t>(i) + 1] = perm[i];
            sum += group_supremum(cubes, counts);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return sum;
}

ViolationReport composition_sum_check(const ToyLatticeInstance& inst) {
    ViolationReport report;
    report.seed = inst.seed();
    report.worst_margin = std::numeric_limits<double>::infinity();
    const int p = inst.p();
    for (int delta = 0; delta < inst.num_cubes(); ++delta) {
        double lhs = 0.0;
        for (int j = 2; j <= p; ++j) {
            for (const auto& comp : partitions_into(p, j)) {
                const std::vector<int> rest(comp.begin() + 1, comp.end());
                lhs += inst.distinct_cube_sum(comp[0], rest, delta);
            }
        }
        const double rhs = inst.ordered_cube_sum(1, p - 1, delta);
        const double margin = rhs - lhs;
        if (margin < report.worst_margin) {
            report.worst_margin = margin;
            report.lhs = lhs;
            report.rhs = rhs;
            std::ostringstream os;
            os << "cube " << delta;
            report.witness = os.str();
        }
    }
    report.passed = report.worst_margin >= -kTol;
    return report;
}

ViolationReport occupancy_weighted_sum_check(const ToyLatticeInstance& inst,
                                             std::span<const int> composition) {
    ViolationReport report;
    report.seed = inst.seed();
    const int p = inst.p();
    const int j = static_cast<int>(composition.size());
    int total = 0;
    for (int v : composition) total += v;
    if (total != p)
        throw std::invalid_argument("occupancy_weighted_sum_check: composition must sum to p");

    const auto& occ = inst.occupancy();
    std::vector<int> occupied;
    for (const auto& [cube, count] : occ)
        if (count > 0) occupied.push_back(cube);

    auto occ_pow = [&](int cube) {
        const auto it = occ.find(cube);
        const double c = it == occ.end() ? 0.0 : static_cast<double>(it->second);
        double acc = 1.0;
        for (int i = 0; i < p; ++i) acc *= c;
        return acc;
    };

    // Left side: unordered sets of j distinct occupied cubes, distinct
    // assignments of the composition multiset, weighted by the summed
    // occupancy powers of the chosen cubes.
    std::vector<int> sizes(composition.begin(), composition.end());
    std::sort(sizes.begin(), sizes.end());
    double lhs = 0.0;
    std::vector<int> cubes(static_cast<std::size_t>(j));
    std::vector<int> counts(static_cast<std::size_t>(j));
    for (const auto& pick : index_subsets(static_cast<int>(occupied.size()), j)) {
        double weight = 0.0;
        for (int i = 0; i < j; ++i) {
            cubes[static_cast<std::size_t>(i)] = occupied[pick[i]];
            weight += occ_pow(occupied[pick[i]]);
        }
        std::vector<int> perm = sizes;
        double isum = 0.0;
        do {
            for (int i = 0; i < j; ++i) counts[static_cast<std::size_t>(i)] = perm[i];
            isum += inst.group_supremum(cubes, counts);
        } while (std::next_permutation(perm.begin(), perm.end()));
        lhs += isum * weight;
    }

    // Right side: j * sum over occupied cubes of occupancy^p times the
    // anchored distinct-cube sum.
    const std::vector<int> rest(sizes.begin() + 1, sizes.end());
    double rhs = 0.0;
    for (int cube : occupied)
        rhs += occ_pow(cube) * inst.distinct_cube_sum(sizes[0], rest, cube);
    rhs *= j;

    report.lhs = lhs;
    report.rhs = rhs;
    report.worst_margin = rhs - lhs;
    report.passed = report.worst_margin >= -kTol;
    std::ostringstream os;
    os << "composition (";
    for (int i = 0; i < j; ++i) os << (i ? "," : "") << sizes[static_cast<std::size_t>(i)];
    os << ")";
    report.witness = os.str();
    return report;
}

ViolationReport energy_floor_check(const PotentialFamily& fam, const Configuration& gamma, int p,
                                   double lambda) {
    ViolationReport report;
    const double lhs = p_body_energy(fam, gamma, p);
    const double vpp = in_cube_lower_bound(fam, p, lambda);
    const double ip = attractive_integral_per_cube(fam, p, lambda);
    const double pp = std::pow(static_cast<double>(p), p);
    const OccupancyMap occ = occupancy(gamma, PartitionSpec{lambda, fam.dimension()});
    double cube_part = 0.0;
    for (const auto& [cube, count] : occ) {
        if (count < p) continue;
        double cp = 1.0;
        for (int i = 0; i < p; ++i) cp *= static_cast<double>(count);
        cube_part += cp * (vpp / pp - p * ip);
    }
    double k_sum = 0.0;
    for (int k = 1; k <= p - 1; ++k) k_sum += std::pow(static_cast<double>(k), p - 1);
    const double rhs = cube_part - p * ip * k_sum * static_cast<double>(gamma.size());
    report.lhs = lhs;
    report.rhs = rhs;
    report.worst_margin = std::isinf(lhs) ? std::numeric_limits<double>::infinity() : lhs - rhs;
    report.passed = report.worst_margin >= -kTol;
    std::ostringstream os;
    os << "|gamma| = " << gamma.size() << ", lambda = " << lambda;
    report.witness = os.str();
    return report;
}

ViolationReport power_mean_chain_check(std::span<const double> a, std::span<const int> m) {
    if (a.size() != m.size() || a.empty())
        throw std::invalid_argument("power_mean_chain_check: need equal nonempty inputs");
    ViolationReport report;
    int msum = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] < 1) throw std::invalid_argument("power_mean_chain_check: weights must be >= 1");
        if (!(a[i] > 0.0))
            throw std::invalid_argument("power_mean_chain_check: values must be positive");
        msum += m[i];
    }
    double product = 1.0, weighted = 0.0, plain = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        product *= std::pow(a[i], m[i]);
        const double powm = std::pow(a[i], msum);
        weighted += m[i] * powm;
        plain += powm;
    }
    weighted /= msum;
    const double margin1 = weighted - product;
    const double margin2 = plain - weighted;
    report.lhs = product;
    report.rhs = weighted;
    report.worst_margin = std::min(margin1, margin2);
    report.passed = report.worst_margin >= -kTol;
    if (margin2 < margin1) {
        report.lhs = weighted;
        report.rhs = plain;
    }
    std::ostringstream os;
    os << "j = " << a.size() << ", sum m = " << msum;
    report.witness = os.str();
    return report;
}

PowerMeanExactResult power_mean_chain_check_exact(std::span<const Rational> a,
                                                  std::span<const int> m) {
    if (a.size() != m.size() || a.empty())
        throw std::invalid_argument("power_mean_chain_check_exact: need equal nonempty inputs");
    long msum = 0;
    for (int v : m) msum += v;
    Rational product(1), weighted(0), plain(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        product *= rational_pow(a[i], m[i]);
        const Rational powm = rational_pow(a[i], msum);
        weighted += Rational(m[i]) * powm;
        plain += powm;
    }
    weighted /= Rational(msum);
    PowerMeanExactResult out;
    out.passed = product <= weighted && weighted <= plain;
    out.first_tight = product == weighted;
    return out;
}

ViolationReport binomial_bounds_check(int n_max) {
    if (n_max < 1) throw std::invalid_argument("binomial_bounds_check: n_max must be >= 1");
    ViolationReport report;
    report.worst_margin = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max && report.passed; ++n) {
        BigInt binom = 1;
        for (int k = 1; k <= n; ++k) {
            binom = binom * (n - k + 1) / k;  // C(n, k), exact at every step
            BigInt nk = 1, kk = 1, kfact = 1;
            for (int i = 0; i < k; ++i) nk *= n;
            for (int i = 0; i < k; ++i) kk *= k;
            for (int i = 2; i <= k; ++i) kfact *= i;
            const bool lower_ok = nk <= binom * kk;    // n^k / k^k <= C(n,k)
            const bool upper_ok = binom * kfact <= nk;  // C(n,k) <= n^k / k!
            if (!lower_ok || !upper_ok) {
                report.passed = false;
                std::ostringstream os;
                os << "n = " << n << ", k = " << k;
                report.witness = os.str();
                report.worst_margin = -1.0;
                break;
            }
        }
    }
    return report;
}

namespace {

Configuration falsifier_trial(const PotentialFamily& fam, double lambda, Rng& rng) {
    const int d = fam.dimension();
    Configuration gamma;
    gamma.dimension = d;
    const int shape = static_cast<int>(rng.uniform_int(0, 3));
    auto push_uniform = [&](double lo, double hi, int count) {
        for (int i = 0; i < count; ++i) {
            Point x(d);
            for (auto& c : x) c = rng.uniform(lo, hi);
            gamma.points.push_back(std::move(x));
        }
    };
    switch (shape) {
        case 0: {  // uniform box
            const int n = static_cast<int>(rng.uniform_int(2, 25));
            const double side = rng.uniform(2.0 * lambda, 30.0 * lambda);
            push_uniform(0.0, side, n);
            break;
        }
        case 1: {  // single-cube cluster
            const int n = static_cast<int>(rng.uniform_int(2, 30));
            const double base = lambda * static_cast<double>(rng.uniform_int(-3, 3));
            for (int i = 0; i < n; ++i) {
                Point x(d);
                for (auto& c : x) c = base + rng.uniform(-0.499, 0.499) * lambda;
                gamma.points.push_back(std::move(x));
            }
            break;
        }
        case 2: {  // two-cluster dumbbell
            const int a = static_cast<int>(rng.uniform_int(2, 12));
            const int b = static_cast<int>(rng.uniform_int(2, 12));
            const double sep = rng.uniform(0.4, 12.0 * lambda);
            for (int i = 0; i < a + b; ++i) {
                Point x(d);
                for (auto& c : x) c = rng.uniform(-0.45, 0.45) * lambda;
                if (i >= a) x[0] += sep;
                gamma.points.push_back(std::move(x));
            }
            break;
        }
        default: {  // regular grid along the first axis
            const int n = static_cast<int>(rng.uniform_int(3, 25));
            const double spacing = rng.uniform(0.4 * lambda, 3.0 * lambda);
            for (int i = 0; i < n; ++i) {
                Point x(d, 0.0);
                x[0] = spacing * i;
                gamma.points.push_back(std::move(x));
            }
            break;
        }
    }
    return gamma;
}

}  // namespace

ViolationReport superstability_falsifier(const PotentialFamily& fam, double A, double B,
                                         double lambda, double m_exp, int trials,
                                         std::uint64_t seed) {
    if (!(A > 0.0)) throw std::invalid_argument("superstability_falsifier: A must be positive");
    ViolationReport report;
    report.seed = seed;
    report.worst_margin = std::numeric_limits<double>::infinity();
    Rng rng(seed);
    const PartitionSpec spec{lambda, fam.dimension()};
    EnergyGuards guards;
    guards.allow_large = true;
    for (int t = 0; t < trials; ++t) {
        const Configuration gamma = falsifier_trial(fam, lambda, rng);
        const EnergyBreakdown u = total_energy(fam, gamma, fam.max_order(), guards);
        const double rhs = stability_rhs(occupancy(gamma, spec), A, B, m_exp);
        const double margin = std::isinf(u.total) ? std::numeric_limits<double>::infinity()
                                                  : u.total - rhs;
        if (margin < report.worst_margin) {
            report.worst_margin = margin;
            report.lhs = u.total;
            report.rhs = rhs;
            std::ostringstream os;
            os << "trial " << t << ", |gamma| = " << gamma.size();
            report.witness = os.str();
        }
    }
    report.passed = report.worst_margin >= -kTol;
    return report;
}

}  // namespace superstab
