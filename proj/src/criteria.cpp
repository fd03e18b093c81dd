#include "superstab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace superstab {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "stable";
        case Verdict::Superstable: return "superstable";
        case Verdict::StrongSuperstable: return "strong-superstable";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

double cube_condition_margin(const PotentialFamily& fam, int p, double lambda) {
    if (p <= 2) throw std::invalid_argument("cube_condition_margin: p must exceed 2");
    const double rib_limit = max_repulsion_rib(fam);
    if (lambda > rib_limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "cube_condition_margin: lambda " << lambda
           << " exceeds the guaranteed-repulsive rib " << rib_limit;
        throw std::domain_error(os.str());
    }
    const double pp = std::pow(static_cast<double>(p), p);
    return in_cube_lower_bound(fam, p, lambda) / pp -
           p * attractive_integral_per_cube(fam, p, lambda);
}

SeriesResult tail_series(const PotentialFamily& fam, double lambda, int p_cap, double tail_tol) {
    const bool complete = p_cap >= fam.max_order();
    if (p_cap > fam.max_order()) p_cap = fam.max_order();
    SeriesResult out;
    for (const auto& [p, params] : fam.orders()) {
        if (p <= 2 || p > p_cap) continue;
        const double term =
            std::pow(static_cast<double>(p), p + 1) * attractive_integral_per_cube(fam, p, lambda);
        out.terms.push_back(term);
        out.sum += term;
    }
    if (out.terms.empty()) {
        out.tail_flag = true;  // nothing beyond the pair part
        return out;
    }
    // A cap that covers every stored order leaves no tail to worry about.
    // A truncated run is certified only by the heuristic: decreasing terms
    // with the last one below tail_tol of the partial sum.
    bool decreasing = true;
    for (std::size_t i = 1; i < out.terms.size(); ++i)
        if (out.terms[i] > out.terms[i - 1]) decreasing = false;
    const double last = out.terms.back();
    out.tail_flag = complete || (decreasing && last <= tail_tol * out.sum);
    return out;
}

namespace {

PairConstants pair_constants_unchecked(const PotentialFamily& fam, double lambda) {
    PairConstants pc;
    pc.lambda = lambda;
    const double ip = attractive_integral_per_cube(fam, 2, lambda);
    pc.A2 = in_cube_lower_bound(fam, 2, lambda) / 4.0 - 2.0 * ip;
    pc.B2 = 2.0 * ip + pc.A2;
    return pc;
}

}  // namespace

PairConstants pair_constants(const PotentialFamily& fam, double lambda) {
    if (!fam.has_order(2))
        throw PairNotCertified("pair_constants: family defines no pair order");
    const PairConstants pc = pair_constants_unchecked(fam, lambda);
    if (!(pc.A2 > 0.0)) {
        std::ostringstream os;
        os << "pair_constants: pair part not certified superstable at lambda = " << lambda
           << " (A2 = " << pc.A2 << ")";
        throw PairNotCertified(os.str());
    }
    return pc;
}

double bisect_largest_feasible(double hi, double tol, const std::function<bool(double)>& feasible) {
    if (!(hi > 0.0) || !(tol > 0.0))
        throw std::invalid_argument("bisect_largest_feasible: hi and tol must be positive");
    if (feasible(hi)) return hi;
    double lo = hi;
    for (int i = 0; i < 200; ++i) {
        lo *= 0.5;
        if (feasible(lo)) break;
        if (lo < 1e-12) throw std::domain_error("bisect_largest_feasible: no feasible value found");
    }
    double bad = lo * 2.0;
    while (bad - lo > tol) {
        const double mid = 0.5 * (lo + bad);
        if (feasible(mid))
            lo = mid;
        else
            bad = mid;
    }
    return lo;
}

double max_admissible_rib(const PotentialFamily& fam, int p_cap, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("max_admissible_rib: tol must be positive");
    const int cap = std::min(p_cap, fam.max_order());
    const double rib_limit = max_repulsion_rib(fam);
    const double hi = std::isfinite(rib_limit) ? rib_limit : 1e6;
    auto feasible = [&](double lambda) {
        for (const auto& [p, params] : fam.orders()) {
            if (p <= 2 || p > cap) continue;
            if (cube_condition_margin(fam, p, lambda) < 0.0) return false;
        }
        if (fam.has_order(2)) {
            try {
                pair_constants(fam, lambda);
            } catch (const PairNotCertified&) {
                return false;
            }
        }
        return true;
    };
    return bisect_largest_feasible(hi, tol, feasible);
}

ConditionReport certify(const PotentialFamily& fam, double lambda, int p_cap, double tail_tol,
                        const std::optional<PairHypothesis>& hypothesis) {
    ConditionReport report;
    report.lambda = lambda;
    report.lambda_a3 = max_repulsion_rib(fam);
    const int cap = std::min(p_cap, fam.max_order());

    bool margins_ok = true;
    if (lambda > report.lambda_a3 * (1.0 + 1e-12)) {
        report.note = "rib exceeds the guaranteed-repulsive limit";
        margins_ok = false;
    }

    for (const auto& [p, params] : fam.orders()) {
        if (p <= 2 || p > cap) continue;
        PerOrderMargin m;
        m.p = p;
        m.vpp_lower = in_cube_lower_bound(fam, p, lambda);
        m.ip_lattice = attractive_integral_per_cube(fam, p, lambda);
        m.margin = m.vpp_lower / std::pow(static_cast<double>(p), p) - p * m.ip_lattice;
        report.per_p.push_back(m);
        if (m.margin < 0.0) margins_ok = false;
    }

    const SeriesResult series = tail_series(fam, lambda, cap, tail_tol);
    report.series_terms = series.terms;
    report.series_sum = series.sum;
    report.tail_flag = series.tail_flag;

    Verdict pair_class = Verdict::Superstable;
    bool pair_ok = true;
    if (hypothesis) {
        pair_class = hypothesis->declared;
        report.A2 = hypothesis->A2;
        report.B2 = hypothesis->B2;
        if (pair_class == Verdict::StrongSuperstable && !(hypothesis->m_exp > 2.0)) {
            pair_ok = false;
            report.note = "strong-superstable hypothesis requires m_exp > 2";
        }
    } else if (fam.has_order(2)) {
        const PairConstants pc = pair_constants_unchecked(fam, lambda);
        report.A2 = pc.A2;
        report.B2 = pc.B2;
        if (!(pc.A2 > 0.0)) {
            pair_ok = false;
            report.note = "pair part not certified (A2 <= 0)";
        }
    } else {
        pair_ok = false;
        report.note = "no pair order and no declared pair hypothesis";
    }

    report.B = report.B2 + report.series_sum;
    if (margins_ok && report.tail_flag && pair_ok) {
        report.verdict = pair_class;
    } else {
        report.verdict = Verdict::Inconclusive;
        if (report.note.empty()) {
            report.note = !margins_ok ? "a per-order condition margin is negative"
                                      : "series tail not certified at the requested tolerance";
        }
    }
    return report;
}

}  // namespace superstab
