// superstab: stability / superstability certification for inverse-power-sum
// many-body interaction families.
//
// Subcommands: check, energy, falsify, lemma-test, appendix-test, worked-example.
// Exit codes: 0 = pass/certified, 1 = condition failed or violation found,
// 2 = input error.

#include "superstab/criteria.hpp"
#include "superstab/energy.hpp"
#include "superstab/integrals.hpp"
#include "superstab/io.hpp"
#include "superstab/potentials.hpp"
#include "superstab/rng.hpp"
#include "superstab/verify.hpp"
#include "superstab/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

namespace {

using superstab::Json;

struct CommonOpts {
    std::string config;
    std::string points;
    std::string out;
    double lambda = 0.29;
    int p_max = 0;  // 0 = family maximum
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    double tol = 1e-6;
    int trials = 10'000;
};

int run_check(const CommonOpts& opt) {
    const superstab::PotentialFamily fam = superstab::load_family(opt.config);
    const int cap = opt.p_max > 0 ? opt.p_max : fam.max_order();
    const superstab::ConditionReport report =
        superstab::certify(fam, opt.lambda, cap, opt.tol);
    const auto manifest = superstab::make_manifest("check", {opt.config}, opt.seed);
    superstab::write_report(superstab::to_json(report, manifest), opt.out);
    return report.verdict == superstab::Verdict::Inconclusive ? 1 : 0;
}

int run_energy(const CommonOpts& opt, int dim_flag) {
    const superstab::PotentialFamily fam = superstab::load_family(opt.config);
    const std::optional<int> expect =
        dim_flag > 0 ? std::optional<int>(dim_flag) : std::nullopt;
    superstab::Configuration gamma = superstab::load_points(opt.points, expect);
    if (gamma.dimension != fam.dimension())
        throw superstab::ConfigError("point dimension does not match the family dimension");
    const int cap = opt.p_max > 0 ? opt.p_max : fam.max_order();
    const superstab::EnergyBreakdown breakdown = superstab::total_energy(fam, gamma, cap);
    const auto manifest =
        superstab::make_manifest("energy", {opt.config, opt.points}, opt.seed);
    superstab::write_report(superstab::to_json(breakdown, manifest), opt.out);
    return 0;
}

int run_falsify(const CommonOpts& opt) {
    const superstab::PotentialFamily fam = superstab::load_family(opt.config);
    const int cap = opt.p_max > 0 ? opt.p_max : fam.max_order();
    const superstab::ConditionReport cert = superstab::certify(fam, opt.lambda, cap, opt.tol);
    if (cert.verdict == superstab::Verdict::Inconclusive)
        throw superstab::ConfigError("cannot falsify: certification is inconclusive at this rib ("
                                     + cert.note + ")");
    const superstab::ViolationReport result = superstab::superstability_falsifier(
        fam, cert.A2, cert.B, opt.lambda, 2.0, opt.trials, opt.seed);
    const auto manifest = superstab::make_manifest("falsify", {opt.config}, opt.seed);
    Json j;
    j["manifest"] = superstab::to_json(manifest);
    j["lambda"] = opt.lambda;
    j["A"] = cert.A2;
    j["B"] = cert.B;
    j["trials"] = opt.trials;
    j["result"] = superstab::to_json(result);
    superstab::write_report(j, opt.out);
    return result.passed ? 0 : 1;
}

int run_lemma_test(const CommonOpts& opt, int p, int cubes, int seeds) {
    const auto manifest = superstab::make_manifest("lemma-test", {}, opt.seed);
    Json runs = Json::array();
    bool all_passed = true;
    for (int s = 1; s <= seeds; ++s) {
        const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(s);
        const auto inst = superstab::ToyLatticeInstance::seeded(p, cubes, seed);
        const superstab::ViolationReport r1 = superstab::composition_sum_check(inst);
        std::vector<int> comp = p == 3 ? std::vector<int>{1, 2} : std::vector<int>{1, 1, 2};
        const superstab::ViolationReport r2 =
            superstab::occupancy_weighted_sum_check(inst, comp);
        all_passed = all_passed && r1.passed && r2.passed;
        Json e;
        e["seed"] = seed;
        e["composition_sum"] = superstab::to_json(r1);
        e["occupancy_weighted_sum"] = superstab::to_json(r2);
        runs.push_back(e);
    }
    Json j;
    j["manifest"] = superstab::to_json(manifest);
    j["p"] = p;
    j["cubes"] = cubes;
    j["passed"] = all_passed;
    j["runs"] = runs;
    superstab::write_report(j, opt.out);
    return all_passed ? 0 : 1;
}

int run_appendix_test(const CommonOpts& opt) {
    superstab::Rng rng(opt.seed);
    bool all_passed = true;
    Json worst;
    for (int t = 0; t < opt.trials; ++t) {
        const int j = static_cast<int>(rng.uniform_int(1, 5));
        std::vector<double> a(j);
        std::vector<int> m(j);
        for (int i = 0; i < j; ++i) {
            a[i] = rng.uniform(1e-3, 10.0);
            m[i] = static_cast<int>(rng.uniform_int(1, 6));
        }
        const superstab::ViolationReport r = superstab::power_mean_chain_check(a, m);
        if (!r.passed) {
            all_passed = false;
            worst = superstab::to_json(r);
            break;
        }
    }
    const superstab::ViolationReport binom = superstab::binomial_bounds_check(30);
    all_passed = all_passed && binom.passed;
    const auto manifest = superstab::make_manifest("appendix-test", {}, opt.seed);
    Json j;
    j["manifest"] = superstab::to_json(manifest);
    j["trials"] = opt.trials;
    j["passed"] = all_passed;
    j["binomial_bounds"] = superstab::to_json(binom);
    if (!worst.is_null()) j["violation"] = worst;
    superstab::write_report(j, opt.out);
    return all_passed ? 0 : 1;
}

Json tagged(double value, const char* provenance) {
    Json j;
    j["value"] = value;
    j["provenance"] = provenance;
    return j;
}

int run_worked_example(const CommonOpts& opt) {
    using namespace superstab;
    const PotentialFamily fam = PotentialFamily::worked_example();
    const auto manifest = make_manifest("worked-example", {}, opt.seed);
    Json j;
    j["manifest"] = to_json(manifest);
    j["family"] = family_to_json(fam);

    // Exact closed-form bound for the three-body tail integral.
    const IpEstimate i3 = attractive_integral_bound_1d(fam, 3);
    j["i3_closed_form"] = to_json(i3);
    j["i3_closed_form"]["provenance"] = "reference";

    // Monte Carlo oracle for the same integral, with the comparison recorded.
    IntegrationSettings settings;
    settings.samples = opt.samples;
    settings.seed = opt.seed;
    const IpEstimate mc = attractive_integral_monte_carlo(fam, 3, settings);
    Json jmc = to_json(mc);
    jmc["provenance"] = "monte-carlo";
    jmc["within_closed_form_bound"] = mc.value <= i3.value + 3.0 * mc.std_error;
    j["i3_monte_carlo"] = jmc;

    // In-cube bound coefficients: A' = 1/4096 and B' = 1/64 for the
    // three-body order, giving the rib condition bracket below.
    const auto coeff = pairwise_sum_coefficients(3, 1);
    const PerOrderParams& q3 = fam.params(3);
    j["v33_coefficients"] = {
        {"a_prime", tagged(q3.repulsion_amp / std::pow(coeff.upper, q3.repulsion_exp), "reference")},
        {"b_prime", tagged(q3.attraction_amp / std::pow(coeff.lower, q3.attraction_exp), "reference")}};

    // Bracket 1/(110592 l^12) - 1/(1728 l^6) - 1431/(20480 l^2) and the
    // per-particle tail coefficient 1431/4096 l^-2.
    j["u3_bracket"] = {{"c12", tagged(1.0 / 110592.0, "reference")},
                       {"c6", tagged(1.0 / 1728.0, "reference")},
                       {"c2", tagged(1431.0 / 20480.0, "reference")}};
    j["b_term_coefficient"] = tagged(1431.0 / 4096.0, "reference");

    const double reference_rib = 0.29874;
    const double margin_ref = cube_condition_margin(fam, 3, reference_rib);
    j["condition_at_reference_rib"] = {{"lambda", reference_rib},
                                       {"margin", margin_ref},
                                       {"holds", margin_ref >= 0.0},
                                       {"provenance", "reference"}};

    auto bracket = [](double l) {
        return 1.0 / (110592.0 * std::pow(l, 12)) - 1.0 / (1728.0 * std::pow(l, 6)) -
               1431.0 / (20480.0 * l * l);
    };
    const double rib_limit = max_repulsion_rib(fam);
    const double root = bisect_largest_feasible(rib_limit, opt.tol,
                                                [&](double l) { return bracket(l) >= 0.0; });
    j["rib_root"] = {{"lambda_star", root},
                     {"tol", opt.tol},
                     {"at_least_reference", root >= reference_rib},
                     {"provenance", "bisection"}};

    const ConditionReport cert = certify(fam, 0.29, fam.max_order(), 1e-6);
    j["certification_at_0.29"] = to_json(cert, manifest);
    j["certification_at_0.29"].erase("manifest");

    superstab::write_report(j, opt.out);
    const bool ok = margin_ref >= 0.0 && root >= reference_rib &&
                    cert.verdict != Verdict::Inconclusive;
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stability and superstability certification for many-body interaction families"};
    app.set_version_flag("--version", superstab::kVersion);
    app.require_subcommand(1);

    CommonOpts opt;
    int dim_flag = 0;
    int lemma_p = 3, lemma_cubes = 4, lemma_seeds = 100;

    auto add_common = [&](CLI::App* cmd, bool with_config) {
        if (with_config)
            cmd->add_option("--config", opt.config, "family config (JSON)")->required();
        cmd->add_option("--out", opt.out, "report path (default stdout)");
        cmd->add_option("--seed", opt.seed, "random seed (default 42)");
        cmd->add_option("--tol", opt.tol, "bisection/tail tolerance (default 1e-6)");
    };

    CLI::App* check = app.add_subcommand("check", "evaluate the certification conditions");
    add_common(check, true);
    check->add_option("--lambda", opt.lambda, "cube rib")->required();
    check->add_option("--pmax", opt.p_max, "highest order to include");

    CLI::App* energy = app.add_subcommand("energy", "enumerate the energy of a point set");
    add_common(energy, true);
    energy->add_option("--points", opt.points, "point set (CSV or JSON)")->required();
    energy->add_option("--pmax", opt.p_max, "highest order to include");
    energy->add_option("--dim", dim_flag, "expected point dimension");

    CLI::App* falsify = app.add_subcommand("falsify", "randomized search for a bound violation");
    add_common(falsify, true);
    falsify->add_option("--lambda", opt.lambda, "cube rib")->required();
    falsify->add_option("--trials", opt.trials, "number of trial configurations");
    falsify->add_option("--pmax", opt.p_max, "highest order to include");

    CLI::App* lemma = app.add_subcommand("lemma-test", "lattice sum dominance checks");
    add_common(lemma, false);
    lemma->add_option("--p", lemma_p, "interaction order (3 or 4)");
    lemma->add_option("--L", lemma_cubes, "number of lattice cubes");
    lemma->add_option("--seeds", lemma_seeds, "number of seeded instances");

    CLI::App* appendix = app.add_subcommand("appendix-test", "power-mean and binomial bound checks");
    add_common(appendix, false);
    appendix->add_option("--trials", opt.trials, "number of random draws");

    CLI::App* worked = app.add_subcommand("worked-example",
                                          "emit the built-in d=1 reference example report");
    add_common(worked, false);
    worked->add_option("--samples", opt.samples, "Monte Carlo sample count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) return run_check(opt);
        if (energy->parsed()) return run_energy(opt, dim_flag);
        if (falsify->parsed()) return run_falsify(opt);
        if (lemma->parsed()) return run_lemma_test(opt, lemma_p, lemma_cubes, lemma_seeds);
        if (appendix->parsed()) return run_appendix_test(opt);
        if (worked->parsed()) return run_worked_example(opt);
    } catch (const superstab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
