#include "superstab/criteria.hpp"
#include "superstab/energy.hpp"
#include "superstab/geometry.hpp"
#include "superstab/integrals.hpp"
#include "superstab/io.hpp"
#include "superstab/potentials.hpp"
#include "superstab/verify.hpp"
#include "superstab/version.hpp"

#include <nlohmann/json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace superstab;

namespace {

Configuration make_configuration(int dimension, const std::vector<Point>& points) {
    Configuration gamma;
    gamma.dimension = dimension;
    gamma.points = points;
    return gamma;
}

PotentialFamily family_from_json_str(const std::string& text) {
    return family_from_json(Json::parse(text));
}

py::dict estimate_to_dict(const IpEstimate& est) {
    py::dict d;
    d["p"] = est.p;
    d["d"] = est.d;
    d["method"] = est.method;
    d["value"] = est.value;
    d["std_error"] = est.std_error;
    if (est.exact) {
        const auto num = boost::multiprecision::numerator(*est.exact);
        const auto den = boost::multiprecision::denominator(*est.exact);
        d["num"] = py::cast(num.str());
        d["den"] = py::cast(den.str());
    }
    return d;
}

py::dict violation_to_dict(const ViolationReport& r) {
    py::dict d;
    d["seed"] = r.seed;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["witness"] = r.witness;
    d["passed"] = r.passed;
    d["worst_margin"] = r.worst_margin;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "stability and superstability certification for many-body interaction families";
    m.attr("__version__") = kVersion;

    py::class_<PerOrderParams>(m, "PerOrderParams")
        .def(py::init([](double A, double B, double mexp, double nexp) {
                 return PerOrderParams{A, B, mexp, nexp};
             }),
             py::arg("A"), py::arg("B"), py::arg("m"), py::arg("n"))
        .def_readonly("A", &PerOrderParams::repulsion_amp)
        .def_readonly("B", &PerOrderParams::attraction_amp)
        .def_readonly("m", &PerOrderParams::repulsion_exp)
        .def_readonly("n", &PerOrderParams::attraction_exp);

    py::class_<PotentialFamily>(m, "PotentialFamily")
        .def(py::init<int, std::map<int, PerOrderParams>>(), py::arg("dimension"),
             py::arg("per_order"))
        .def_static("reference_catalog", &PotentialFamily::reference_catalog, py::arg("epsilon"),
                    py::arg("p_max"))
        .def_static("worked_example", &PotentialFamily::worked_example)
        .def_static("from_json", &family_from_json_str, py::arg("text"))
        .def_property_readonly("dimension", &PotentialFamily::dimension)
        .def_property_readonly("max_order", &PotentialFamily::max_order)
        .def("has_order", &PotentialFamily::has_order, py::arg("p"))
        .def("params", &PotentialFamily::params, py::arg("p"),
             py::return_value_policy::reference_internal)
        .def("to_json", [](const PotentialFamily& fam) { return family_to_json(fam).dump(); });

    m.def("cube_index",
          [](const Point& x, double lambda, int dimension) {
              return cube_index(x, PartitionSpec{lambda, dimension});
          },
          py::arg("x"), py::arg("lam"), py::arg("dimension"));
    m.def("occupancy",
          [](int dimension, const std::vector<Point>& points, double lambda) {
              py::dict out;
              for (const auto& [cube, count] :
                   occupancy(make_configuration(dimension, points), PartitionSpec{lambda, dimension}))
                  out[py::tuple(py::cast(cube))] = count;
              return out;
          },
          py::arg("dimension"), py::arg("points"), py::arg("lam"));
    m.def("occupancy_power_sum",
          [](const std::map<std::vector<std::int64_t>, std::int64_t>& occ, double mexp) {
              OccupancyMap native(occ.begin(), occ.end());
              return occupancy_power_sum(native, mexp);
          },
          py::arg("occupancy"), py::arg("m"));

    m.def("pairwise_distance_sum",
          [](const std::vector<Point>& pts) { return pairwise_distance_sum(pts); },
          py::arg("points"));
    m.def("p_body_value",
          [](const PotentialFamily& fam, int p, const std::vector<Point>& pts) {
              return p_body_value(fam, p, pts);
          },
          py::arg("family"), py::arg("p"), py::arg("points"));
    m.def("in_cube_lower_bound", &in_cube_lower_bound, py::arg("family"), py::arg("p"),
          py::arg("lam"));
    m.def("max_repulsion_rib", &max_repulsion_rib, py::arg("family"));

    m.def("ball_volume", &ball_volume, py::arg("d"), py::arg("radius"));
    m.def("attractive_integral_bound_1d",
          [](const PotentialFamily& fam, int p) {
              return estimate_to_dict(attractive_integral_bound_1d(fam, p));
          },
          py::arg("family"), py::arg("p"));
    m.def("attractive_integral_bound_ball",
          [](const PotentialFamily& fam, int p, double r0) {
              return estimate_to_dict(attractive_integral_bound_ball(fam, p, r0));
          },
          py::arg("family"), py::arg("p"), py::arg("r0"));
    m.def("default_ball_radius", &default_ball_radius, py::arg("family"), py::arg("p"));
    m.def("attractive_integral_monte_carlo",
          [](const PotentialFamily& fam, int p, std::int64_t samples, std::uint64_t seed,
             int shards, double truncation_radius) {
              IntegrationSettings settings;
              settings.samples = samples;
              settings.seed = seed;
              settings.shards = shards;
              settings.truncation_radius = truncation_radius;
              return estimate_to_dict(attractive_integral_monte_carlo(fam, p, settings));
          },
          py::arg("family"), py::arg("p"), py::arg("samples") = 1'000'000, py::arg("seed") = 42,
          py::arg("shards") = 8, py::arg("truncation_radius") = 0.0);
    m.def("attractive_integral_per_cube", &attractive_integral_per_cube, py::arg("family"),
          py::arg("p"), py::arg("lam"));

    m.def("p_body_energy",
          [](const PotentialFamily& fam, int dimension, const std::vector<Point>& points, int p) {
              return p_body_energy(fam, make_configuration(dimension, points), p);
          },
          py::arg("family"), py::arg("dimension"), py::arg("points"), py::arg("p"));
    m.def("total_energy",
          [](const PotentialFamily& fam, int dimension, const std::vector<Point>& points,
             int p_cap, bool allow_large) {
              EnergyGuards guards;
              guards.allow_large = allow_large;
              const auto breakdown =
                  total_energy(fam, make_configuration(dimension, points), p_cap, guards);
              py::dict d;
              d["per_p"] = breakdown.per_order;
              d["total"] = breakdown.total;
              d["n_points"] = breakdown.n_points;
              return d;
          },
          py::arg("family"), py::arg("dimension"), py::arg("points"), py::arg("p_cap"),
          py::arg("allow_large") = false);
    m.def("stability_rhs",
          [](const std::map<std::vector<std::int64_t>, std::int64_t>& occ, double A, double B,
             double mexp) {
              OccupancyMap native(occ.begin(), occ.end());
              return stability_rhs(native, A, B, mexp);
          },
          py::arg("occupancy"), py::arg("A"), py::arg("B"), py::arg("m"));

    m.def("cube_condition_margin", &cube_condition_margin, py::arg("family"), py::arg("p"),
          py::arg("lam"));
    m.def("max_admissible_rib", &max_admissible_rib, py::arg("family"), py::arg("p_cap"),
          py::arg("tol") = 1e-6);
    m.def("certify",
          [](const PotentialFamily& fam, double lambda, int p_cap, double tail_tol) {
              const auto report = certify(fam, lambda, p_cap, tail_tol);
              const auto manifest = make_manifest("certify", {}, 0);
              Json j = to_json(report, manifest);
              j.erase("manifest");
              return j.dump();
          },
          py::arg("family"), py::arg("lam"), py::arg("p_cap"), py::arg("tail_tol") = 1e-6);

    m.def("composition_sum_check",
          [](int p, int cubes, std::uint64_t seed) {
              return violation_to_dict(
                  composition_sum_check(ToyLatticeInstance::seeded(p, cubes, seed)));
          },
          py::arg("p"), py::arg("cubes"), py::arg("seed"));
    m.def("occupancy_weighted_sum_check",
          [](int p, int cubes, std::uint64_t seed, const std::vector<int>& composition) {
              return violation_to_dict(occupancy_weighted_sum_check(
                  ToyLatticeInstance::seeded(p, cubes, seed), composition));
          },
          py::arg("p"), py::arg("cubes"), py::arg("seed"), py::arg("composition"));
    m.def("superstability_falsifier",
          [](const PotentialFamily& fam, double A, double B, double lambda, double mexp,
             int trials, std::uint64_t seed) {
              return violation_to_dict(
                  superstability_falsifier(fam, A, B, lambda, mexp, trials, seed));
          },
          py::arg("family"), py::arg("A"), py::arg("B"), py::arg("lam"), py::arg("m") = 2.0,
          py::arg("trials") = 1000, py::arg("seed") = 42);
    m.def("binomial_bounds_check",
          [](int n_max) { return violation_to_dict(binomial_bounds_check(n_max)); },
          py::arg("n_max"));
}
