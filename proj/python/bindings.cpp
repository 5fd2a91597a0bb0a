#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "updraft/baseline.hpp"
#include "updraft/error.hpp"
#include "updraft/geometry.hpp"
#include "updraft/io.hpp"
#include "updraft/metrics.hpp"
#include "updraft/prior_planner.hpp"
#include "updraft/realtime_planner.hpp"
#include "updraft/render.hpp"

namespace py = pybind11;
using namespace updraft;

namespace {

using Point3 = std::tuple<double, double, double>;
using Point2 = std::tuple<double, double>;

std::vector<Vec3> to_vec3(const std::vector<Point3> &pts) {
  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const auto &[x, y, z] : pts) out.push_back({x, y, z});
  return out;
}

Polygon to_polygon(const std::vector<Point2> &pts) {
  Polygon out;
  for (const auto &[x, z] : pts) out.push_back({x, z});
  return out;
}

std::vector<Point2> from_polygon(const Polygon &poly) {
  std::vector<Point2> out;
  for (const auto &p : poly) out.emplace_back(p.x, p.y);
  return out;
}

HullPrism to_hull(const std::vector<Point2> &footprint, double base, double top) {
  return {to_polygon(footprint), base, top};
}

PlannerConfig config_or_default(const std::string &json) {
  return json.empty() ? PlannerConfig{} : parse_config(json);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Change-aware drone path planning core";

  py::register_exception<Error>(m, "UpdraftError", PyExc_RuntimeError);

  py::class_<Scene>(m, "Scene")
      .def_property_readonly("bounds",
                             [](const Scene &s) {
                               return std::make_tuple(s.bounds.min_x, s.bounds.min_z, s.bounds.max_x, s.bounds.max_z);
                             })
      .def_property_readonly("prism_count", [](const Scene &s) { return s.prisms.size(); })
      .def("to_json", &scene_to_json);

  m.def("load_scene", [](const std::string &path, double h) { return load_scene(path, h); }, py::arg("path"),
        py::arg("safe_height") = 120.0);
  m.def("parse_scene", [](const std::string &text, double h) { return parse_scene(text, h); }, py::arg("text"),
        py::arg("safe_height") = 120.0);

  m.def("default_config_json", [] { return config_to_json(PlannerConfig{}); });

  m.def("plan_prior_json",
        [](const Scene &scene, const std::string &config_json, std::uint64_t seed) {
          return plan_to_json(plan_prior(scene, config_or_default(config_json), seed));
        },
        py::arg("scene"), py::arg("config_json") = "", py::arg("seed") = 0);

  m.def("run_mission_json",
        [](const Scene &t1, const Scene &t2, const std::string &config_json, double dropout, double jitter,
           std::uint64_t noise_seed, std::uint64_t seed, bool timing) {
          const MissionResult r =
              run_mission(t1, t2, config_or_default(config_json), OracleNoise{dropout, jitter, noise_seed}, seed);
          return results_to_json(r, timing);
        },
        py::arg("t1"), py::arg("t2"), py::arg("config_json") = "", py::arg("dropout") = 0.0, py::arg("jitter") = 0.0,
        py::arg("noise_seed") = 0, py::arg("seed") = 0, py::arg("timing") = false);

  m.def("baseline_rd_json",
        [](const Scene &t1, const Scene &t2, double grid_frac, const std::string &config_json, double dropout,
           double jitter, std::uint64_t noise_seed, std::uint64_t seed) {
          return results_to_json(baseline_rd(t1, t2, grid_frac, config_or_default(config_json),
                                             OracleNoise{dropout, jitter, noise_seed}, seed));
        },
        py::arg("t1"), py::arg("t2"), py::arg("grid_frac") = 1.0 / 3.0, py::arg("config_json") = "",
        py::arg("dropout") = 0.0, py::arg("jitter") = 0.0, py::arg("noise_seed") = 0, py::arg("seed") = 0);

  m.def("evaluate_json",
        [](const std::string &results_json, const Scene &t1, const Scene &t2) {
          return report_to_json(evaluate_mission(parse_results(results_json), t1, t2));
        },
        py::arg("results_json"), py::arg("t1"), py::arg("t2"));

  m.def("render_svg",
        [](const std::string &results_json, const Scene &t1, const Scene &t2) {
          return render_svg(parse_results(results_json), t1, t2);
        },
        py::arg("results_json"), py::arg("t1"), py::arg("t2"));

  m.def("iou_prism",
        [](const std::vector<Point2> &a, double a_base, double a_top, const std::vector<Point2> &b, double b_base,
           double b_top) { return iou_prism(to_hull(a, a_base, a_top), to_hull(b, b_base, b_top)); },
        py::arg("a"), py::arg("a_base"), py::arg("a_top"), py::arg("b"), py::arg("b_base"), py::arg("b_top"));

  m.def("convex_hull_2d", [](const std::vector<Point2> &pts) { return from_polygon(convex_hull_2d(to_polygon(pts))); });

  m.def("poisson_disk",
        [](const std::vector<Point2> &region, double radius, std::uint64_t seed) {
          return from_polygon(poisson_disk(to_polygon(region), radius, seed));
        },
        py::arg("region"), py::arg("radius"), py::arg("seed") = 0);

  m.def("padding", &padding, py::arg("h"), py::arg("alpha"), py::arg("beta"), py::arg("d"));

  m.def("error_percentile",
        [](const std::vector<Point3> &recon, const std::vector<Point3> &gt, double pct) {
          return error_percentile(to_vec3(recon), to_vec3(gt), pct);
        },
        py::arg("recon"), py::arg("gt"), py::arg("pct"));

  m.def("completeness",
        [](const std::vector<Point3> &recon, const std::vector<Point3> &gt, double d) {
          return completeness(to_vec3(recon), to_vec3(gt), d);
        },
        py::arg("recon"), py::arg("gt"), py::arg("d"));
}
