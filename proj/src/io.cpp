#include "updraft/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "updraft/error.hpp"

namespace updraft {

using nlohmann::ordered_json;

std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path &path, std::string_view text) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

ordered_json parse_doc(std::string_view text, const char *what) {
  try {
    return ordered_json::parse(text.begin(), text.end());
  } catch (const ordered_json::parse_error &e) {
    throw ParseError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

double num(const ordered_json &o, const std::string &key, const std::string &where) {
  if (!o.contains(key)) throw ParseError(where + "." + key + ": missing");
  if (!o.at(key).is_number()) throw ParseError(where + "." + key + ": expected a number");
  return o.at(key).get<double>();
}

template <typename T>
T get_as(const ordered_json &o, const std::string &key, const std::string &where) {
  if (!o.contains(key)) throw ParseError(where + "." + key + ": missing");
  try {
    return o.at(key).get<T>();
  } catch (const ordered_json::exception &) {
    throw ParseError(where + "." + key + ": wrong type");
  }
}

ordered_json vec3_json(const Vec3 &p) { return ordered_json::array({p.x, p.y, p.z}); }

Vec3 vec3_from(const ordered_json &v, const std::string &where) {
  if (!v.is_array() || v.size() != 3) throw ParseError(where + ": expected [x, y, z]");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

ordered_json hull_json(const HullPrism &h) {
  ordered_json fp = ordered_json::array();
  for (const auto &v : h.footprint) fp.push_back({v.x, v.y});
  return {{"footprint", fp}, {"base", h.base_height}, {"top", h.top_height}};
}

HullPrism hull_from(const ordered_json &o, const std::string &where) {
  HullPrism h;
  for (const auto &v : get_as<ordered_json>(o, "footprint", where)) {
    if (!v.is_array() || v.size() != 2) throw ParseError(where + ".footprint: expected [x, z] pairs");
    h.footprint.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  h.base_height = num(o, "base", where);
  h.top_height = num(o, "top", where);
  return h;
}

std::optional<RigSlot> slot_from(std::string_view s) {
  for (RigSlot r : kRigSlots) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

ordered_json config_json(const PlannerConfig &c) {
  ordered_json priors = ordered_json::object();
  for (const auto &[label, p] : c.priors.entries()) priors[std::string(to_string(label))] = p;
  ordered_json j;
  j["h"] = c.h;
  j["omega"] = c.omega;
  j["gamma"] = c.gamma;
  j["beta_prior"] = c.beta_prior;
  j["phi"] = c.phi;
  j["K"] = c.K;
  j["prior_radius_m"] = c.prior_radius_m;
  j["realtime_radius_m"] = c.realtime_radius_m;
  j["alpha_deg"] = c.alpha_deg;
  j["beta_deg"] = c.beta_deg;
  j["d_pad"] = c.d_pad ? ordered_json(*c.d_pad) : ordered_json(nullptr);
  j["sample_spacing_m"] = c.sample_spacing_m;
  j["target_spacing_m"] = c.target_spacing_m;
  j["cluster_gap_m"] = c.cluster_gap_m;
  j["tau"] = c.tau;
  j["seed"] = c.seed;
  j["window"] = c.window;
  j["regen_iou"] = c.regen_iou;
  j["max_nbv_per_target"] = c.max_nbv_per_target;
  j["merge_always_union"] = c.merge_always_union;
  j["gain_scope"] = c.gain_scope == GainScope::AllSamples ? "all" : "visible";
  j["gain_samples"] = c.gain_samples == GainSamples::TargetOnly ? "target" : "all";
  j["camera"] = {{"horizontal_half_fov_deg", c.camera_horizontal_half_fov_deg},
                 {"vertical_half_fov_deg", c.camera_vertical_half_fov_deg},
                 {"far_m", c.camera_far_m}};
  j["priors"] = priors;
  return j;
}

PlannerConfig config_from(const ordered_json &j, const std::string &where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  PlannerConfig c;
  static const std::set<std::string> known{
      "h", "omega", "gamma", "beta_prior", "phi", "K", "prior_radius_m", "realtime_radius_m", "alpha_deg",
      "beta_deg", "d_pad", "sample_spacing_m", "target_spacing_m", "cluster_gap_m", "tau", "seed", "window",
      "regen_iou", "max_nbv_per_target", "merge_always_union", "gain_scope", "gain_samples", "camera", "prior_table", "priors"};
  for (const auto &item : j.items()) {
    if (!known.contains(item.key())) throw ParseError(where + "." + item.key() + ": unknown field");
  }
  auto opt_num = [&](const char *key, double &dst) {
    if (j.contains(key)) dst = num(j, key, where);
  };
  opt_num("h", c.h);
  opt_num("omega", c.omega);
  opt_num("gamma", c.gamma);
  opt_num("beta_prior", c.beta_prior);
  opt_num("phi", c.phi);
  if (j.contains("K")) c.K = get_as<int>(j, "K", where);
  opt_num("prior_radius_m", c.prior_radius_m);
  opt_num("realtime_radius_m", c.realtime_radius_m);
  opt_num("alpha_deg", c.alpha_deg);
  opt_num("beta_deg", c.beta_deg);
  if (j.contains("d_pad") && !j.at("d_pad").is_null()) c.d_pad = num(j, "d_pad", where);
  opt_num("sample_spacing_m", c.sample_spacing_m);
  opt_num("target_spacing_m", c.target_spacing_m);
  opt_num("cluster_gap_m", c.cluster_gap_m);
  opt_num("tau", c.tau);
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed", where);
  if (j.contains("window")) c.window = get_as<int>(j, "window", where);
  opt_num("regen_iou", c.regen_iou);
  if (j.contains("max_nbv_per_target")) c.max_nbv_per_target = get_as<int>(j, "max_nbv_per_target", where);
  if (j.contains("merge_always_union")) c.merge_always_union = get_as<bool>(j, "merge_always_union", where);
  if (j.contains("gain_scope")) {
    const auto s = get_as<std::string>(j, "gain_scope", where);
    if (s == "visible") {
      c.gain_scope = GainScope::VisibleToCandidate;
    } else if (s == "all") {
      c.gain_scope = GainScope::AllSamples;
    } else {
      throw ParseError(where + ".gain_scope: expected \"visible\" or \"all\"");
    }
  }
  if (j.contains("gain_samples")) {
    const auto s = get_as<std::string>(j, "gain_samples", where);
    if (s == "all") {
      c.gain_samples = GainSamples::PriorAndTarget;
    } else if (s == "target") {
      c.gain_samples = GainSamples::TargetOnly;
    } else {
      throw ParseError(where + ".gain_samples: expected \"all\" or \"target\"");
    }
  }
  if (j.contains("camera")) {
    const auto &cam = j.at("camera");
    const std::string w = where + ".camera";
    if (!cam.is_object()) throw ParseError(w + ": expected an object");
    if (cam.contains("horizontal_half_fov_deg")) {
      c.camera_horizontal_half_fov_deg = num(cam, "horizontal_half_fov_deg", w);
    }
    if (cam.contains("vertical_half_fov_deg")) c.camera_vertical_half_fov_deg = num(cam, "vertical_half_fov_deg", w);
    if (cam.contains("far_m")) c.camera_far_m = num(cam, "far_m", w);
  }
  if (j.contains("prior_table")) {
    const auto s = get_as<std::string>(j, "prior_table", where);
    if (s == "urban") {
      c.priors = PriorTable::urban();
    } else if (s == "extended") {
      c.priors = PriorTable::extended();
    } else {
      throw ParseError(where + ".prior_table: expected \"urban\" or \"extended\"");
    }
  }
  if (j.contains("priors")) {
    const auto &pr = j.at("priors");
    if (!pr.is_object()) throw ParseError(where + ".priors: expected an object");
    for (const auto &item : pr.items()) {
      const auto label = label_from_string(item.key());
      if (!label) throw ParseError(where + ".priors." + item.key() + ": unknown label");
      if (!item.value().is_number()) throw ParseError(where + ".priors." + item.key() + ": expected a number");
      c.priors.set(*label, item.value().get<double>());
    }
  }
  c.validate();
  return c;
}

}  // namespace

PlannerConfig parse_config(std::string_view json_text) { return config_from(parse_doc(json_text, "config"), "config"); }

PlannerConfig load_config(const std::filesystem::path &path) {
  try {
    return parse_config(read_text(path));
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string config_to_json(const PlannerConfig &cfg) { return config_json(cfg).dump(2) + "\n"; }

std::string plan_to_json(const PriorPlan &plan) {
  ordered_json j;
  j["candidate_count"] = plan.candidate_count;
  j["sample_count"] = plan.samples.size();
  j["uncoverable_samples"] = plan.uncoverable.size();
  ordered_json views = ordered_json::array();
  for (const auto &v : plan.views) {
    views.push_back({{"id", v.id}, {"position", vec3_json(v.position)}, {"slot", std::string(to_string(v.slot))}});
  }
  j["views"] = views;
  j["tour"] = {{"views", plan.trajectory.ordered_views}, {"length_m", plan.trajectory.length_m}};
  return j.dump(2) + "\n";
}

std::string results_to_json(const MissionResult &r, bool timing) {
  ordered_json j;
  j["method"] = r.method;
  j["seed"] = r.seed;
  j["grid_frac"] = r.grid_frac;
  j["noise"] = {{"dropout_prob", r.noise.dropout_prob}, {"jitter_sigma", r.noise.jitter_sigma}, {"seed", r.noise.seed}};
  j["config"] = config_json(r.config);
  j["prior_view_count"] = r.prior_view_count;
  j["trajectory"] = {{"views", r.trajectory.ordered_views}, {"length_m", r.trajectory.length_m}};
  ordered_json views = ordered_json::array();
  for (const auto &v : r.views) {
    views.push_back({{"id", v.id}, {"position", vec3_json(v.position)}, {"slot", std::string(to_string(v.slot))}});
  }
  j["views"] = views;
  ordered_json targets = ordered_json::array();
  for (const auto &t : r.targets) {
    ordered_json tj{{"id", t.id}};
    tj.update(hull_json(t.hull));
    tj["unreachable"] = t.unreachable;
    tj["nbv_steps"] = t.nbv_steps;
    tj["cloud_size"] = t.cloud_size;
    tj["iou_gt"] = t.iou_gt;
    targets.push_back(tj);
  }
  j["targets"] = targets;
  ordered_json steps = ordered_json::array();
  for (const auto &s : r.steps) {
    ordered_json sj{{"index", s.step_index}, {"view", s.view_id},          {"kind", s.kind},
                    {"target", s.target_id}, {"gain", s.gain}, {"candidates", s.candidates_considered}};
    if (timing) sj["wall_time_s"] = s.wall_time_s;
    steps.push_back(sj);
  }
  j["steps"] = steps;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

MissionResult parse_results(std::string_view json_text) {
  const auto j = parse_doc(json_text, "results");
  const std::string w = "results";
  MissionResult r;
  try {
    r.method = get_as<std::string>(j, "method", w);
    r.seed = get_as<std::uint64_t>(j, "seed", w);
    r.grid_frac = num(j, "grid_frac", w);
    const auto &n = j.at("noise");
    r.noise = {num(n, "dropout_prob", w + ".noise"), num(n, "jitter_sigma", w + ".noise"),
               get_as<std::uint64_t>(n, "seed", w + ".noise")};
    r.config = config_from(j.at("config"), w + ".config");
    r.prior_view_count = get_as<std::size_t>(j, "prior_view_count", w);
    const auto &tr = j.at("trajectory");
    r.trajectory.ordered_views = get_as<std::vector<ViewId>>(tr, "views", w + ".trajectory");
    r.trajectory.length_m = num(tr, "length_m", w + ".trajectory");
    for (const auto &v : j.at("views")) {
      const auto slot = slot_from(get_as<std::string>(v, "slot", w + ".views"));
      if (!slot) throw ParseError(w + ".views: unknown slot");
      r.views.push_back({get_as<ViewId>(v, "id", w + ".views"), vec3_from(v.at("position"), w + ".views"), *slot});
    }
    for (const auto &t : j.at("targets")) {
      TargetRecord rec;
      rec.id = get_as<int>(t, "id", w + ".targets");
      rec.hull = hull_from(t, w + ".targets");
      rec.unreachable = get_as<bool>(t, "unreachable", w + ".targets");
      rec.nbv_steps = get_as<int>(t, "nbv_steps", w + ".targets");
      rec.cloud_size = get_as<std::size_t>(t, "cloud_size", w + ".targets");
      rec.iou_gt = num(t, "iou_gt", w + ".targets");
      r.targets.push_back(rec);
    }
    for (const auto &s : j.at("steps")) {
      StepRecord st;
      const std::string ws = w + ".steps";
      st.step_index = get_as<int>(s, "index", ws);
      st.view_id = get_as<ViewId>(s, "view", ws);
      st.kind = get_as<std::string>(s, "kind", ws);
      st.target_id = get_as<int>(s, "target", ws);
      st.gain = num(s, "gain", ws);
      st.candidates_considered = get_as<int>(s, "candidates", ws);
      if (s.contains("wall_time_s")) st.wall_time_s = num(s, "wall_time_s", ws);
      r.steps.push_back(st);
    }
    r.warnings = get_as<std::vector<std::string>>(j, "warnings", w);
  } catch (const ordered_json::out_of_range &e) {
    throw ParseError(w + ": missing field: " + e.what());
  }
  return r;
}

std::string report_to_json(const QualityReport &r) {
  ordered_json j;
  j["method"] = r.method;
  ordered_json per = ordered_json::array();
  for (const auto &m : r.per_target_iou) {
    per.push_back({{"target", m.target_id}, {"gt", m.gt_index}, {"iou", m.iou}});
  }
  j["per_target_iou"] = per;
  j["false_positives"] = r.false_positives;
  j["missed"] = r.missed;
  j["gt_regions"] = r.gt_regions;
  j["n_views"] = r.n_views;
  j["path_len_m"] = r.path_len_m;
  auto opt = [](const std::optional<double> &v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  j["error_p85"] = opt(r.error_p85);
  j["error_p90"] = opt(r.error_p90);
  j["error_p95"] = opt(r.error_p95);
  ordered_json comp = ordered_json::array();
  for (const auto &[d, pct] : r.completeness_at) comp.push_back({{"threshold_m", d}, {"percent", pct}});
  j["completeness"] = comp;
  j["avg_nbv_time_s"] = r.avg_nbv_time_s;
  return j.dump(2) + "\n";
}

QualityReport parse_report(std::string_view json_text) {
  const auto j = parse_doc(json_text, "report");
  const std::string w = "report";
  QualityReport r;
  try {
    r.method = get_as<std::string>(j, "method", w);
    for (const auto &m : j.at("per_target_iou")) {
      r.per_target_iou.push_back({get_as<int>(m, "target", w), get_as<int>(m, "gt", w), num(m, "iou", w)});
    }
    r.false_positives = get_as<int>(j, "false_positives", w);
    r.missed = get_as<int>(j, "missed", w);
    r.gt_regions = get_as<int>(j, "gt_regions", w);
    r.n_views = get_as<int>(j, "n_views", w);
    r.path_len_m = num(j, "path_len_m", w);
    auto opt = [&](const char *key) -> std::optional<double> {
      if (j.at(key).is_null()) return std::nullopt;
      return num(j, key, w);
    };
    r.error_p85 = opt("error_p85");
    r.error_p90 = opt("error_p90");
    r.error_p95 = opt("error_p95");
    for (const auto &c : j.at("completeness")) r.completeness_at[num(c, "threshold_m", w)] = num(c, "percent", w);
    r.avg_nbv_time_s = num(j, "avg_nbv_time_s", w);
  } catch (const ordered_json::out_of_range &e) {
    throw ParseError(w + ": missing field: " + e.what());
  }
  return r;
}

std::string report_table(std::span<const QualityReport> reports) {
  std::ostringstream out;
  std::set<double> thresholds;
  for (const auto &r : reports) {
    for (const auto &[d, _] : r.completeness_at) thresholds.insert(d);
  }
  auto cell = [&](const std::string &s, int width) { out << std::setw(width) << s; };
  auto fixed = [](double v, int prec) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(prec) << v;
    return s.str();
  };

  cell("method", 10);
  cell("targets", 9);
  cell("FP", 5);
  cell("missed", 8);
  cell("mean IoU", 10);
  cell("#views", 8);
  cell("path (m)", 11);
  cell("err p90", 9);
  for (double d : thresholds) cell("comp@" + fixed(d, 0) + "m", 10);
  out << '\n';
  for (const auto &r : reports) {
    double mean = 0.0;
    int matched = 0;
    for (const auto &m : r.per_target_iou) {
      if (m.gt_index < 0) continue;
      mean += m.iou;
      ++matched;
    }
    cell(r.method, 10);
    cell(std::to_string(r.per_target_iou.size()), 9);
    cell(std::to_string(r.false_positives), 5);
    cell(std::to_string(r.missed), 8);
    cell(matched ? fixed(mean / matched, 3) : "-", 10);
    cell(std::to_string(r.n_views), 8);
    cell(fixed(r.path_len_m, 1), 11);
    cell(r.error_p90 ? fixed(*r.error_p90, 2) : "-", 9);
    for (double d : thresholds) {
      const auto it = r.completeness_at.find(d);
      cell(it == r.completeness_at.end() ? "-" : fixed(it->second, 1), 10);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace updraft
