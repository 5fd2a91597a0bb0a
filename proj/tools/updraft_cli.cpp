#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "updraft/baseline.hpp"
#include "updraft/error.hpp"
#include "updraft/io.hpp"
#include "updraft/metrics.hpp"
#include "updraft/prior_planner.hpp"
#include "updraft/realtime_planner.hpp"
#include "updraft/render.hpp"

namespace {

using namespace updraft;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string t1, t2;
  double dropout = 0.0;
  double jitter = 0.0;
  std::uint64_t noise_seed = 0;
};

PlannerConfig config_of(const Common &c) {
  PlannerConfig cfg = c.config_path.empty() ? PlannerConfig{} : load_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  cfg.validate();
  return cfg;
}

void add_config(CLI::App *app, Common &c) {
  app->add_option("--config", c.config_path, "planner config JSON")->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "mission seed (overrides the config)");
}

void add_scenes(CLI::App *app, Common &c) {
  app->add_option("--t1", c.t1, "first-epoch scene JSON")->required()->check(CLI::ExistingFile);
  app->add_option("--t2", c.t2, "second-epoch scene JSON")->required()->check(CLI::ExistingFile);
}

void add_noise(CLI::App *app, Common &c) {
  app->add_option("--dropout", c.dropout, "fraction of change points withheld per view")->check(CLI::Range(0.0, 1.0));
  app->add_option("--jitter", c.jitter, "Gaussian sigma of change point positions (m)")->check(CLI::NonNegativeNumber);
  app->add_option("--noise-seed", c.noise_seed, "seed of the detection noise");
}

void print_warnings(const std::vector<std::string> &warnings) {
  for (const auto &w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Change-aware drone path planning on 2.5D prism scenes"};
  app.require_subcommand(1);

  Common plan_opts;
  std::string scene_path, plan_out = "plan.json";
  auto *plan_cmd = app.add_subcommand("plan-prior", "plan the offline coverage path over the first epoch");
  plan_cmd->add_option("--scene", scene_path, "first-epoch scene JSON")->required()->check(CLI::ExistingFile);
  add_config(plan_cmd, plan_opts);
  plan_cmd->add_option("--out", plan_out, "plan output path");

  Common run_opts;
  std::string run_out = "results.json";
  bool run_timing = false;
  auto *run_cmd = app.add_subcommand("run", "fly the prior path with online change exploration");
  add_scenes(run_cmd, run_opts);
  add_config(run_cmd, run_opts);
  add_noise(run_cmd, run_opts);
  run_cmd->add_option("--out", run_out, "results output path");
  run_cmd->add_flag("--timing", run_timing, "record per-step wall times (makes output machine-dependent)");

  Common rd_opts;
  std::string rd_out = "results_rd.json";
  double grid_frac = 1.0 / 3.0;
  auto *rd_cmd = app.add_subcommand("baseline-rd", "grid-sweep baseline");
  add_scenes(rd_cmd, rd_opts);
  add_config(rd_cmd, rd_opts);
  add_noise(rd_cmd, rd_opts);
  rd_cmd->add_option("--grid-frac", grid_frac, "cell size as a fraction of the scene extent")
      ->check(CLI::Range(1e-6, 1.0));
  rd_cmd->add_option("--out", rd_out, "results output path");

  Common eval_opts;
  std::vector<std::string> eval_results;
  std::string eval_out = "report.json", eval_table;
  double densify = 1.0;
  std::vector<double> thresholds{1.0, 2.0, 5.0};
  auto *eval_cmd = app.add_subcommand("evaluate", "score results files against the ground-truth changes");
  add_scenes(eval_cmd, eval_opts);
  eval_cmd->add_option("--results", eval_results, "results files")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_out, "report JSON path (one report per results file, as an array when several)");
  eval_cmd->add_option("--table", eval_table, "plain-text table path (default: next to --out)");
  eval_cmd->add_option("--densify", densify, "surface sampling spacing for accuracy metrics (m)")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--thresholds", thresholds, "completeness thresholds (m)");

  Common render_opts;
  std::string render_results, render_out = "render.svg";
  auto *render_cmd = app.add_subcommand("render", "draw a top-down SVG of a mission");
  add_scenes(render_cmd, render_opts);
  render_cmd->add_option("--results", render_results, "results file")->required()->check(CLI::ExistingFile);
  render_cmd->add_option("--out", render_out, "SVG output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan_cmd) {
      const PlannerConfig cfg = config_of(plan_opts);
      const Scene scene = load_scene(scene_path, cfg.h);
      const PriorPlan plan = plan_prior(scene, cfg, cfg.seed);
      if (!plan.uncoverable.empty()) {
        std::cerr << "warning: " << plan.uncoverable.size() << " samples are not visible from any candidate\n";
      }
      write_text(plan_out, plan_to_json(plan));
      std::cout << plan.views.size() << " views kept of " << plan.candidate_count << ", tour "
                << plan.trajectory.length_m << " m -> " << plan_out << '\n';
    } else if (*run_cmd) {
      const PlannerConfig cfg = config_of(run_opts);
      const Scene t1 = load_scene(run_opts.t1, cfg.h);
      const Scene t2 = load_scene(run_opts.t2, cfg.h);
      const OracleNoise noise{run_opts.dropout, run_opts.jitter, run_opts.noise_seed};
      const MissionResult r = run_mission(t1, t2, cfg, noise, cfg.seed);
      print_warnings(r.warnings);
      write_text(run_out, results_to_json(r, run_timing));
      std::cout << r.targets.size() << " targets, " << r.views.size() << " views, " << r.trajectory.length_m
                << " m -> " << run_out << '\n';
    } else if (*rd_cmd) {
      const PlannerConfig cfg = config_of(rd_opts);
      const Scene t1 = load_scene(rd_opts.t1, cfg.h);
      const Scene t2 = load_scene(rd_opts.t2, cfg.h);
      const OracleNoise noise{rd_opts.dropout, rd_opts.jitter, rd_opts.noise_seed};
      const MissionResult r = baseline_rd(t1, t2, grid_frac, cfg, noise, cfg.seed);
      write_text(rd_out, results_to_json(r));
      std::cout << r.targets.size() << " targets, " << r.views.size() << " views, " << r.trajectory.length_m
                << " m -> " << rd_out << '\n';
    } else if (*eval_cmd) {
      const Scene t1 = load_scene(eval_opts.t1);
      const Scene t2 = load_scene(eval_opts.t2);
      EvalOptions opts;
      opts.densify_spacing = densify;
      opts.thresholds = thresholds;
      std::vector<QualityReport> reports;
      std::string json;
      for (const auto &path : eval_results) {
        reports.push_back(evaluate_mission(parse_results(read_text(path)), t1, t2, opts));
      }
      if (reports.size() == 1) {
        json = report_to_json(reports[0]);
      } else {
        json = "[\n";
        for (std::size_t i = 0; i < reports.size(); ++i) {
          json += report_to_json(reports[i]);
          if (i + 1 < reports.size()) json += ",\n";
        }
        json += "]\n";
      }
      write_text(eval_out, json);
      const std::string table = report_table(reports);
      if (eval_table.empty()) {
        std::filesystem::path p(eval_out);
        eval_table = p.replace_extension(".txt").string();
      }
      write_text(eval_table, table);
      std::cout << table;
    } else if (*render_cmd) {
      const Scene t1 = load_scene(render_opts.t1);
      const Scene t2 = load_scene(render_opts.t2);
      render_svg(parse_results(read_text(render_results)), t1, t2, render_out);
      std::cout << "wrote " << render_out << '\n';
    }
  } catch (const updraft::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
