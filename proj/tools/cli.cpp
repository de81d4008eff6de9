// Command-line front end wiring the pipeline:
//   collect -> relabel -> train -> bench -> simulate -> report
// Exit codes: 0 success, 1 operational error, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "botsim/dataset.hpp"
#include "botsim/learners.hpp"
#include "botsim/navigator.hpp"
#include "botsim/world.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace botsim;

namespace {

struct RunConfig {
  Thresholds thresholds;
  RobotSpec robot;
  double noise_sigma = 0.5;
  uint64_t seed = 1;
  std::string out_dir = "out";
  TreeParams tree;
  int n_trees = 100;
  int features_per_split = 2;
  bool bootstrap = true;
  int knn_k = 5;
};

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config \"" + path + "\"");
  json j = json::parse(in);
  RunConfig cfg;
  if (j.contains("thresholds")) {
    cfg.thresholds.threshold = j["thresholds"].value("threshold", cfg.thresholds.threshold);
    cfg.thresholds.critical = j["thresholds"].value("critical", cfg.thresholds.critical);
  }
  if (j.contains("robot")) {
    const auto& r = j["robot"];
    cfg.robot.body_radius = r.value("body_radius", cfg.robot.body_radius);
    cfg.robot.linear_speed = r.value("linear_speed", cfg.robot.linear_speed);
    cfg.robot.angular_speed = r.value("angular_speed", cfg.robot.angular_speed);
  }
  cfg.noise_sigma = j.value("noise_sigma", cfg.noise_sigma);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  if (j.contains("learner")) {
    const auto& l = j["learner"];
    cfg.tree.max_depth = l.value("max_depth", cfg.tree.max_depth);
    cfg.tree.min_samples_split = l.value("min_samples_split", cfg.tree.min_samples_split);
    cfg.n_trees = l.value("n_trees", cfg.n_trees);
    cfg.features_per_split = l.value("features_per_split", cfg.features_per_split);
    cfg.bootstrap = l.value("bootstrap", cfg.bootstrap);
    cfg.knn_k = l.value("k", cfg.knn_k);
  }
  if (cfg.noise_sigma < 0 || cfg.thresholds.critical < 0 ||
      cfg.thresholds.threshold <= 0 || cfg.robot.body_radius <= 0 ||
      cfg.robot.linear_speed <= 0 || cfg.robot.angular_speed <= 0 ||
      cfg.tree.max_depth < 1 || cfg.tree.min_samples_split < 2 || cfg.n_trees < 1 ||
      cfg.features_per_split < 1 || cfg.knn_k < 1) {
    throw std::runtime_error("config \"" + path + "\" has out-of-range values");
  }
  return cfg;
}

void ensure_parent(const std::string& path) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_text(const std::string& path, const std::string& text) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_collect(const RunConfig& cfg, const std::string& world_path, long steps,
                uint64_t seed, const std::string& out, double x, double y,
                double heading) {
  WorldSpec world = load_world(world_path);
  Pose start{{x, y}, heading};
  auto res = collect(world, cfg.robot, start, cfg.thresholds, steps, seed, cfg.noise_sigma);
  ensure_parent(out);
  if (!res.ok()) {
    const auto& err = res.error();
    save_dataset(err.partial, out);
    std::cerr << "collision at tick " << err.collision_tick << "; wrote "
              << err.partial.size() << " samples to " << out << "\n";
    return 1;
  }
  save_dataset(res.value(), out);
  std::cout << "wrote " << res.value().size() << " samples to " << out << "\n";
  return 0;
}

int run_relabel(const std::string& in_path, const std::string& out_path) {
  auto loaded = load_dataset(in_path);
  if (!loaded.ok()) {
    std::cerr << parse_error_text(loaded.error()) << "\n";
    return 1;
  }
  const Dataset& ds = loaded.value();
  std::vector<Command> labels;
  labels.reserve(ds.size());
  for (const auto& s : ds) labels.push_back(s.label);
  auto episodes = detect_oscillation(labels);
  Dataset fixed = relabel(ds);
  long changed = 0;
  for (size_t i = 0; i < ds.size(); ++i) {
    if (fixed[i].label != ds[i].label) ++changed;
  }
  ensure_parent(out_path);
  save_dataset(fixed, out_path);
  std::cout << "relabeled " << changed << " samples across " << episodes.size()
            << " oscillation episodes; wrote " << out_path << "\n";
  return 0;
}

AnyModel fit_algo(const std::string& algo, const Dataset& train, const RunConfig& cfg,
                  uint64_t seed) {
  if (algo == "tree") return fit_tree(train, cfg.tree);
  if (algo == "forest") {
    ForestParams fp;
    fp.n_trees = cfg.n_trees;
    fp.features_per_split = cfg.features_per_split;
    fp.bootstrap = cfg.bootstrap;
    fp.tree = cfg.tree;
    return fit_forest(train, fp, seed);
  }
  return fit_knn(train, KnnParams{cfg.knn_k});
}

int run_train(const RunConfig& cfg, const std::string& algo, const std::string& data_path,
              const std::string& model_path, uint64_t seed) {
  auto loaded = load_dataset(data_path);
  if (!loaded.ok()) {
    std::cerr << parse_error_text(loaded.error()) << "\n";
    return 1;
  }
  AnyModel model = fit_algo(algo, loaded.value(), cfg, seed);
  ensure_parent(model_path);
  save_model(model, model_path);
  std::cout << "trained " << algo << " on " << loaded.value().size() << " samples -> "
            << model_path << "\n";
  return 0;
}

int run_bench(const RunConfig& cfg, const std::string& data_path,
              const std::string& csv_path, uint64_t seed) {
  auto loaded = load_dataset(data_path);
  if (!loaded.ok()) {
    std::cerr << parse_error_text(loaded.error()) << "\n";
    return 1;
  }
  auto split = stratified_split(loaded.value(), 0.75, 42);
  if (!split.ok()) {
    std::cerr << split.error().detail << "\n";
    return 1;
  }
  const Dataset& train = split.value().train;
  const Dataset& test = split.value().test;

  std::string text;
  std::string csv = "algorithm,train_acc,test_acc,fit_seconds\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-9s %9s %9s %11s\n", "algorithm", "train_acc",
                "test_acc", "fit_seconds");
  text += buf;
  for (const std::string algo : {"tree", "forest", "knn"}) {
    AnyModel model = fit_algo(algo, train, cfg, seed);
    auto fn = [&model](const ScanVector& s) { return predict(model, s); };
    double train_acc = accuracy(fn, train);
    double test_acc = accuracy(fn, test);
    double secs = benchmark_fit(algo, train, 5, seed);
    std::snprintf(buf, sizeof buf, "%-9s %9.2f %9.2f %11.4f\n", algo.c_str(), train_acc,
                  test_acc, secs);
    text += buf;
    std::snprintf(buf, sizeof buf, "%s,%.2f,%.2f,%.4f\n", algo.c_str(), train_acc,
                  test_acc, secs);
    csv += buf;
  }
  std::cout << text;
  write_text(csv_path, csv);
  return 0;
}

int run_simulate(const RunConfig& cfg, const std::string& scenario,
                 const std::string& policy_name, const std::string& model_path,
                 const std::string& log_path, uint64_t seed,
                 const std::optional<long>& ticks, const std::optional<double>& sigma,
                 const std::optional<double>& critical, const std::optional<int>& delay) {
  Scenario sc = build_scenario(scenario, seed);
  sc.robot = cfg.robot;
  if (ticks) sc.config.max_ticks = *ticks;
  if (sigma) sc.config.noise_sigma = *sigma;
  if (critical) sc.config.thresholds.critical = *critical;
  if (delay) sc.config.planner_delay_ticks = *delay;

  Policy policy = policy_name == "reflex_only" ? Policy::reflex_only : Policy::two_tier;
  std::optional<AnyModel> model;
  std::optional<PlannerFn> planner;
  if (!model_path.empty()) {
    model = load_model(model_path);
    planner = [&m = *model](const ScanVector& s) { return predict(m, s); };
  }

  Trajectory traj = run_episode(sc.world, sc.start, sc.robot, policy,
                                planner ? &*planner : nullptr, sc.config, seed,
                                sc.exit ? &*sc.exit : nullptr);
  write_text(log_path, trajectory_csv(traj));
  std::cout << "ran " << traj.size() << " ticks -> " << log_path << "\n";
  return 0;
}

int run_report(const std::string& log_path, const std::string& scenario, uint64_t seed) {
  auto parsed = parse_trajectory_csv(read_text(log_path));
  if (!parsed.ok()) {
    std::cerr << parse_error_text(parsed.error()) << "\n";
    return 1;
  }
  const Trajectory& traj = parsed.value();

  NavConfig cfg;
  RobotSpec robot;
  std::optional<Scenario> sc;
  if (!scenario.empty()) {
    sc = build_scenario(scenario, seed);
    cfg = sc->config;
    robot = sc->robot;
  }
  EpisodeMetrics m = compute_metrics(traj, cfg, robot, sc ? &sc->world : nullptr,
                                     sc && sc->exit ? &*sc->exit : nullptr);

  std::cout << "ticks: " << traj.size() << "\n";
  std::cout << "collisions: " << m.collisions << "\n";
  std::cout << "lr_alternations: " << m.lr_alternations << "\n";
  std::cout << "min_reaction_ticks: ";
  if (m.min_reaction_ticks) {
    std::cout << *m.min_reaction_ticks << "\n";
  } else {
    std::cout << "n/a\n";
  }
  std::cout << "escaped: ";
  if (m.escaped) {
    std::cout << "tick " << *m.ticks_to_exit << "\n";
  } else {
    std::cout << "no\n";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", m.min_window_displacement);
  std::cout << "min_window_displacement: " << buf << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differential-drive robot simulator and navigation learner"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration (defaults for all subcommands)");

  // collect
  auto* collect_cmd = app.add_subcommand("collect", "drive the teacher policy and record labeled scans");
  std::string c_world;
  long c_steps = 2000;
  uint64_t c_seed = 1;
  std::string c_out;
  double c_x = 200.0, c_y = 200.0, c_heading = 0.0;
  std::optional<double> c_sigma;
  collect_cmd->add_option("--world", c_world, "world JSON file")->required();
  collect_cmd->add_option("--steps", c_steps, "ticks to record")->check(CLI::PositiveNumber);
  collect_cmd->add_option("--seed", c_seed, "noise seed");
  collect_cmd->add_option("--out", c_out, "output CSV (default out/data/collected.csv)");
  collect_cmd->add_option("--x", c_x, "start x");
  collect_cmd->add_option("--y", c_y, "start y");
  collect_cmd->add_option("--heading", c_heading, "start heading, radians");
  collect_cmd->add_option("--sigma", c_sigma, "sensor noise sigma");

  // relabel
  auto* relabel_cmd = app.add_subcommand("relabel", "rewrite oscillation episodes with their first label");
  std::string r_in, r_out;
  relabel_cmd->add_option("--in", r_in, "input CSV")->required();
  relabel_cmd->add_option("--out", r_out, "output CSV (default out/data/relabeled.csv)");

  // train
  auto* train_cmd = app.add_subcommand("train", "fit a classifier and store it as JSON");
  std::string t_algo, t_data, t_model;
  uint64_t t_seed = 0;
  train_cmd->add_option("--algo", t_algo, "tree|forest|knn")
      ->required()
      ->check(CLI::IsMember({"tree", "forest", "knn"}));
  train_cmd->add_option("--data", t_data, "training CSV")->required();
  train_cmd->add_option("--model", t_model, "output model JSON (default out/models/<algo>.json)");
  train_cmd->add_option("--seed", t_seed, "fit seed (forest subsampling)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "fit all three classifiers, print accuracy and timing");
  std::string b_data, b_csv;
  uint64_t b_seed = 0;
  bench_cmd->add_option("--data", b_data, "dataset CSV")->required();
  bench_cmd->add_option("--csv", b_csv, "report CSV (default out/reports/bench.csv)");
  bench_cmd->add_option("--seed", b_seed, "fit seed");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run a scenario and log the trajectory");
  std::string s_scenario, s_policy, s_model, s_log;
  uint64_t s_seed = 1;
  std::optional<long> s_ticks;
  std::optional<double> s_sigma, s_critical;
  std::optional<int> s_delay;
  sim_cmd->add_option("--scenario", s_scenario, "course|enclosure|corner|mobile")
      ->required()
      ->check(CLI::IsMember({"course", "enclosure", "corner", "mobile"}));
  sim_cmd->add_option("--policy", s_policy, "reflex_only|two_tier")
      ->required()
      ->check(CLI::IsMember({"reflex_only", "two_tier"}));
  sim_cmd->add_option("--model", s_model, "planner model JSON (two_tier falls back to the rule table)");
  sim_cmd->add_option("--log", s_log, "trajectory CSV (default out/logs/<scenario>_<policy>.csv)");
  sim_cmd->add_option("--seed", s_seed, "scenario and noise seed");
  sim_cmd->add_option("--ticks", s_ticks, "override tick budget");
  sim_cmd->add_option("--sigma", s_sigma, "override sensor noise sigma");
  sim_cmd->add_option("--critical", s_critical, "override critical distance");
  sim_cmd->add_option("--delay", s_delay, "override planner link delay, ticks");

  // report
  auto* report_cmd = app.add_subcommand("report", "print episode metrics for a trajectory log");
  std::string p_log, p_scenario;
  uint64_t p_seed = 1;
  report_cmd->add_option("--log", p_log, "trajectory CSV")->required();
  report_cmd->add_option("--scenario", p_scenario,
                         "rebuild this scenario for world-aware metrics (with --seed)")
      ->check(CLI::IsMember({"course", "enclosure", "corner", "mobile"}));
  report_cmd->add_option("--seed", p_seed, "scenario seed used at simulate time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_run_config(config_path);
    if (c_sigma) cfg.noise_sigma = *c_sigma;

    if (collect_cmd->parsed()) {
      if (c_out.empty()) c_out = cfg.out_dir + "/data/collected.csv";
      return run_collect(cfg, c_world, c_steps, c_seed, c_out, c_x, c_y, c_heading);
    }
    if (relabel_cmd->parsed()) {
      if (r_out.empty()) r_out = cfg.out_dir + "/data/relabeled.csv";
      return run_relabel(r_in, r_out);
    }
    if (train_cmd->parsed()) {
      if (t_model.empty()) t_model = cfg.out_dir + "/models/" + t_algo + ".json";
      return run_train(cfg, t_algo, t_data, t_model, t_seed);
    }
    if (bench_cmd->parsed()) {
      if (b_csv.empty()) b_csv = cfg.out_dir + "/reports/bench.csv";
      return run_bench(cfg, b_data, b_csv, b_seed);
    }
    if (sim_cmd->parsed()) {
      if (s_log.empty()) s_log = cfg.out_dir + "/logs/" + s_scenario + "_" + s_policy + ".csv";
      return run_simulate(cfg, s_scenario, s_policy, s_model, s_log, s_seed, s_ticks,
                          s_sigma, s_critical, s_delay);
    }
    if (report_cmd->parsed()) {
      return run_report(p_log, p_scenario, p_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
