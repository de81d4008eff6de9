#include "botsim/learners.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "botsim/rng.hpp"

namespace botsim {

double gini(const std::array<int, kNumCommands>& counts, int total) {
  if (total <= 0) return 0.0;
  double sum = 0.0;
  for (int c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(total);
    sum += p * p;
  }
  return 1.0 - sum;
}

std::optional<SplitCandidate> best_split(const Dataset& ds, std::span<const int> idx,
                                         std::span<const int> features) {
  int n = static_cast<int>(idx.size());
  if (n < 2) return std::nullopt;

  std::array<int, kNumCommands> total_counts{};
  for (int i : idx) total_counts[static_cast<size_t>(ds[static_cast<size_t>(i)].label)]++;
  double parent = gini(total_counts, n);
  if (parent == 0.0) return std::nullopt;

  std::vector<int> feats(features.begin(), features.end());
  std::sort(feats.begin(), feats.end());

  std::optional<SplitCandidate> best;
  std::vector<std::pair<double, Command>> ordered(static_cast<size_t>(n));
  for (int f : feats) {
    for (int i = 0; i < n; ++i) {
      const auto& s = ds[static_cast<size_t>(idx[static_cast<size_t>(i)])];
      ordered[static_cast<size_t>(i)] = {s.scan.channel(f), s.label};
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::array<int, kNumCommands> left_counts{};
    int n_left = 0;
    for (int i = 0; i + 1 < n; ++i) {
      left_counts[static_cast<size_t>(ordered[static_cast<size_t>(i)].second)]++;
      ++n_left;
      double v = ordered[static_cast<size_t>(i)].first;
      double next = ordered[static_cast<size_t>(i + 1)].first;
      if (v == next) continue;

      std::array<int, kNumCommands> right_counts{};
      for (int c = 0; c < kNumCommands; ++c) {
        right_counts[static_cast<size_t>(c)] =
            total_counts[static_cast<size_t>(c)] - left_counts[static_cast<size_t>(c)];
      }
      int n_right = n - n_left;
      double score = (static_cast<double>(n_left) * gini(left_counts, n_left) +
                      static_cast<double>(n_right) * gini(right_counts, n_right)) /
                     static_cast<double>(n);
      if (!best || score < best->score) {
        best = SplitCandidate{f, (v + next) / 2.0, score};
      }
    }
  }

  if (best && best->score < parent) return best;
  return std::nullopt;
}

namespace {

Command majority_label(const std::array<int, kNumCommands>& counts) {
  int best_c = 0;
  for (int c = 1; c < kNumCommands; ++c) {
    if (counts[static_cast<size_t>(c)] > counts[static_cast<size_t>(best_c)]) best_c = c;
  }
  return static_cast<Command>(best_c);
}

// Per-node feature chooser; the plain tree always sees every feature, the
// forest draws a fresh subset from its tree stream.
using FeatureSelector = std::function<std::vector<int>()>;

int build_node(const Dataset& ds, std::vector<int>& idx, int depth,
               const TreeParams& params, const FeatureSelector& select,
               std::vector<TreeNode>& nodes) {
  std::array<int, kNumCommands> counts{};
  for (int i : idx) counts[static_cast<size_t>(ds[static_cast<size_t>(i)].label)]++;

  auto make_leaf = [&]() {
    nodes.push_back(TreeNode{-1, 0.0, -1, -1, majority_label(counts)});
    return static_cast<int>(nodes.size()) - 1;
  };

  bool pure = false;
  for (int c : counts) {
    if (c == static_cast<int>(idx.size())) pure = true;
  }
  if (pure || static_cast<int>(idx.size()) < params.min_samples_split ||
      depth >= params.max_depth) {
    return make_leaf();
  }

  std::vector<int> feats = select();
  auto split = best_split(ds, idx, feats);
  if (!split) return make_leaf();

  std::vector<int> left_idx, right_idx;
  left_idx.reserve(idx.size());
  right_idx.reserve(idx.size());
  for (int i : idx) {
    if (ds[static_cast<size_t>(i)].scan.channel(split->feature) < split->threshold) {
      left_idx.push_back(i);
    } else {
      right_idx.push_back(i);
    }
  }

  int node = static_cast<int>(nodes.size());
  nodes.push_back(TreeNode{split->feature, split->threshold, -1, -1, Command::stop});
  int left = build_node(ds, left_idx, depth + 1, params, select, nodes);
  int right = build_node(ds, right_idx, depth + 1, params, select, nodes);
  nodes[static_cast<size_t>(node)].left = left;
  nodes[static_cast<size_t>(node)].right = right;
  return node;
}

std::vector<int> all_features() { return {0, 1, 2, 3}; }

TreeModel fit_tree_on(const Dataset& ds, const std::vector<int>& idx,
                      const TreeParams& params, const FeatureSelector& select) {
  TreeModel model;
  model.params = params;
  std::vector<int> root_idx = idx;
  build_node(ds, root_idx, 0, params, select, model.nodes);
  return model;
}

}  // namespace

Command TreeModel::predict(const ScanVector& scan) const {
  int at = 0;
  for (;;) {
    const TreeNode& node = nodes[static_cast<size_t>(at)];
    if (node.is_leaf()) return node.label;
    at = scan.channel(node.feature) < node.threshold ? node.left : node.right;
  }
}

TreeModel fit_tree(const Dataset& ds, const TreeParams& params) {
  if (ds.empty()) throw FitError(FitError::Kind::Empty, "fit_tree: empty dataset");
  std::vector<int> idx(ds.size());
  for (size_t i = 0; i < ds.size(); ++i) idx[i] = static_cast<int>(i);
  return fit_tree_on(ds, idx, params, all_features);
}

Command ForestModel::predict(const ScanVector& scan) const {
  std::array<int, kNumCommands> votes{};
  for (const auto& tree : trees) {
    votes[static_cast<size_t>(tree.predict(scan))]++;
  }
  int best_c = 0;
  for (int c = 1; c < kNumCommands; ++c) {
    if (votes[static_cast<size_t>(c)] > votes[static_cast<size_t>(best_c)]) best_c = c;
  }
  return static_cast<Command>(best_c);
}

ForestModel fit_forest(const Dataset& ds, const ForestParams& params, uint64_t seed) {
  if (ds.empty()) throw FitError(FitError::Kind::Empty, "fit_forest: empty dataset");
  ForestModel model;
  model.params = params;
  model.seed = seed;
  model.trees.reserve(static_cast<size_t>(params.n_trees));

  int n = static_cast<int>(ds.size());
  for (int t = 0; t < params.n_trees; ++t) {
    Rng rng(mix_seed(seed, static_cast<uint64_t>(t)));

    std::vector<int> idx(static_cast<size_t>(n));
    if (params.bootstrap) {
      for (auto& i : idx) i = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
    } else {
      for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    }

    FeatureSelector select;
    if (params.features_per_split >= kNumSensors) {
      select = all_features;
    } else {
      int fps = std::max(1, params.features_per_split);
      select = [&rng, fps]() {
        std::vector<int> pool{0, 1, 2, 3};
        std::vector<int> picked;
        picked.reserve(static_cast<size_t>(fps));
        for (int k = 0; k < fps; ++k) {
          size_t j = static_cast<size_t>(rng.next_below(pool.size()));
          picked.push_back(pool[j]);
          pool.erase(pool.begin() + static_cast<long>(j));
        }
        return picked;
      };
    }

    model.trees.push_back(fit_tree_on(ds, idx, params.tree, select));
  }
  return model;
}

Command KnnModel::predict(const ScanVector& scan) const {
  size_t n = samples.size();
  std::vector<std::pair<double, int>> dist(n);
  for (size_t i = 0; i < n; ++i) {
    double d2 = 0.0;
    for (int f = 0; f < kNumSensors; ++f) {
      double d = samples[i].scan.channel(f) - scan.channel(f);
      d2 += d * d;
    }
    dist[i] = {d2, static_cast<int>(i)};
  }
  size_t k = static_cast<size_t>(params.k);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());

  std::array<int, kNumCommands> votes{};
  std::array<int, kNumCommands> first_rank{};
  first_rank.fill(-1);
  for (size_t r = 0; r < k; ++r) {
    auto label = static_cast<size_t>(samples[static_cast<size_t>(dist[r].second)].label);
    votes[label]++;
    if (first_rank[label] < 0) first_rank[label] = static_cast<int>(r);
  }

  int best_c = -1;
  for (int c = 0; c < kNumCommands; ++c) {
    if (votes[static_cast<size_t>(c)] == 0) continue;
    if (best_c < 0 || votes[static_cast<size_t>(c)] > votes[static_cast<size_t>(best_c)] ||
        (votes[static_cast<size_t>(c)] == votes[static_cast<size_t>(best_c)] &&
         first_rank[static_cast<size_t>(c)] < first_rank[static_cast<size_t>(best_c)])) {
      best_c = c;
    }
  }
  return static_cast<Command>(best_c);
}

KnnModel fit_knn(const Dataset& ds, const KnnParams& params) {
  if (ds.empty()) throw FitError(FitError::Kind::Empty, "fit_knn: empty dataset");
  if (params.k < 1 || static_cast<size_t>(params.k) > ds.size()) {
    throw FitError(FitError::Kind::KTooLarge,
                   "fit_knn: k=" + std::to_string(params.k) + " exceeds dataset size " +
                       std::to_string(ds.size()));
  }
  return KnnModel{params, ds};
}

Command predict(const AnyModel& model, const ScanVector& scan) {
  return std::visit([&](const auto& m) { return m.predict(scan); }, model);
}

const char* algorithm_name(const AnyModel& model) {
  if (std::holds_alternative<TreeModel>(model)) return "tree";
  if (std::holds_alternative<ForestModel>(model)) return "forest";
  return "knn";
}

double accuracy(const std::function<Command(const ScanVector&)>& predict_fn,
                const Dataset& ds) {
  if (ds.empty()) return 0.0;
  size_t correct = 0;
  for (const auto& s : ds) {
    if (predict_fn(s.scan) == s.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

double benchmark_fit(const std::string& algo, const Dataset& train, int repetitions,
                     uint64_t seed) {
  if (repetitions < 1) repetitions = 1;
  std::vector<double> times;
  times.reserve(static_cast<size_t>(repetitions));
  std::string reference;
  for (int rep = 0; rep < repetitions; ++rep) {
    auto t0 = std::chrono::steady_clock::now();
    AnyModel model = [&]() -> AnyModel {
      if (algo == "tree") return fit_tree(train);
      if (algo == "forest") return fit_forest(train, {}, seed);
      if (algo == "knn") return fit_knn(train);
      throw std::invalid_argument("benchmark_fit: unknown algorithm \"" + algo + "\"");
    }();
    auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(t1 - t0).count());

    std::string serialized = model_to_json(model);
    if (rep == 0) {
      reference = std::move(serialized);
    } else if (serialized != reference) {
      throw std::logic_error("benchmark_fit: fit is not reproducible across repetitions");
    }
  }
  std::sort(times.begin(), times.end());
  size_t n = times.size();
  if (n % 2 == 1) return times[n / 2];
  return 0.5 * (times[n / 2 - 1] + times[n / 2]);
}

namespace {

using nlohmann::json;

json label_order_json() {
  json arr = json::array();
  for (int c = 0; c < kNumCommands; ++c) arr.push_back(command_name(static_cast<Command>(c)));
  return arr;
}

json nodes_to_json(const std::vector<TreeNode>& nodes) {
  json arr = json::array();
  for (const auto& n : nodes) {
    if (n.is_leaf()) {
      arr.push_back(json{{"label", command_name(n.label)}});
    } else {
      arr.push_back(json{{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right}});
    }
  }
  return arr;
}

std::vector<TreeNode> nodes_from_json(const json& arr) {
  std::vector<TreeNode> nodes;
  nodes.reserve(arr.size());
  for (const auto& j : arr) {
    TreeNode n;
    if (j.contains("label")) {
      auto label = command_from_name(j.at("label").get<std::string>());
      if (!label) throw std::runtime_error("model: unknown leaf label");
      n.label = *label;
    } else {
      n.feature = j.at("feature").get<int>();
      n.threshold = j.at("threshold").get<double>();
      n.left = j.at("left").get<int>();
      n.right = j.at("right").get<int>();
      if (n.feature < 0 || n.feature >= kNumSensors) {
        throw std::runtime_error("model: feature index out of range");
      }
    }
    nodes.push_back(n);
  }
  if (nodes.empty()) throw std::runtime_error("model: empty node list");
  for (const auto& n : nodes) {
    if (n.is_leaf()) continue;
    if (n.left < 0 || n.right < 0 || n.left >= static_cast<int>(nodes.size()) ||
        n.right >= static_cast<int>(nodes.size())) {
      throw std::runtime_error("model: child index out of range");
    }
  }
  return nodes;
}

json tree_params_json(const TreeParams& p) {
  return json{{"max_depth", p.max_depth}, {"min_samples_split", p.min_samples_split}};
}

TreeParams tree_params_from(const json& j) {
  TreeParams p;
  p.max_depth = j.at("max_depth").get<int>();
  p.min_samples_split = j.at("min_samples_split").get<int>();
  return p;
}

}  // namespace

std::string model_to_json(const AnyModel& model) {
  json j;
  j["algorithm"] = algorithm_name(model);
  j["label_order"] = label_order_json();
  if (const auto* tree = std::get_if<TreeModel>(&model)) {
    j["params"] = tree_params_json(tree->params);
    j["nodes"] = nodes_to_json(tree->nodes);
  } else if (const auto* forest = std::get_if<ForestModel>(&model)) {
    json p = tree_params_json(forest->params.tree);
    p["n_trees"] = forest->params.n_trees;
    p["features_per_split"] = forest->params.features_per_split;
    p["bootstrap"] = forest->params.bootstrap;
    j["params"] = p;
    j["seed"] = forest->seed;
    json trees = json::array();
    for (const auto& t : forest->trees) trees.push_back(nodes_to_json(t.nodes));
    j["trees"] = trees;
  } else {
    const auto& knn = std::get<KnnModel>(model);
    j["params"] = json{{"k", knn.params.k}};
    json samples = json::array();
    for (const auto& s : knn.samples) {
      samples.push_back(json::array({s.scan.front, s.scan.back, s.scan.left, s.scan.right,
                                     command_name(s.label)}));
    }
    j["samples"] = samples;
  }
  return j.dump(2) + "\n";
}

AnyModel model_from_json(const std::string& text) {
  // json exceptions do not derive from std::runtime_error; callers are
  // promised the latter, so translate here.
  try {
    json j = json::parse(text);
    std::string algo = j.at("algorithm").get<std::string>();
    if (algo == "tree") {
      TreeModel m;
      m.params = tree_params_from(j.at("params"));
      m.nodes = nodes_from_json(j.at("nodes"));
      return m;
    }
    if (algo == "forest") {
      ForestModel m;
      const json& p = j.at("params");
      m.params.tree = tree_params_from(p);
      m.params.n_trees = p.at("n_trees").get<int>();
      m.params.features_per_split = p.at("features_per_split").get<int>();
      m.params.bootstrap = p.at("bootstrap").get<bool>();
      m.seed = j.at("seed").get<uint64_t>();
      for (const auto& t : j.at("trees")) {
        TreeModel tree;
        tree.params = m.params.tree;
        tree.nodes = nodes_from_json(t);
        m.trees.push_back(std::move(tree));
      }
      if (m.trees.empty()) throw std::runtime_error("model: forest with no trees");
      return m;
    }
    if (algo == "knn") {
      KnnModel m;
      m.params.k = j.at("params").at("k").get<int>();
      for (const auto& s : j.at("samples")) {
        LabeledSample sample;
        for (int f = 0; f < kNumSensors; ++f) {
          sample.scan.set_channel(f, s.at(static_cast<size_t>(f)).get<double>());
        }
        auto label = command_from_name(s.at(4).get<std::string>());
        if (!label) throw std::runtime_error("model: unknown sample label");
        sample.label = *label;
        m.samples.push_back(sample);
      }
      if (m.samples.empty()) throw std::runtime_error("model: knn with no samples");
      if (m.params.k < 1 || static_cast<size_t>(m.params.k) > m.samples.size()) {
        throw std::runtime_error("model: k out of range");
      }
      return m;
    }
    throw std::runtime_error("model: unknown algorithm \"" + algo + "\"");
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("model JSON: ") + e.what());
  }
}

AnyModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

void save_model(const AnyModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << model_to_json(model);
}

}  // namespace botsim
