#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "botsim/dataset.hpp"

namespace botsim {

class FitError : public std::runtime_error {
 public:
  enum class Kind { Empty, KTooLarge };
  FitError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind(kind) {}
  Kind kind;
};

// Gini impurity over the five command classes; 0 for a pure set, at most
// 1 - 1/5 = 0.8.
double gini(const std::array<int, kNumCommands>& counts, int total);

struct SplitCandidate {
  int feature{0};
  double threshold{0.0};
  double score{0.0};  // child-count-weighted Gini of the partition
};

// Exhausts midpoints between consecutive distinct sorted values of each
// allowed feature and returns the candidate with the lowest weighted child
// Gini. Ties go to the lowest feature index, then the lowest threshold.
// Empty when the node is pure or no candidate strictly improves on the
// parent impurity. `features` may arrive in any order.
std::optional<SplitCandidate> best_split(const Dataset& ds, std::span<const int> idx,
                                         std::span<const int> features);

struct TreeParams {
  int max_depth{16};
  int min_samples_split{2};
};

struct TreeNode {
  int feature{-1};  // -1 marks a leaf
  double threshold{0.0};
  int left{-1};
  int right{-1};
  Command label{Command::stop};

  bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
  TreeParams params{};
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  // value < threshold descends left.
  Command predict(const ScanVector& scan) const;
};

// Recursive CART. Stops on purity, min_samples_split, max_depth, or when no
// split strictly reduces impurity; leaves take the majority label with ties
// broken by the Command order. Throws FitError{Empty} on an empty dataset.
TreeModel fit_tree(const Dataset& ds, const TreeParams& params = {});

struct ForestParams {
  int n_trees{100};
  int features_per_split{2};  // >= 4 means every split sees all features
  bool bootstrap{true};
  TreeParams tree{};
};

struct ForestModel {
  ForestParams params{};
  uint64_t seed{0};
  std::vector<TreeModel> trees;

  // Plurality vote, ties broken by the Command order.
  Command predict(const ScanVector& scan) const;
};

// Bagging over fit_tree: per-tree streams are derived from the master seed,
// bootstrap resamples n of n with replacement, and each split draws
// features_per_split distinct features. With n_trees=1, bootstrap off and
// all features per split this reproduces fit_tree exactly.
ForestModel fit_forest(const Dataset& ds, const ForestParams& params = {},
                       uint64_t seed = 0);

struct KnnParams {
  int k{5};
};

struct KnnModel {
  KnnParams params{};
  Dataset samples;

  // Euclidean metric; neighbor ties at equal distance go to the lower
  // training index, vote ties to the tied class with the nearest member.
  Command predict(const ScanVector& scan) const;
};

// Stores the training set. Throws FitError{Empty} / FitError{KTooLarge}.
KnnModel fit_knn(const Dataset& ds, const KnnParams& params = {});

using AnyModel = std::variant<TreeModel, ForestModel, KnnModel>;

Command predict(const AnyModel& model, const ScanVector& scan);
const char* algorithm_name(const AnyModel& model);

// Fraction of ds the predictor labels correctly.
double accuracy(const std::function<Command(const ScanVector&)>& predict_fn,
                const Dataset& ds);

// Median wall-clock fit time over `repetitions` runs; algo is one of
// "tree" | "forest" | "knn" with default parameters. Every repetition must
// produce a byte-identical model or the benchmark throws.
double benchmark_fit(const std::string& algo, const Dataset& train,
                     int repetitions = 5, uint64_t seed = 0);

// JSON persistence; a load/save round trip reproduces identical predictions.
std::string model_to_json(const AnyModel& model);
AnyModel model_from_json(const std::string& text);  // throws std::runtime_error
AnyModel load_model(const std::string& path);
void save_model(const AnyModel& model, const std::string& path);

}  // namespace botsim
