// Brute-force reference implementations used by the unit tests and the
// acceptance suite. Deliberately written from the definitions, not the
// production code path; the impurity arithmetic keeps the same expression
// shape so float comparisons are exact.
#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "botsim/learners.hpp"

namespace botsim::oracle {

inline std::optional<SplitCandidate> exhaustive_split(const Dataset& ds,
                                                      const std::vector<int>& idx,
                                                      std::vector<int> features) {
  int n = static_cast<int>(idx.size());
  if (n < 2) return std::nullopt;

  auto impurity = [](const std::array<int, kNumCommands>& counts, int total) {
    double sum = 0.0;
    for (int c : counts) {
      double p = static_cast<double>(c) / static_cast<double>(total);
      sum += p * p;
    }
    return 1.0 - sum;
  };

  std::array<int, kNumCommands> all{};
  for (int i : idx) all[static_cast<size_t>(ds[static_cast<size_t>(i)].label)]++;
  double parent = impurity(all, n);
  if (parent == 0.0) return std::nullopt;

  std::sort(features.begin(), features.end());
  std::optional<SplitCandidate> best;
  for (int f : features) {
    std::vector<double> values;
    for (int i : idx) values.push_back(ds[static_cast<size_t>(i)].scan.channel(f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (size_t v = 0; v + 1 < values.size(); ++v) {
      double thr = (values[v] + values[v + 1]) / 2.0;
      std::array<int, kNumCommands> lc{}, rc{};
      int nl = 0, nr = 0;
      for (int i : idx) {
        const auto& s = ds[static_cast<size_t>(i)];
        if (s.scan.channel(f) < thr) {
          lc[static_cast<size_t>(s.label)]++;
          ++nl;
        } else {
          rc[static_cast<size_t>(s.label)]++;
          ++nr;
        }
      }
      double score = (static_cast<double>(nl) * impurity(lc, nl) +
                      static_cast<double>(nr) * impurity(rc, nr)) /
                     static_cast<double>(n);
      if (!best || score < best->score) best = SplitCandidate{f, thr, score};
    }
  }
  if (best && best->score < parent) return best;
  return std::nullopt;
}

inline Command full_sort_knn(const Dataset& train, int k, const ScanVector& q) {
  std::vector<std::pair<double, int>> order;
  for (size_t i = 0; i < train.size(); ++i) {
    double d2 = 0.0;
    for (int c = 0; c < kNumSensors; ++c) {
      double d = train[i].scan.channel(c) - q.channel(c);
      d2 += d * d;
    }
    order.emplace_back(d2, static_cast<int>(i));
  }
  std::sort(order.begin(), order.end());

  std::array<int, kNumCommands> votes{};
  std::array<int, kNumCommands> first_rank{};
  first_rank.fill(-1);
  for (int r = 0; r < k; ++r) {
    int label = static_cast<int>(
        train[static_cast<size_t>(order[static_cast<size_t>(r)].second)].label);
    votes[static_cast<size_t>(label)]++;
    if (first_rank[static_cast<size_t>(label)] < 0) first_rank[static_cast<size_t>(label)] = r;
  }
  int best = -1;
  for (int c = 0; c < kNumCommands; ++c) {
    if (votes[static_cast<size_t>(c)] == 0) continue;
    if (best < 0 || votes[static_cast<size_t>(c)] > votes[static_cast<size_t>(best)] ||
        (votes[static_cast<size_t>(c)] == votes[static_cast<size_t>(best)] &&
         first_rank[static_cast<size_t>(c)] < first_rank[static_cast<size_t>(best)])) {
      best = c;
    }
  }
  return static_cast<Command>(best);
}

}  // namespace botsim::oracle
