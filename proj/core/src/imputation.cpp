#include "rankforge/imputation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rankforge/error.hpp"
#include "rankforge/log.hpp"
#include "rankforge/util.hpp"

namespace rankforge {

namespace {

int as_label(double value) { return value >= 0.5 ? 1 : 0; }

// Column mode over observed cells; ties go to 1.
int column_mode(const TypologyMatrix& matrix, std::size_t feature) {
  std::size_t ones = 0, zeros = 0;
  for (const auto& row : matrix.cells) {
    double v = row[feature];
    if (is_missing_cell(v)) continue;
    if (as_label(v) == 1) {
      ++ones;
    } else {
      ++zeros;
    }
  }
  if (ones == 0 && zeros == 0) {
    throw ValidationError("imputation: feature '" +
                          matrix.feature_ids[feature] +
                          "' has no observed cells; crop the matrix first");
  }
  return ones >= zeros ? 1 : 0;
}

struct ClassTreeNode {
  int feature = -1;  // -1 marks a leaf
  int left = -1;
  int right = -1;
  int label = 1;
};

struct ClassTree {
  std::vector<ClassTreeNode> nodes;

  int predict(const std::vector<double>& row) const {
    int node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
      const auto& n = nodes[static_cast<std::size_t>(node)];
      node = row[static_cast<std::size_t>(n.feature)] < 0.5 ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].label;
  }
};

double gini(std::size_t ones, std::size_t total) {
  if (total == 0) return 0.0;
  double p = static_cast<double>(ones) / static_cast<double>(total);
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

// Grows one classification tree on bootstrap sample indices. Predictor
// values come from the current working matrix; splits are binary at 0.5.
class ClassTreeBuilder {
 public:
  ClassTreeBuilder(const std::vector<std::vector<double>>& cells,
                   const std::vector<std::size_t>& rows,
                   const std::vector<int>& labels,
                   const std::vector<std::size_t>& predictors,
                   std::size_t mtry, Rng& rng)
      : cells_(cells),
        rows_(rows),
        labels_(labels),
        mtry_(mtry),
        rng_(rng),
        scratch_(predictors) {}

  ClassTree build() {
    ClassTree tree;
    std::vector<std::size_t> all(rows_.size());
    std::iota(all.begin(), all.end(), 0);
    grow(tree, all);
    return tree;
  }

 private:
  // sample positions index into rows_/labels_
  int grow(ClassTree& tree, const std::vector<std::size_t>& samples) {
    std::size_t ones = 0;
    for (std::size_t s : samples) {
      ones += static_cast<std::size_t>(labels_[s]);
    }
    int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    bool pure = ones == 0 || ones == samples.size();
    std::size_t best_feature = 0;
    double best_gain = 0.0;
    bool found = false;
    if (!pure) {
      double parent = gini(ones, samples.size());
      // partial Fisher-Yates over the predictor list
      std::size_t pool = scratch_.size();
      for (std::size_t i = 0; i < mtry_ && i < pool; ++i) {
        std::size_t j = i + rng_.next_below(pool - i);
        std::swap(scratch_[i], scratch_[j]);
        std::size_t feature = scratch_[i];
        std::size_t left_n = 0, left_ones = 0;
        for (std::size_t s : samples) {
          if (cells_[rows_[s]][feature] < 0.5) {
            ++left_n;
            left_ones += static_cast<std::size_t>(labels_[s]);
          }
        }
        std::size_t right_n = samples.size() - left_n;
        if (left_n == 0 || right_n == 0) continue;
        std::size_t right_ones = ones - left_ones;
        double weighted =
            (static_cast<double>(left_n) * gini(left_ones, left_n) +
             static_cast<double>(right_n) * gini(right_ones, right_n)) /
            static_cast<double>(samples.size());
        double gain = parent - weighted;
        if (gain > 1e-12 &&
            (!found || gain > best_gain ||
             (gain == best_gain && feature < best_feature))) {
          found = true;
          best_gain = gain;
          best_feature = feature;
        }
      }
    }

    if (!found) {
      auto& leaf = tree.nodes[static_cast<std::size_t>(node_id)];
      leaf.feature = -1;
      leaf.label = ones * 2 >= samples.size() ? 1 : 0;
      return node_id;
    }

    std::vector<std::size_t> left, right;
    for (std::size_t s : samples) {
      if (cells_[rows_[s]][best_feature] < 0.5) {
        left.push_back(s);
      } else {
        right.push_back(s);
      }
    }
    int left_id = grow(tree, left);
    int right_id = grow(tree, right);
    auto& node = tree.nodes[static_cast<std::size_t>(node_id)];
    node.feature = static_cast<int>(best_feature);
    node.left = left_id;
    node.right = right_id;
    return node_id;
  }

  const std::vector<std::vector<double>>& cells_;
  const std::vector<std::size_t>& rows_;
  const std::vector<int>& labels_;
  std::size_t mtry_;
  Rng& rng_;
  std::vector<std::size_t> scratch_;
};

}  // namespace

ImputationResult impute_missforest(const TypologyMatrix& matrix,
                                   const MissForestOptions& options) {
  if (matrix.language_count() < 2) {
    throw ValidationError("impute_missforest: need at least 2 languages");
  }
  if (options.max_iters < 1 || options.trees_per_forest < 1) {
    throw ValidationError("impute_missforest: max_iters and trees_per_forest "
                          "must be >= 1");
  }

  ImputationResult result;
  result.report.method = "missforest";
  result.report.missing_before = matrix.missing_fraction();
  result.matrix = matrix;

  const std::size_t n_feats = matrix.feature_count();

  // masked cells per feature
  std::vector<std::vector<std::size_t>> missing_rows(n_feats);
  std::size_t total_missing = 0;
  for (std::size_t f = 0; f < n_feats; ++f) {
    for (std::size_t l = 0; l < matrix.language_count(); ++l) {
      if (is_missing_cell(matrix.cells[l][f])) missing_rows[f].push_back(l);
    }
    total_missing += missing_rows[f].size();
  }
  if (total_missing == 0) {
    result.report.missing_after = 0.0;
    return result;  // fixed point
  }

  TypologyMatrix& work = result.matrix;

  // initialization: column mode
  for (std::size_t f = 0; f < n_feats; ++f) {
    if (missing_rows[f].empty()) continue;
    int mode = column_mode(matrix, f);
    for (std::size_t l : missing_rows[f]) {
      work.cells[l][f] = static_cast<double>(mode);
    }
  }

  // visit order: ascending missingness, then feature index
  std::vector<std::size_t> order;
  for (std::size_t f = 0; f < n_feats; ++f) {
    if (!missing_rows[f].empty()) order.push_back(f);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return missing_rows[a].size() < missing_rows[b].size();
                   });

  std::size_t mtry = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(n_feats > 1 ? n_feats - 1 : 1))));

  std::vector<std::size_t> predictors_all(n_feats);
  std::iota(predictors_all.begin(), predictors_all.end(), 0);

  double prev_change = std::numeric_limits<double>::infinity();
  TypologyMatrix before = work;

  for (int iter = 1; iter <= options.max_iters; ++iter) {
    before = work;
    for (std::size_t f : order) {
      std::vector<std::size_t> observed;
      std::vector<int> labels;
      for (std::size_t l = 0; l < matrix.language_count(); ++l) {
        if (!is_missing_cell(matrix.cells[l][f])) {
          observed.push_back(l);
          labels.push_back(as_label(matrix.cells[l][f]));
        }
      }
      if (observed.size() < 2) {
        int mode = column_mode(matrix, f);
        for (std::size_t l : missing_rows[f]) {
          work.cells[l][f] = static_cast<double>(mode);
        }
        if (iter == 1) {
          std::string msg = "impute_missforest: feature '" +
                            matrix.feature_ids[f] +
                            "' observed in fewer than 2 languages; using "
                            "column mode";
          log_warn(msg);
          result.report.warnings.push_back(msg);
        }
        continue;
      }

      std::vector<std::size_t> predictors;
      predictors.reserve(n_feats - 1);
      for (std::size_t g = 0; g < n_feats; ++g) {
        if (g != f) predictors.push_back(g);
      }
      if (predictors.empty()) {
        int mode = column_mode(matrix, f);
        for (std::size_t l : missing_rows[f]) {
          work.cells[l][f] = static_cast<double>(mode);
        }
        continue;
      }

      std::uint64_t feature_hash = fnv1a64(matrix.feature_ids[f]);
      const std::size_t n_trees =
          static_cast<std::size_t>(options.trees_per_forest);
      // votes[m][t] filled independently per tree; no reduction races
      std::vector<std::vector<int>> votes(
          missing_rows[f].size(), std::vector<int>(n_trees, 0));
      parallel_for(n_trees, options.threads, [&](std::size_t t) {
        Rng rng(mix_seed({options.seed, feature_hash,
                          static_cast<std::uint64_t>(iter), t}));
        std::vector<std::size_t> bootstrap(observed.size());
        std::vector<int> boot_labels(observed.size());
        for (std::size_t i = 0; i < observed.size(); ++i) {
          std::size_t pick = rng.next_below(observed.size());
          bootstrap[i] = observed[pick];
          boot_labels[i] = labels[pick];
        }
        ClassTreeBuilder builder(work.cells, bootstrap, boot_labels,
                                 predictors, mtry, rng);
        ClassTree tree = builder.build();
        for (std::size_t m = 0; m < missing_rows[f].size(); ++m) {
          votes[m][t] = tree.predict(work.cells[missing_rows[f][m]]);
        }
      });
      for (std::size_t m = 0; m < missing_rows[f].size(); ++m) {
        std::size_t ones = 0;
        for (int v : votes[m]) ones += static_cast<std::size_t>(v);
        work.cells[missing_rows[f][m]][f] =
            ones * 2 >= n_trees ? 1.0 : 0.0;
      }
    }

    std::size_t changed = 0;
    for (std::size_t f : order) {
      for (std::size_t l : missing_rows[f]) {
        if (work.cells[l][f] != before.cells[l][f]) ++changed;
      }
    }
    double change_fraction =
        static_cast<double>(changed) / static_cast<double>(total_missing);
    result.report.iterations = iter;
    if (change_fraction > prev_change) {
      // difference increased: keep the previous pass
      result.matrix = before;
      result.report.missing_after = result.matrix.missing_fraction();
      return result;
    }
    if (change_fraction == 0.0) break;
    prev_change = change_fraction;
  }

  result.report.missing_after = result.matrix.missing_fraction();
  return result;
}

ImputationResult impute_knn(const TypologyMatrix& matrix, int k) {
  if (k < 1) throw ValidationError("impute_knn: k must be >= 1");
  if (matrix.language_count() < static_cast<std::size_t>(k) + 1) {
    throw ValidationError("impute_knn: need at least k+1 languages (k=" +
                          std::to_string(k) + ", have " +
                          std::to_string(matrix.language_count()) + ")");
  }

  ImputationResult result;
  result.report.method = "knn";
  result.report.missing_before = matrix.missing_fraction();
  result.report.iterations = 1;
  result.matrix = matrix;

  const std::size_t n_langs = matrix.language_count();
  const std::size_t n_feats = matrix.feature_count();

  for (std::size_t l = 0; l < n_langs; ++l) {
    for (std::size_t f = 0; f < n_feats; ++f) {
      if (!is_missing_cell(matrix.cells[l][f])) continue;

      // candidates: languages with this feature observed and at least one
      // mutually observed feature; distance = mean absolute disagreement
      std::vector<std::pair<double, std::size_t>> candidates;
      for (std::size_t m = 0; m < n_langs; ++m) {
        if (m == l || is_missing_cell(matrix.cells[m][f])) continue;
        std::size_t shared = 0;
        double disagreement = 0.0;
        for (std::size_t g = 0; g < n_feats; ++g) {
          double a = matrix.cells[l][g];
          double b = matrix.cells[m][g];
          if (is_missing_cell(a) || is_missing_cell(b)) continue;
          ++shared;
          disagreement += std::fabs(a - b);
        }
        if (shared == 0) continue;
        candidates.emplace_back(disagreement / static_cast<double>(shared), m);
      }

      if (candidates.empty()) {
        int mode = column_mode(matrix, f);
        result.matrix.cells[l][f] = static_cast<double>(mode);
        std::string msg = "impute_knn: no neighbor shares observed features "
                          "with '" + matrix.language_codes[l] +
                          "' for feature '" + matrix.feature_ids[f] +
                          "'; using column mode";
        log_warn(msg);
        result.report.warnings.push_back(msg);
        continue;
      }

      std::sort(candidates.begin(), candidates.end(),
                [&](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  return matrix.language_codes[a.second] <
                         matrix.language_codes[b.second];
                });
      std::size_t take =
          std::min<std::size_t>(static_cast<std::size_t>(k), candidates.size());
      double sum = 0.0;
      for (std::size_t i = 0; i < take; ++i) {
        sum += matrix.cells[candidates[i].second][f];
      }
      double mean = sum / static_cast<double>(take);
      result.matrix.cells[l][f] = mean >= 0.5 ? 1.0 : 0.0;
    }
  }

  result.report.missing_after = result.matrix.missing_fraction();
  return result;
}

}  // namespace rankforge
