#ifndef RANKFORGE_GBDT_HPP
#define RANKFORGE_GBDT_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rankforge/config.hpp"

namespace rankforge {

// feature < 0 marks a leaf; navigation is value < threshold -> left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // root at index 0
  // split gain per feature index, accumulated over this tree's splits
  std::map<int, double> feature_gain;

  double predict(std::span<const double> row) const;
  double total_gain() const;
  std::size_t leaf_count() const;
};

struct TreeParams {
  int max_leaves = 31;
  int min_samples_leaf = 1;
  double lambda_reg = 1.0;
};

struct TrainParams {
  int num_rounds = 100;
  double learning_rate = 0.1;
  double sigma = 1.0;
  int max_leaves = 31;
  int min_samples_leaf = 1;
  double lambda_reg = 1.0;
  std::uint64_t seed = 42;
  int p = 5;

  TreeParams tree_params() const {
    return TreeParams{max_leaves, min_samples_leaf, lambda_reg};
  }
};

// One ranking group ready for the booster: relevance labels plus one feature
// row per candidate, in the same order.
struct TrainingGroup {
  std::vector<int> relevance;
  std::vector<std::vector<double>> rows;
};

struct GbdtModel {
  std::vector<RegressionTree> trees;
  double learning_rate = 0.1;
  double base_score = 0.0;
  std::vector<std::string> feature_names;
  std::map<std::string, double> gain_table;
  FeatureConfig config;
  TrainParams params;
};

// Newton tree on (gradients, hessians): leaf-wise best-first growth, split
// gain G_L^2/(H_L+l) + G_R^2/(H_R+l) - G_P^2/(H_P+l), leaf value -G/(H+l).
// Rows with no positive-gain split collapse to a single leaf.
RegressionTree fit_regression_tree(
    const std::vector<std::vector<double>>& rows, std::span<const double> gradients,
    std::span<const double> hessians, const TreeParams& params);

// Boosting loop over ranking groups. Gradient computation may run on
// several threads; outputs are identical for every thread count.
GbdtModel train(const std::vector<TrainingGroup>& groups,
                const std::vector<std::string>& feature_names,
                const TrainParams& params, const FeatureConfig& config = {},
                int threads = 1);

double predict_row(const GbdtModel& model, std::span<const double> row);
std::vector<double> predict(const GbdtModel& model,
                            const std::vector<std::vector<double>>& rows);

// Throws with the symmetric difference when names don't match the model.
void check_feature_names(const GbdtModel& model,
                         const std::vector<std::string>& names);

// Descending score, ties by ascending code.
std::vector<std::string> rank_candidates(
    std::vector<std::pair<std::string, double>> scored);

std::vector<std::string> rank_sources(
    const GbdtModel& model,
    const std::vector<std::pair<std::string, std::vector<double>>>& candidates);

// Per-feature gain summed within each model, averaged across models,
// sorted descending. top_k = 0 keeps all features.
std::vector<std::pair<std::string, double>> feature_importance(
    const std::vector<GbdtModel>& models, std::size_t top_k = 0);

std::string serialize_model(const GbdtModel& model);
GbdtModel deserialize_model(std::string_view json_text);

}  // namespace rankforge

#endif  // RANKFORGE_GBDT_HPP
