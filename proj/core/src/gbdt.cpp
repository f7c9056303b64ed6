#include "rankforge/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

#include <json.hpp>

#include "rankforge/error.hpp"
#include "rankforge/lambdarank.hpp"
#include "rankforge/util.hpp"
#include "rankforge/version.hpp"

namespace rankforge {

double RegressionTree::predict(std::span<const double> row) const {
  std::size_t node = 0;
  while (nodes[node].feature >= 0) {
    const TreeNode& n = nodes[node];
    node = static_cast<std::size_t>(
        row[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left
                                                               : n.right);
  }
  return nodes[node].value;
}

double RegressionTree::total_gain() const {
  double sum = 0.0;
  for (const auto& [feature, gain] : feature_gain) sum += gain;
  return sum;
}

std::size_t RegressionTree::leaf_count() const {
  std::size_t count = 0;
  for (const auto& node : nodes) {
    if (node.feature < 0) ++count;
  }
  return count;
}

namespace {

double leaf_value(double grad_sum, double hess_sum, double lambda_reg) {
  double denom = hess_sum + lambda_reg;
  if (denom <= 0.0) return 0.0;
  return -grad_sum / denom;
}

double gain_term(double grad_sum, double hess_sum, double lambda_reg) {
  double denom = hess_sum + lambda_reg;
  if (denom <= 0.0) return 0.0;
  return grad_sum * grad_sum / denom;
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
};

SplitChoice best_split(const std::vector<std::vector<double>>& rows,
                       std::span<const double> gradients,
                       std::span<const double> hessians,
                       const std::vector<std::size_t>& samples,
                       const TreeParams& params) {
  SplitChoice choice;
  if (samples.size() < 2 * static_cast<std::size_t>(params.min_samples_leaf)) {
    return choice;
  }
  const std::size_t n_features = rows[samples[0]].size();

  double parent_g = 0.0, parent_h = 0.0;
  for (std::size_t s : samples) {
    parent_g += gradients[s];
    parent_h += hessians[s];
  }
  double parent_term = gain_term(parent_g, parent_h, params.lambda_reg);

  std::vector<std::size_t> sorted = samples;
  for (std::size_t f = 0; f < n_features; ++f) {
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](std::size_t a, std::size_t b) {
                       return rows[a][f] < rows[b][f];
                     });
    double left_g = 0.0, left_h = 0.0;
    for (std::size_t k = 1; k < sorted.size(); ++k) {
      left_g += gradients[sorted[k - 1]];
      left_h += hessians[sorted[k - 1]];
      double prev = rows[sorted[k - 1]][f];
      double next = rows[sorted[k]][f];
      if (prev == next) continue;
      if (k < static_cast<std::size_t>(params.min_samples_leaf) ||
          sorted.size() - k < static_cast<std::size_t>(params.min_samples_leaf)) {
        continue;
      }
      double gain = gain_term(left_g, left_h, params.lambda_reg) +
                    gain_term(parent_g - left_g, parent_h - left_h,
                              params.lambda_reg) -
                    parent_term;
      double threshold = prev + (next - prev) / 2.0;
      bool better = gain > choice.gain + 1e-12;
      bool tie = std::fabs(gain - choice.gain) <= 1e-12 && choice.found &&
                 (static_cast<int>(f) < choice.feature ||
                  (static_cast<int>(f) == choice.feature &&
                   threshold < choice.threshold));
      if (gain > 1e-12 && (!choice.found || better || tie)) {
        choice.found = true;
        choice.feature = static_cast<int>(f);
        choice.threshold = threshold;
        choice.gain = gain;
      }
    }
  }

  if (choice.found) {
    for (std::size_t s : samples) {
      if (rows[s][static_cast<std::size_t>(choice.feature)] <
          choice.threshold) {
        choice.left.push_back(s);
      } else {
        choice.right.push_back(s);
      }
    }
  }
  return choice;
}

struct PendingSplit {
  int node_id;
  int order;  // creation order, breaks gain ties deterministically
  SplitChoice choice;
};

struct PendingCompare {
  bool operator()(const PendingSplit& a, const PendingSplit& b) const {
    if (a.choice.gain != b.choice.gain) return a.choice.gain < b.choice.gain;
    return a.order > b.order;
  }
};

}  // namespace

RegressionTree fit_regression_tree(const std::vector<std::vector<double>>& rows,
                                   std::span<const double> gradients,
                                   std::span<const double> hessians,
                                   const TreeParams& params) {
  if (rows.empty()) {
    throw ValidationError("fit_regression_tree: no samples");
  }
  if (rows.size() != gradients.size() || rows.size() != hessians.size()) {
    throw ValidationError("fit_regression_tree: rows/gradients/hessians "
                          "lengths differ");
  }
  if (params.max_leaves < 1 || params.min_samples_leaf < 1) {
    throw ValidationError("fit_regression_tree: max_leaves and "
                          "min_samples_leaf must be >= 1");
  }

  RegressionTree tree;
  std::vector<std::size_t> all(rows.size());
  std::iota(all.begin(), all.end(), 0);

  double g = 0.0, h = 0.0;
  for (std::size_t s : all) {
    g += gradients[s];
    h += hessians[s];
  }
  tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1,
                                leaf_value(g, h, params.lambda_reg)});

  std::priority_queue<PendingSplit, std::vector<PendingSplit>, PendingCompare>
      queue;
  int order = 0;
  auto consider = [&](int node_id, const std::vector<std::size_t>& samples) {
    SplitChoice choice = best_split(rows, gradients, hessians, samples, params);
    if (choice.found) {
      queue.push(PendingSplit{node_id, order++, std::move(choice)});
    }
  };
  consider(0, all);

  int leaves = 1;
  while (!queue.empty() && leaves < params.max_leaves) {
    PendingSplit split = queue.top();
    queue.pop();
    SplitChoice& c = split.choice;

    double lg = 0.0, lh = 0.0;
    for (std::size_t s : c.left) {
      lg += gradients[s];
      lh += hessians[s];
    }
    double rg = 0.0, rh = 0.0;
    for (std::size_t s : c.right) {
      rg += gradients[s];
      rh += hessians[s];
    }

    int left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1,
                                  leaf_value(lg, lh, params.lambda_reg)});
    int right_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1,
                                  leaf_value(rg, rh, params.lambda_reg)});

    TreeNode& node = tree.nodes[static_cast<std::size_t>(split.node_id)];
    node.feature = c.feature;
    node.threshold = c.threshold;
    node.left = left_id;
    node.right = right_id;
    node.value = 0.0;
    tree.feature_gain[c.feature] += c.gain;
    ++leaves;

    consider(left_id, c.left);
    consider(right_id, c.right);
  }
  return tree;
}

GbdtModel train(const std::vector<TrainingGroup>& groups,
                const std::vector<std::string>& feature_names,
                const TrainParams& params, const FeatureConfig& config,
                int threads) {
  if (groups.empty()) throw ValidationError("train: no groups");
  if (params.num_rounds < 0) {
    throw ValidationError("train: num_rounds must be >= 0");
  }

  bool trainable = false;
  for (const auto& group : groups) {
    if (group.rows.size() != group.relevance.size()) {
      throw ValidationError("train: group rows and relevance lengths differ");
    }
    if (group.rows.size() < 2) {
      throw ValidationError("train: every group needs >= 2 candidates");
    }
    for (const auto& row : group.rows) {
      if (row.size() != feature_names.size()) {
        throw ValidationError("train: row width " +
                              std::to_string(row.size()) +
                              " does not match feature count " +
                              std::to_string(feature_names.size()));
      }
    }
    auto [lo, hi] = std::minmax_element(group.relevance.begin(),
                                        group.relevance.end());
    if (*lo != *hi) trainable = true;
  }
  if (!trainable) throw ValidationError("degenerate training set");

  std::vector<std::vector<double>> flat_rows;
  std::vector<std::size_t> offsets;
  for (const auto& group : groups) {
    offsets.push_back(flat_rows.size());
    flat_rows.insert(flat_rows.end(), group.rows.begin(), group.rows.end());
  }
  const std::size_t n_rows = flat_rows.size();

  GbdtModel model;
  model.learning_rate = params.learning_rate;
  model.base_score = 0.0;
  model.feature_names = feature_names;
  model.config = config;
  model.params = params;

  std::vector<double> scores(n_rows, model.base_score);
  std::vector<double> gradients(n_rows, 0.0);
  std::vector<double> hessians(n_rows, 0.0);

  for (int round = 0; round < params.num_rounds; ++round) {
    parallel_for(groups.size(), threads, [&](std::size_t gi) {
      const auto& group = groups[gi];
      std::size_t start = offsets[gi];
      std::span<const double> group_scores(scores.data() + start,
                                           group.rows.size());
      GroupGradients gg = compute_group_gradients(group_scores,
                                                  group.relevance, params.p,
                                                  params.sigma);
      std::copy(gg.gradients.begin(), gg.gradients.end(),
                gradients.begin() + static_cast<std::ptrdiff_t>(start));
      std::copy(gg.hessians.begin(), gg.hessians.end(),
                hessians.begin() + static_cast<std::ptrdiff_t>(start));
    });

    RegressionTree tree = fit_regression_tree(flat_rows, gradients, hessians,
                                              params.tree_params());
    for (std::size_t i = 0; i < n_rows; ++i) {
      scores[i] += params.learning_rate * tree.predict(flat_rows[i]);
    }
    for (const auto& [feature, gain] : tree.feature_gain) {
      model.gain_table[feature_names[static_cast<std::size_t>(feature)]] +=
          gain;
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

double predict_row(const GbdtModel& model, std::span<const double> row) {
  if (row.size() != model.feature_names.size()) {
    throw ValidationError("predict: row width " + std::to_string(row.size()) +
                          " does not match model feature count " +
                          std::to_string(model.feature_names.size()));
  }
  double score = model.base_score;
  for (const auto& tree : model.trees) {
    score += model.learning_rate * tree.predict(row);
  }
  return score;
}

std::vector<double> predict(const GbdtModel& model,
                            const std::vector<std::vector<double>>& rows) {
  std::vector<double> scores;
  scores.reserve(rows.size());
  for (const auto& row : rows) scores.push_back(predict_row(model, row));
  return scores;
}

void check_feature_names(const GbdtModel& model,
                         const std::vector<std::string>& names) {
  if (model.feature_names == names) return;
  std::set<std::string> model_set(model.feature_names.begin(),
                                  model.feature_names.end());
  std::set<std::string> input_set(names.begin(), names.end());
  std::string only_model, only_input;
  for (const auto& name : model_set) {
    if (input_set.count(name) == 0) {
      only_model += only_model.empty() ? name : ", " + name;
    }
  }
  for (const auto& name : input_set) {
    if (model_set.count(name) == 0) {
      only_input += only_input.empty() ? name : ", " + name;
    }
  }
  if (only_model.empty() && only_input.empty()) {
    throw ValidationError("feature names match as sets but differ in order");
  }
  throw ValidationError("feature-name mismatch; only in model: [" +
                        only_model + "]; only in input: [" + only_input + "]");
}

std::vector<std::string> rank_candidates(
    std::vector<std::pair<std::string, double>> scored) {
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> codes;
  codes.reserve(scored.size());
  for (auto& [code, score] : scored) codes.push_back(std::move(code));
  return codes;
}

std::vector<std::string> rank_sources(
    const GbdtModel& model,
    const std::vector<std::pair<std::string, std::vector<double>>>& candidates) {
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(candidates.size());
  for (const auto& [code, row] : candidates) {
    scored.emplace_back(code, predict_row(model, row));
  }
  return rank_candidates(std::move(scored));
}

std::vector<std::pair<std::string, double>> feature_importance(
    const std::vector<GbdtModel>& models, std::size_t top_k) {
  if (models.empty()) {
    throw ValidationError("feature_importance: no models");
  }
  for (const auto& model : models) {
    if (model.feature_names != models.front().feature_names) {
      throw ValidationError("feature_importance: models disagree on feature "
                            "names");
    }
  }
  std::map<std::string, double> mean_gain;
  for (const auto& name : models.front().feature_names) mean_gain[name] = 0.0;
  for (const auto& model : models) {
    for (const auto& [name, gain] : model.gain_table) {
      mean_gain[name] += gain;
    }
  }
  std::vector<std::pair<std::string, double>> table(mean_gain.begin(),
                                                    mean_gain.end());
  for (auto& [name, gain] : table) {
    gain /= static_cast<double>(models.size());
  }
  std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (top_k > 0 && table.size() > top_k) table.resize(top_k);
  return table;
}

namespace {

using nlohmann::json;

// preorder index remap so serialized trees are canonical
void preorder_walk(const RegressionTree& tree, int node,
                   std::vector<int>& order) {
  order.push_back(node);
  const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
  if (n.feature >= 0) {
    preorder_walk(tree, n.left, order);
    preorder_walk(tree, n.right, order);
  }
}

json tree_to_json(const RegressionTree& tree) {
  std::vector<int> order;
  preorder_walk(tree, 0, order);
  std::vector<int> position(tree.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    position[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  }

  json feature_index = json::array();
  json threshold = json::array();
  json left = json::array();
  json right = json::array();
  json value = json::array();
  for (int old_id : order) {
    const TreeNode& n = tree.nodes[static_cast<std::size_t>(old_id)];
    feature_index.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.feature >= 0 ? position[static_cast<std::size_t>(n.left)]
                                  : -1);
    right.push_back(n.feature >= 0
                        ? position[static_cast<std::size_t>(n.right)]
                        : -1);
    value.push_back(n.value);
  }
  json gain = json::array();
  for (const auto& [feature, g] : tree.feature_gain) {
    gain.push_back(json::array({feature, g}));
  }
  return json{{"feature_index", feature_index},
              {"threshold", threshold},
              {"left", left},
              {"right", right},
              {"leaf_value", value},
              {"feature_gain", gain}};
}

RegressionTree tree_from_json(const json& j) {
  RegressionTree tree;
  const auto& feature_index = j.at("feature_index");
  const auto& threshold = j.at("threshold");
  const auto& left = j.at("left");
  const auto& right = j.at("right");
  const auto& value = j.at("leaf_value");
  std::size_t n = feature_index.size();
  if (threshold.size() != n || left.size() != n || right.size() != n ||
      value.size() != n || n == 0) {
    throw ParseError("model: malformed tree arrays");
  }
  for (std::size_t i = 0; i < n; ++i) {
    TreeNode node;
    node.feature = feature_index[i].get<int>();
    node.threshold = threshold[i].get<double>();
    node.left = left[i].get<int>();
    node.right = right[i].get<int>();
    node.value = value[i].get<double>();
    if (node.feature >= 0 &&
        (node.left < 0 || node.right < 0 ||
         node.left >= static_cast<int>(n) || node.right >= static_cast<int>(n))) {
      throw ParseError("model: tree child index out of range");
    }
    tree.nodes.push_back(node);
  }
  if (j.contains("feature_gain")) {
    for (const auto& entry : j.at("feature_gain")) {
      tree.feature_gain[entry.at(0).get<int>()] = entry.at(1).get<double>();
    }
  }
  return tree;
}

}  // namespace

std::string serialize_model(const GbdtModel& model) {
  json j;
  j["format"] = "rankforge-model";
  j["format_version"] = 1;
  j["tool_version"] = std::string(kToolVersion);
  j["base_score"] = model.base_score;
  j["learning_rate"] = model.learning_rate;
  j["config"] = json{{"syntactic_source", to_string(model.config.syntactic_source)},
                     {"representation", to_string(model.config.representation)},
                     {"include_dataset", model.config.include_dataset}};
  j["params"] = json{{"num_rounds", model.params.num_rounds},
                     {"learning_rate", model.params.learning_rate},
                     {"sigma", model.params.sigma},
                     {"max_leaves", model.params.max_leaves},
                     {"min_samples_leaf", model.params.min_samples_leaf},
                     {"lambda_reg", model.params.lambda_reg},
                     {"seed", model.params.seed},
                     {"p", model.params.p}};
  j["feature_names"] = model.feature_names;
  j["gain_table"] = model.gain_table;
  json trees = json::array();
  for (const auto& tree : model.trees) trees.push_back(tree_to_json(tree));
  j["trees"] = trees;
  return j.dump(2) + "\n";
}

GbdtModel deserialize_model(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "rankforge-model") {
      throw ParseError("model: unexpected format tag");
    }
    GbdtModel model;
    model.base_score = j.at("base_score").get<double>();
    model.learning_rate = j.at("learning_rate").get<double>();
    const auto& config = j.at("config");
    model.config.syntactic_source = syntactic_source_from_string(
        config.at("syntactic_source").get<std::string>());
    model.config.representation = representation_from_string(
        config.at("representation").get<std::string>());
    model.config.include_dataset = config.at("include_dataset").get<bool>();
    const auto& params = j.at("params");
    model.params.num_rounds = params.at("num_rounds").get<int>();
    model.params.learning_rate = params.at("learning_rate").get<double>();
    model.params.sigma = params.at("sigma").get<double>();
    model.params.max_leaves = params.at("max_leaves").get<int>();
    model.params.min_samples_leaf = params.at("min_samples_leaf").get<int>();
    model.params.lambda_reg = params.at("lambda_reg").get<double>();
    model.params.seed = params.at("seed").get<std::uint64_t>();
    model.params.p = params.at("p").get<int>();
    model.feature_names =
        j.at("feature_names").get<std::vector<std::string>>();
    model.gain_table =
        j.at("gain_table").get<std::map<std::string, double>>();
    for (const auto& tree : j.at("trees")) {
      model.trees.push_back(tree_from_json(tree));
    }
    for (const auto& tree : model.trees) {
      for (const auto& node : tree.nodes) {
        if (node.feature >= static_cast<int>(model.feature_names.size())) {
          throw ParseError("model: tree references unknown feature index " +
                           std::to_string(node.feature));
        }
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: missing or mistyped field: ") +
                     e.what());
  }
}

}  // namespace rankforge
