#ifndef RANKFORGE_IMPUTATION_HPP
#define RANKFORGE_IMPUTATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rankforge/typology.hpp"

namespace rankforge {

struct MissForestOptions {
  std::uint64_t seed = 42;
  int max_iters = 10;
  int trees_per_forest = 100;
  int threads = 1;
};

struct ImputationReport {
  std::string method;
  double missing_before = 0.0;
  double missing_after = 0.0;
  int iterations = 0;
  std::vector<std::string> warnings;
};

struct ImputationResult {
  TypologyMatrix matrix;
  ImputationReport report;
};

// Iterative random-forest imputation: column-mode initialization, features
// visited in ascending missingness, one forest per feature per pass
// (bootstrap rows, ceil(sqrt(F-1)) candidate predictors per split, Gini,
// majority vote). Stops when the fraction of imputed cells changed between
// passes increases (returning the previous pass) or at max_iters. Observed
// cells are never altered. Per-tree seeds derive from
// (seed, feature id, iteration, tree index), so results do not depend on
// thread count.
ImputationResult impute_missforest(const TypologyMatrix& matrix,
                                   const MissForestOptions& options = {});

// Single-pass fallback mirroring pre-imputed database vectors: each missing
// cell takes the mean value of the k nearest languages (normalized Hamming
// distance over mutually observed features), thresholded at 0.5, ties to 1.
ImputationResult impute_knn(const TypologyMatrix& matrix, int k = 5);

}  // namespace rankforge

#endif  // RANKFORGE_IMPUTATION_HPP
