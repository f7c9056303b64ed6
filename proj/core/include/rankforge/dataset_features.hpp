#ifndef RANKFORGE_DATASET_FEATURES_HPP
#define RANKFORGE_DATASET_FEATURES_HPP

#include "rankforge/corpus.hpp"

namespace rankforge {

enum class OverlapFormula {
  kSumNormalized,  // |Vs ∩ Vt| / (|Vs| + |Vt|), max 0.5 at identical vocabularies
  kJaccard,        // |Vs ∩ Vt| / |Vs ∪ Vt|
};

enum class TtrDistanceFormula {
  kAbsoluteDifference,  // |ttr_s - ttr_t|
  kSquaredRatio,        // (1 - ttr_s/ttr_t)^2
};

struct DatasetFeatureOptions {
  OverlapFormula overlap = OverlapFormula::kSumNormalized;
  TtrDistanceFormula ttr_distance = TtrDistanceFormula::kAbsoluteDifference;
  bool fold_case = false;
};

// The four corpus-pair features, in emission order.
struct DatasetFeatureBlock {
  double word_overlap;
  double transfer_ttr;  // source-corpus type-token ratio
  double task_ttr;      // target-corpus type-token ratio
  double distance_ttr;
};

double word_overlap(const TokenizedCorpus& source, const TokenizedCorpus& target,
                    const DatasetFeatureOptions& options = {});

// |vocabulary| / token_count, in (0,1].
double ttr(const TokenizedCorpus& corpus, bool fold_case = false);

double ttr_distance(double transfer_ttr, double task_ttr,
                    TtrDistanceFormula formula =
                        TtrDistanceFormula::kAbsoluteDifference);

DatasetFeatureBlock dataset_feature_block(
    const TokenizedCorpus& source, const TokenizedCorpus& target,
    const DatasetFeatureOptions& options = {});

}  // namespace rankforge

#endif  // RANKFORGE_DATASET_FEATURES_HPP
