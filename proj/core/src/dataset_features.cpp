#include "rankforge/dataset_features.hpp"

#include <cmath>

#include "rankforge/error.hpp"

namespace rankforge {

namespace {

void require_nonempty(const TokenizedCorpus& corpus, const char* role) {
  if (corpus.sentences.empty()) {
    throw ValidationError(std::string("dataset features: ") + role +
                          " corpus '" + corpus.language_code + "' is empty");
  }
}

}  // namespace

double word_overlap(const TokenizedCorpus& source, const TokenizedCorpus& target,
                    const DatasetFeatureOptions& options) {
  require_nonempty(source, "source");
  require_nonempty(target, "target");
  auto vs = vocabulary(source, options.fold_case);
  auto vt = vocabulary(target, options.fold_case);
  // iterate the smaller set
  const auto& small = vs.size() <= vt.size() ? vs : vt;
  const auto& large = vs.size() <= vt.size() ? vt : vs;
  std::size_t shared = 0;
  for (const auto& type : small) {
    if (large.count(type) != 0) ++shared;
  }
  if (options.overlap == OverlapFormula::kJaccard) {
    std::size_t united = vs.size() + vt.size() - shared;
    return static_cast<double>(shared) / static_cast<double>(united);
  }
  return static_cast<double>(shared) /
         static_cast<double>(vs.size() + vt.size());
}

double ttr(const TokenizedCorpus& corpus, bool fold_case) {
  std::size_t tokens = token_count(corpus);
  if (tokens == 0) {
    throw ValidationError("ttr: corpus '" + corpus.language_code +
                          "' has no tokens");
  }
  return static_cast<double>(vocabulary(corpus, fold_case).size()) /
         static_cast<double>(tokens);
}

double ttr_distance(double transfer_ttr, double task_ttr,
                    TtrDistanceFormula formula) {
  if (formula == TtrDistanceFormula::kSquaredRatio) {
    double r = 1.0 - transfer_ttr / task_ttr;
    return r * r;
  }
  return std::fabs(transfer_ttr - task_ttr);
}

DatasetFeatureBlock dataset_feature_block(const TokenizedCorpus& source,
                                          const TokenizedCorpus& target,
                                          const DatasetFeatureOptions& options) {
  DatasetFeatureBlock block;
  block.word_overlap = word_overlap(source, target, options);
  block.transfer_ttr = ttr(source, options.fold_case);
  block.task_ttr = ttr(target, options.fold_case);
  block.distance_ttr =
      ttr_distance(block.transfer_ttr, block.task_ttr, options.ttr_distance);
  return block;
}

}  // namespace rankforge
