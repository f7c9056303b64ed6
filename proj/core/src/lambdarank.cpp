#include "rankforge/lambdarank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankforge/error.hpp"

namespace rankforge {

double ndcg_discount(std::size_t rank, int p) {
  if (rank > static_cast<std::size_t>(p)) return 0.0;
  return 1.0 / std::log2(static_cast<double>(rank) + 1.0);
}

double ideal_dcg(std::span<const int> relevance, int p) {
  std::vector<int> sorted(relevance.begin(), relevance.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<int>());
  double dcg = 0.0;
  std::size_t limit =
      std::min<std::size_t>(sorted.size(), static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < limit; ++i) {
    dcg += (std::pow(2.0, sorted[i]) - 1.0) /
           std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg;
}

GroupGradients compute_group_gradients(std::span<const double> scores,
                                       std::span<const int> relevance, int p,
                                       double sigma) {
  const std::size_t n = scores.size();
  if (n != relevance.size()) {
    throw ValidationError("compute_group_gradients: scores and relevance "
                          "lengths differ");
  }
  if (n < 2) {
    throw ValidationError("compute_group_gradients: group needs >= 2 "
                          "candidates");
  }
  if (p < 1) throw ValidationError("compute_group_gradients: p must be >= 1");

  GroupGradients out;
  out.gradients.assign(n, 0.0);
  out.hessians.assign(n, 0.0);

  double idcg = ideal_dcg(relevance, p);
  if (idcg <= 0.0) return out;  // uniform zero relevance: no preference pairs

  // current score-sorted order, ties by ascending index
  std::vector<std::size_t> by_score(n);
  std::iota(by_score.begin(), by_score.end(), 0);
  std::stable_sort(by_score.begin(), by_score.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  std::vector<std::size_t> rank_of(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    rank_of[by_score[pos]] = pos + 1;
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (relevance[i] == relevance[j]) continue;
      std::size_t high = relevance[i] > relevance[j] ? i : j;
      std::size_t low = relevance[i] > relevance[j] ? j : i;

      double gain_gap = std::pow(2.0, relevance[high]) -
                        std::pow(2.0, relevance[low]);
      double discount_gap = std::fabs(ndcg_discount(rank_of[high], p) -
                                      ndcg_discount(rank_of[low], p));
      double weight = gain_gap * discount_gap / idcg;
      if (weight == 0.0) continue;  // both below the cutoff

      double delta = sigma * (scores[high] - scores[low]);
      double rho = 1.0 / (1.0 + std::exp(delta));
      double grad = sigma * rho * weight;
      double hess = sigma * sigma * rho * (1.0 - rho) * weight;
      out.gradients[high] -= grad;
      out.gradients[low] += grad;
      out.hessians[high] += hess;
      out.hessians[low] += hess;
    }
  }
  return out;
}

}  // namespace rankforge
