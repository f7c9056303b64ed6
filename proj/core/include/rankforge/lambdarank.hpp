#ifndef RANKFORGE_LAMBDARANK_HPP
#define RANKFORGE_LAMBDARANK_HPP

#include <span>
#include <vector>

namespace rankforge {

struct GroupGradients {
  std::vector<double> gradients;
  std::vector<double> hessians;
};

// Pairwise gradients of the listwise objective for one group.
//
// For every pair with relevance_i > relevance_j:
//   rho   = 1 / (1 + exp(sigma * (s_i - s_j)))
//   w     = |delta NDCG@p from swapping i and j in the current score-sorted
//            order|, normalized by the group's IDCG@p
//   g_i  -= sigma * rho * w        g_j += sigma * rho * w
//   h_i  += sigma^2 * rho * (1 - rho) * w     (h_j likewise)
//
// Gradients are derivatives of the frozen-weight pairwise logistic loss, so
// per-group sums are exactly zero. Groups with uniform relevance yield zeros.
GroupGradients compute_group_gradients(std::span<const double> scores,
                                       std::span<const int> relevance, int p,
                                       double sigma = 1.0);

// 1 / log2(rank + 1) for 1-based ranks <= p, else 0.
double ndcg_discount(std::size_t rank, int p);

// DCG@p of the relevance values sorted descending; the normalizer shared by
// gradient weighting and evaluation.
double ideal_dcg(std::span<const int> relevance, int p);

}  // namespace rankforge

#endif  // RANKFORGE_LAMBDARANK_HPP
