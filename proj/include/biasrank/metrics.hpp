#pragma once

#include <span>
#include <string>

namespace biasrank {

// One entry of a ranking; the value induces the rank order.
struct ScoredItem {
  std::string id;
  double value = 0.0;
};

// Spearman rank correlation with average ranks for ties. Both rankings must
// cover the same id set (order-independent) and hold at least two items.
double spearman_rho(std::span<const ScoredItem> a,
                    std::span<const ScoredItem> b);

// Kendall's tau-b (tie-corrected), same contract as spearman_rho.
double kendall_tau(std::span<const ScoredItem> a,
                   std::span<const ScoredItem> b);

// Chance-corrected agreement (p_o - p_e) / (1 - p_e) between two equal-length
// categorical label lists aligned by position.
double cohens_kappa(std::span<const std::string> labels_a,
                    std::span<const std::string> labels_b);

}  // namespace biasrank
