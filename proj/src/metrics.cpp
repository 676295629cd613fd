#include "biasrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "biasrank/errors.hpp"

namespace biasrank {
namespace {

// Values of b reordered to a's id order; throws when the id sets differ.
std::pair<std::vector<double>, std::vector<double>> aligned_values(
    std::span<const ScoredItem> a, std::span<const ScoredItem> b,
    std::size_t min_size) {
  if (a.size() != b.size()) {
    throw InvalidArgumentError("rankings differ in length: " +
                               std::to_string(a.size()) + " vs " +
                               std::to_string(b.size()));
  }
  if (a.size() < min_size) {
    throw InvalidArgumentError("rankings need at least " +
                               std::to_string(min_size) + " items");
  }
  std::unordered_map<std::string, double> b_by_id;
  b_by_id.reserve(b.size());
  for (const ScoredItem& item : b) {
    if (!b_by_id.emplace(item.id, item.value).second) {
      throw InvalidArgumentError("duplicate id in ranking: " + item.id);
    }
  }
  std::vector<double> va, vb;
  va.reserve(a.size());
  vb.reserve(a.size());
  std::unordered_map<std::string, bool> seen;
  seen.reserve(a.size());
  for (const ScoredItem& item : a) {
    if (!seen.emplace(item.id, true).second) {
      throw InvalidArgumentError("duplicate id in ranking: " + item.id);
    }
    const auto it = b_by_id.find(item.id);
    if (it == b_by_id.end()) {
      throw InvalidArgumentError("id sets differ: '" + item.id +
                                 "' missing from second ranking");
    }
    va.push_back(item.value);
    vb.push_back(it->second);
  }
  return {std::move(va), std::move(vb)};
}

// Ranks 1..n with ties given the average of the ranks they span.
std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return values[x] < values[y];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
      ++j;
    }
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      ranks[order[k]] = shared;
    }
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw InvalidArgumentError(
        "rank correlation undefined: a ranking is constant");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman_rho(std::span<const ScoredItem> a,
                    std::span<const ScoredItem> b) {
  auto [va, vb] = aligned_values(a, b, 2);
  return pearson(average_ranks(va), average_ranks(vb));
}

double kendall_tau(std::span<const ScoredItem> a,
                   std::span<const ScoredItem> b) {
  auto [va, vb] = aligned_values(a, b, 2);
  const std::size_t n = va.size();
  std::int64_t concordant = 0, discordant = 0;
  std::int64_t ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = va[i] - va[j];
      const double db = vb[i] - vb[j];
      if (da == 0.0 && db == 0.0) {
        ++ties_a;
        ++ties_b;
      } else if (da == 0.0) {
        ++ties_a;
      } else if (db == 0.0) {
        ++ties_b;
      } else if ((da > 0.0) == (db > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const auto n0 = static_cast<std::int64_t>(n) *
                  (static_cast<std::int64_t>(n) - 1) / 2;
  const double denom = std::sqrt(static_cast<double>(n0 - ties_a)) *
                       std::sqrt(static_cast<double>(n0 - ties_b));
  if (denom == 0.0) {
    throw InvalidArgumentError(
        "rank correlation undefined: a ranking is constant");
  }
  return static_cast<double>(concordant - discordant) / denom;
}

double cohens_kappa(std::span<const std::string> labels_a,
                    std::span<const std::string> labels_b) {
  if (labels_a.size() != labels_b.size()) {
    throw InvalidArgumentError("label lists differ in length");
  }
  if (labels_a.empty()) {
    throw InvalidArgumentError("label lists must be non-empty");
  }
  const auto n = static_cast<double>(labels_a.size());
  std::unordered_map<std::string, double> marginal_a, marginal_b;
  double observed = 0.0;
  for (std::size_t i = 0; i < labels_a.size(); ++i) {
    marginal_a[labels_a[i]] += 1.0;
    marginal_b[labels_b[i]] += 1.0;
    if (labels_a[i] == labels_b[i]) {
      observed += 1.0;
    }
  }
  const double p_o = observed / n;
  double p_e = 0.0;
  for (const auto& [label, count_a] : marginal_a) {
    const auto it = marginal_b.find(label);
    if (it != marginal_b.end()) {
      p_e += (count_a / n) * (it->second / n);
    }
  }
  if (p_e >= 1.0) {
    throw UndefinedKappaError(
        "kappa undefined: both raters agree by a single constant label");
  }
  return (p_o - p_e) / (1.0 - p_e);
}

}  // namespace biasrank
