#include "biasrank/elo.hpp"

#include <algorithm>
#include <cmath>

#include "biasrank/errors.hpp"

namespace biasrank {

void EloConfig::validate() const {
  if (!std::isfinite(initial_rating) || !std::isfinite(k_factor) ||
      !std::isfinite(scale_divisor) || !std::isfinite(exponent_base)) {
    throw InvalidArgumentError("elo config values must be finite");
  }
  if (k_factor <= 0.0) {
    throw InvalidArgumentError("k_factor must be > 0");
  }
  if (scale_divisor <= 0.0) {
    throw InvalidArgumentError("scale_divisor must be > 0");
  }
  if (exponent_base <= 1.0) {
    throw InvalidArgumentError("exponent_base must be > 1");
  }
}

double expected_score(double rating_a, double rating_b,
                      const EloConfig& config) {
  config.validate();
  if (!std::isfinite(rating_a) || !std::isfinite(rating_b)) {
    throw InvalidArgumentError("ratings must be finite");
  }
  const double exponent = (rating_b - rating_a) / config.scale_divisor;
  return 1.0 / (1.0 + std::pow(config.exponent_base, exponent));
}

void apply_match(EloState& a, EloState& b, const MatchOutcome& outcome,
                 const EloConfig& config) {
  if (outcome.item_a == outcome.item_b) {
    throw InvalidArgumentError("a match needs two distinct items, got '" +
                               outcome.item_a + "' twice");
  }
  if (outcome.item_a != a.item_id || outcome.item_b != b.item_id) {
    throw InvalidArgumentError("outcome (" + outcome.item_a + ", " +
                               outcome.item_b +
                               ") does not reference the given states (" +
                               a.item_id + ", " + b.item_id + ")");
  }
  const double e_a = expected_score(a.rating, b.rating, config);
  const double s_a = outcome.winner == Winner::A ? 1.0 : 0.0;
  // One shared delta keeps the pool sum conserved: E_a + E_b = 1 implies the
  // loser's k*(S_b - E_b) is exactly the negated winner delta.
  const double delta = config.k_factor * (s_a - e_a);
  a.rating += delta;
  b.rating -= delta;
  ++a.matches_played;
  ++b.matches_played;
}

std::map<std::string, double> normalize_ratings(
    std::span<const EloState> states) {
  if (states.empty()) {
    throw InvalidArgumentError("cannot normalize an empty rating pool");
  }
  double lo = states.front().rating;
  double hi = states.front().rating;
  for (const EloState& s : states) {
    if (!std::isfinite(s.rating)) {
      throw InvalidArgumentError("non-finite rating for item " + s.item_id);
    }
    lo = std::min(lo, s.rating);
    hi = std::max(hi, s.rating);
  }
  std::map<std::string, double> scores;
  for (const EloState& s : states) {
    const double score = hi > lo ? (s.rating - lo) / (hi - lo) : 0.5;
    if (!scores.emplace(s.item_id, score).second) {
      throw InvalidArgumentError("duplicate item id in rating pool: " +
                                 s.item_id);
    }
  }
  return scores;
}

}  // namespace biasrank
