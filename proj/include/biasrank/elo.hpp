#pragma once

#include <map>
#include <span>
#include <string>

namespace biasrank {

// Constants of the rating rule. Defaults: every item starts at 1200, a match
// moves at most k=16 points, and the win curve is 1/(1 + 10^(dr/400)).
struct EloConfig {
  double initial_rating = 1200.0;
  double k_factor = 16.0;
  double scale_divisor = 400.0;
  double exponent_base = 10.0;

  void validate() const;
};

struct EloState {
  std::string item_id;
  double rating = 0.0;
  int matches_played = 0;
};

enum class Winner { A, B };

// No draw arm: the comparison judge always names a winner, so the match
// score S stays exactly 0 or 1.
struct MatchOutcome {
  std::string item_a;
  std::string item_b;
  Winner winner = Winner::A;
};

// Probability that an item rated rating_a beats one rated rating_b.
double expected_score(double rating_a, double rating_b,
                      const EloConfig& config = {});

// Applies one match in place. The winner gains k*(1 - E_winner), the loser
// loses exactly the same amount, and both match counters advance.
void apply_match(EloState& a, EloState& b, const MatchOutcome& outcome,
                 const EloConfig& config = {});

// Min-max scaling of ratings onto [0,1], order-preserving. A pool whose
// ratings are all equal maps every item to the scale midpoint 0.5.
std::map<std::string, double> normalize_ratings(
    std::span<const EloState> states);

}  // namespace biasrank
