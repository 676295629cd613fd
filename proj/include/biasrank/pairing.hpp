#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace biasrank {

struct PairingConfig {
  int rounds = 8;
  std::uint64_t seed = 0;
};

struct ScheduledPair {
  int round_index = 0;  // 1-based
  std::string item_a;
  std::string item_b;
};

// A fixed comparison plan: every item appears in exactly `rounds` pairs,
// no self-pairs, no repeated unordered pair.
struct Schedule {
  int rounds = 0;
  std::vector<ScheduledPair> pairs;
};

// Shuffled-circulant construction: items are shuffled onto a ring with the
// config seed, then offset d in 1..rounds/2 pairs each ring position with its
// clockwise neighbor at distance d (filling rounds 2d-1 and 2d). Each offset
// contributes degree 2 per item, so the schedule holds exactly
// n * rounds / 2 pairs for any n > rounds, odd n included.
Schedule build_schedule(std::span<const std::string> item_ids,
                        const PairingConfig& config);

// Total number of comparisons for n items over `rounds` rounds: n*rounds/2.
std::uint64_t comparison_budget(std::uint64_t n, std::uint64_t rounds);

// Audit/replay format: one "round_index<TAB>id_a<TAB>id_b" line per pair.
void write_schedule(const Schedule& schedule,
                    const std::filesystem::path& path);
Schedule read_schedule(const std::filesystem::path& path);

}  // namespace biasrank
