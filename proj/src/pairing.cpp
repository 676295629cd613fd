#include "biasrank/pairing.hpp"

#include <fstream>
#include <unordered_set>

#include "biasrank/errors.hpp"
#include "biasrank/rng.hpp"

namespace biasrank {

Schedule build_schedule(std::span<const std::string> item_ids,
                        const PairingConfig& config) {
  if (config.rounds < 2 || config.rounds % 2 != 0) {
    throw UnsupportedConfigError("rounds must be even and >= 2, got " +
                                 std::to_string(config.rounds));
  }
  const std::size_t n = item_ids.size();
  if (n <= static_cast<std::size_t>(config.rounds)) {
    throw BudgetInfeasibleError(
        "need more items than rounds: " + std::to_string(n) + " items for " +
        std::to_string(config.rounds) + " rounds");
  }
  {
    std::unordered_set<std::string_view> seen;
    for (const std::string& id : item_ids) {
      if (!seen.insert(id).second) {
        throw InvalidArgumentError("duplicate item id: " + id);
      }
    }
  }

  std::vector<std::string> ring(item_ids.begin(), item_ids.end());
  Rng rng(config.seed);
  deterministic_shuffle(ring, rng);

  Schedule schedule;
  schedule.rounds = config.rounds;
  schedule.pairs.reserve(n * static_cast<std::size_t>(config.rounds) / 2);
  const std::size_t first_half = (n + 1) / 2;
  for (int offset = 1; offset <= config.rounds / 2; ++offset) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + static_cast<std::size_t>(offset)) % n;
      const int round_index = 2 * offset - (i < first_half ? 1 : 0);
      schedule.pairs.push_back({round_index, ring[i], ring[j]});
    }
  }
  return schedule;
}

std::uint64_t comparison_budget(std::uint64_t n, std::uint64_t rounds) {
  const std::uint64_t product = n * rounds;
  if (product % 2 != 0) {
    throw InvalidArgumentError("n * rounds must be even, got " +
                               std::to_string(n) + " * " +
                               std::to_string(rounds));
  }
  return product / 2;
}

void write_schedule(const Schedule& schedule,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write schedule file: " + path.string());
  }
  for (const ScheduledPair& p : schedule.pairs) {
    out << p.round_index << '\t' << p.item_a << '\t' << p.item_b << '\n';
  }
  if (!out) {
    throw Error("write failed: " + path.string());
  }
}

Schedule read_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open schedule file: " + path.string());
  }
  Schedule schedule;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos
                                                : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 'round<TAB>id_a<TAB>id_b'");
    }
    ScheduledPair pair;
    try {
      pair.round_index = std::stoi(line.substr(0, tab1));
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": bad round index");
    }
    pair.item_a = line.substr(tab1 + 1, tab2 - tab1 - 1);
    pair.item_b = line.substr(tab2 + 1);
    if (pair.item_a.empty() || pair.item_b.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty item id");
    }
    schedule.rounds = std::max(schedule.rounds, pair.round_index);
    schedule.pairs.push_back(std::move(pair));
  }
  return schedule;
}

}  // namespace biasrank
