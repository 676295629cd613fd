#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "biasrank/elo.hpp"

namespace biasrank {

struct IdentificationJudgment {
  std::string text_id;
  int score = 0;  // in [0, 100]
};

struct ComparisonJudgment {
  Winner winner = Winner::A;  // relative to the canonical (a, b) order
  bool presentation_swapped = false;
};

// Prompt pair for the remote judge. Both prompts embed the same bias
// definition so identification and comparison grade the same notion; the
// identification prompt asks for one integer 0-100, the comparison prompt
// for a single A/B choice.
struct PromptTemplates {
  std::string identification_prompt;  // placeholder {text}
  std::string comparison_prompt;      // placeholders {text_a}, {text_b}

  static PromptTemplates defaults();
  static PromptTemplates load(const std::filesystem::path& identification_file,
                              const std::filesystem::path& comparison_file);

  void validate() const;
  std::string render_identification(std::string_view text) const;
  // first/second are the texts in presentation order.
  std::string render_comparison(std::string_view first,
                                std::string_view second) const;
};

// Judging contract shared by the remote, replay and synthetic backends.
// identify and compare are safe to call concurrently.
class Judge {
 public:
  virtual ~Judge() = default;

  // Absolute bias score in [0, 100] for one non-empty text.
  virtual int identify(const std::string& text) = 0;

  // Which of two distinct texts is more biased. presentation_swapped selects
  // the order shown to order-sensitive judges; the returned winner is always
  // relative to (text_a, text_b) as passed.
  virtual Winner compare(const std::string& text_a, const std::string& text_b,
                         bool presentation_swapped) = 0;

  virtual std::string kind() const = 0;
};

struct SyntheticJudgeConfig {
  // normalized text -> latent bias in [0, 1]
  std::unordered_map<std::string, double> latent_scores;
  double temperature = 0.0;  // 0 means the higher latent always wins
  std::uint64_t seed = 0;
};

// Oracle judge over hidden latent scores. tau = 0 gives a deterministic
// total order; tau > 0 draws the winner from a logistic model on the latent
// gap, P(A) = 1/(1 + exp(-(s_a - s_b)/tau)). Draws are derived per pair from
// the seed, so outcomes do not depend on call or argument order.
class SyntheticJudge : public Judge {
 public:
  explicit SyntheticJudge(SyntheticJudgeConfig config);

  int identify(const std::string& text) override;
  Winner compare(const std::string& text_a, const std::string& text_b,
                 bool presentation_swapped) override;
  std::string kind() const override { return "synthetic"; }

 private:
  double latent_for(const std::string& text) const;

  SyntheticJudgeConfig config_;
};

// Answers every call from a recorded judgment log; never touches the
// network. Pure: identical inputs give identical outputs.
class ReplayJudge : public Judge {
 public:
  explicit ReplayJudge(const std::filesystem::path& log_path);

  int identify(const std::string& text) override;
  Winner compare(const std::string& text_a, const std::string& text_b,
                 bool presentation_swapped) override;
  std::string kind() const override { return "replay"; }

 private:
  std::unordered_map<std::uint64_t, int> identify_by_hash_;
  // key: hash_a * 2^64-mix with hash_b, oriented as logged
  std::unordered_map<std::string, Winner> compare_by_key_;
};

// First integer in the reply, rejected unless it lies in [0, 100].
std::optional<int> parse_integer_score(std::string_view reply);

// First standalone A or B (case-insensitive) in the reply.
std::optional<Winner> parse_choice(std::string_view reply);

// Fractions of judgments per score bucket {0-10, 20, 30, 50, 65-85, other};
// only buckets that occur are present, and the fractions sum to 1.
std::map<std::string, double> bucket_histogram(
    std::span<const IdentificationJudgment> judgments);

// Bucket label for one score.
std::string bucket_label(int score);

// Seeded per-pair presentation order; true means show text_b first.
bool derive_presentation_swap(std::uint64_t seed, std::string_view id_a,
                              std::string_view id_b);

// Reads a latent-score file (columns: text, latent) keyed by normalized text.
std::unordered_map<std::string, double> load_latent_scores(
    const std::filesystem::path& path);

}  // namespace biasrank
