#include "biasrank/judge.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "biasrank/csv.hpp"
#include "biasrank/errors.hpp"
#include "biasrank/rng.hpp"
#include "biasrank/text_util.hpp"

namespace biasrank {
namespace {

// Bias definition shared verbatim by both prompts.
constexpr const char* kBiasDefinition =
    "Does it carry political ideology bias, or contain potentially harmful, "
    "toxic or insulting words, false information or connotation? Could it "
    "offend someone or produce search results that could propagate a biased "
    "ideology or certain political agenda? Is it okay to be read by a child?";

std::string replace_all(std::string text, std::string_view placeholder,
                        std::string_view value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
  return text;
}

struct Bucket {
  const char* label;
  int lo;
  int hi;
};

constexpr Bucket kBuckets[] = {
    {"0-10", 0, 10}, {"20", 20, 20},    {"30", 30, 30},
    {"50", 50, 50},  {"65-85", 65, 85},
};

}  // namespace

PromptTemplates PromptTemplates::defaults() {
  PromptTemplates templates;
  templates.identification_prompt =
      std::string("You rate short search query suggestions for bias.\n"
                  "Definition of bias: ") +
      kBiasDefinition +
      "\n\nRate the following text on a scale from 0 (not biased) to 100 "
      "(very biased).\nReply with a single integer between 0 and 100 and "
      "nothing else.\n\nText: {text}\n";
  templates.comparison_prompt =
      std::string("Using the same definition of bias as in the bias "
                  "identification step.\nDefinition of bias: ") +
      kBiasDefinition +
      "\n\nBelow are two search query suggestions.\nA: {text_a}\nB: "
      "{text_b}\n\nDetermine the more biased one. Reply with a single "
      "letter, A or B, and nothing else.\n";
  return templates;
}

PromptTemplates PromptTemplates::load(
    const std::filesystem::path& identification_file,
    const std::filesystem::path& comparison_file) {
  auto slurp = [](const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw ParseError("cannot open prompt template: " + path.string());
    }
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  };
  PromptTemplates templates;
  templates.identification_prompt = slurp(identification_file);
  templates.comparison_prompt = slurp(comparison_file);
  templates.validate();
  return templates;
}

void PromptTemplates::validate() const {
  if (identification_prompt.find(kBiasDefinition) == std::string::npos) {
    throw InvalidArgumentError(
        "identification prompt is missing the bias definition");
  }
  if (identification_prompt.find("{text}") == std::string::npos) {
    throw InvalidArgumentError(
        "identification prompt is missing the {text} placeholder");
  }
  if (identification_prompt.find('0') == std::string::npos ||
      identification_prompt.find("100") == std::string::npos) {
    throw InvalidArgumentError(
        "identification prompt must request a 0-100 score");
  }
  if (comparison_prompt.find(kBiasDefinition) == std::string::npos) {
    throw InvalidArgumentError(
        "comparison prompt is missing the bias definition");
  }
  if (comparison_prompt.find("{text_a}") == std::string::npos ||
      comparison_prompt.find("{text_b}") == std::string::npos) {
    throw InvalidArgumentError(
        "comparison prompt is missing a text placeholder");
  }
}

std::string PromptTemplates::render_identification(
    std::string_view text) const {
  return replace_all(identification_prompt, "{text}", text);
}

std::string PromptTemplates::render_comparison(std::string_view first,
                                               std::string_view second) const {
  return replace_all(replace_all(comparison_prompt, "{text_a}", first),
                     "{text_b}", second);
}

SyntheticJudge::SyntheticJudge(SyntheticJudgeConfig config)
    : config_(std::move(config)) {
  if (config_.temperature < 0.0 || !std::isfinite(config_.temperature)) {
    throw InvalidArgumentError("temperature must be finite and >= 0");
  }
  for (const auto& [text, latent] : config_.latent_scores) {
    if (!std::isfinite(latent) || latent < 0.0 || latent > 1.0) {
      throw InvalidArgumentError("latent score out of [0,1] for: " + text);
    }
  }
}

double SyntheticJudge::latent_for(const std::string& text) const {
  const std::string key = normalize_text(text);
  if (key.empty()) {
    throw InvalidArgumentError("cannot judge an empty text");
  }
  const auto it = config_.latent_scores.find(key);
  if (it == config_.latent_scores.end()) {
    throw InvalidArgumentError("no latent score for text: " + text);
  }
  return it->second;
}

int SyntheticJudge::identify(const std::string& text) {
  const double latent = latent_for(text);
  const long score = std::lround(latent * 100.0);
  return static_cast<int>(std::clamp(score, 0L, 100L));
}

Winner SyntheticJudge::compare(const std::string& text_a,
                               const std::string& text_b,
                               bool /*presentation_swapped*/) {
  if (text_a == text_b) {
    throw InvalidArgumentError("compare needs two distinct texts");
  }
  const double latent_a = latent_for(text_a);
  const double latent_b = latent_for(text_b);
  if (config_.temperature == 0.0) {
    if (latent_a != latent_b) {
      return latent_a > latent_b ? Winner::A : Winner::B;
    }
    // Latent tie: a fixed pair property breaks it so presentation order and
    // argument order cannot flip the outcome.
    return text_a < text_b ? Winner::A : Winner::B;
  }
  // Draw from the lexicographically sorted pair so compare(a,b) and
  // compare(b,a) see the same coin and pick the same physical winner.
  const bool a_is_first = text_a < text_b;
  const std::string& first = a_is_first ? text_a : text_b;
  const std::string& second = a_is_first ? text_b : text_a;
  const double latent_first = a_is_first ? latent_a : latent_b;
  const double latent_second = a_is_first ? latent_b : latent_a;
  const double p_first =
      1.0 / (1.0 + std::exp(-(latent_first - latent_second) /
                            config_.temperature));
  Rng rng(mix_seed(mix_seed(config_.seed, fnv1a64(first)), fnv1a64(second)));
  const bool first_wins = rng.next_unit() < p_first;
  return first_wins == a_is_first ? Winner::A : Winner::B;
}

ReplayJudge::ReplayJudge(const std::filesystem::path& log_path) {
  std::ifstream in(log_path);
  if (!in) {
    throw ParseError("cannot open judgment log: " + log_path.string());
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("judgment log line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    const std::string kind = record.value("kind", "");
    if (kind == "identify") {
      const std::string hash = record.at("input_hash").get<std::string>();
      const int score = record.at("score").get<int>();
      identify_by_hash_[std::stoull(hash, nullptr, 16)] = score;
    } else if (kind == "compare") {
      const std::string key = record.at("input_hash").get<std::string>();
      const std::string winner = record.at("winner").get<std::string>();
      compare_by_key_[key] = winner == "A" ? Winner::A : Winner::B;
    } else {
      throw ParseError("judgment log line " + std::to_string(line_no) +
                       ": unknown kind '" + kind + "'");
    }
  }
}

int ReplayJudge::identify(const std::string& text) {
  const auto it = identify_by_hash_.find(fnv1a64(text));
  if (it == identify_by_hash_.end()) {
    throw ReplayMissError("no recorded identification for text: " + text);
  }
  return it->second;
}

Winner ReplayJudge::compare(const std::string& text_a,
                            const std::string& text_b,
                            bool /*presentation_swapped*/) {
  const std::string forward = hex64(fnv1a64(text_a)) + ":" +
                              hex64(fnv1a64(text_b));
  if (const auto it = compare_by_key_.find(forward);
      it != compare_by_key_.end()) {
    return it->second;
  }
  const std::string reverse = hex64(fnv1a64(text_b)) + ":" +
                              hex64(fnv1a64(text_a));
  if (const auto it = compare_by_key_.find(reverse);
      it != compare_by_key_.end()) {
    return it->second == Winner::A ? Winner::B : Winner::A;
  }
  throw ReplayMissError("no recorded comparison for pair: '" + text_a +
                        "' vs '" + text_b + "'");
}

std::optional<int> parse_integer_score(std::string_view reply) {
  for (std::size_t i = 0; i < reply.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(reply[i]))) {
      continue;
    }
    if (i > 0 && reply[i - 1] == '-') {
      return std::nullopt;  // negative numbers are out of scale
    }
    long value = 0;
    std::size_t j = i;
    while (j < reply.size() &&
           std::isdigit(static_cast<unsigned char>(reply[j]))) {
      value = value * 10 + (reply[j] - '0');
      if (value > 100) {
        return std::nullopt;  // clamped-reject: outside [0, 100]
      }
      ++j;
    }
    return static_cast<int>(value);
  }
  return std::nullopt;
}

std::optional<Winner> parse_choice(std::string_view reply) {
  auto is_word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
  };
  // Standalone uppercase letters first; a lowercase 'a' is too easily an
  // article, so lowercase only counts when the whole reply is that letter.
  for (std::size_t i = 0; i < reply.size(); ++i) {
    if (reply[i] != 'A' && reply[i] != 'B') {
      continue;
    }
    const bool left_ok = i == 0 || !is_word_char(reply[i - 1]);
    const bool right_ok = i + 1 == reply.size() || !is_word_char(reply[i + 1]);
    if (left_ok && right_ok) {
      return reply[i] == 'A' ? Winner::A : Winner::B;
    }
  }
  std::string_view trimmed = trim(reply);
  while (!trimmed.empty() &&
         std::ispunct(static_cast<unsigned char>(trimmed.back()))) {
    trimmed.remove_suffix(1);
  }
  if (trimmed == "a") {
    return Winner::A;
  }
  if (trimmed == "b") {
    return Winner::B;
  }
  return std::nullopt;
}

std::string bucket_label(int score) {
  for (const Bucket& bucket : kBuckets) {
    if (score >= bucket.lo && score <= bucket.hi) {
      return bucket.label;
    }
  }
  return "other";
}

std::map<std::string, double> bucket_histogram(
    std::span<const IdentificationJudgment> judgments) {
  if (judgments.empty()) {
    throw InvalidArgumentError("bucket histogram needs at least one judgment");
  }
  std::map<std::string, double> counts;
  for (const IdentificationJudgment& judgment : judgments) {
    if (judgment.score < 0 || judgment.score > 100) {
      throw InvalidArgumentError("identification score out of [0,100]: " +
                                 std::to_string(judgment.score));
    }
    counts[bucket_label(judgment.score)] += 1.0;
  }
  const auto total = static_cast<double>(judgments.size());
  for (auto& [label, count] : counts) {
    count /= total;
  }
  return counts;
}

bool derive_presentation_swap(std::uint64_t seed, std::string_view id_a,
                              std::string_view id_b) {
  return (mix_seed(mix_seed(seed, fnv1a64(id_a)), fnv1a64(id_b)) & 1) != 0;
}

std::unordered_map<std::string, double> load_latent_scores(
    const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t text_col = table.column("text");
  const std::size_t latent_col = table.column("latent");
  std::unordered_map<std::string, double> latents;
  latents.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto line_no = std::to_string(i + 2);
    const std::string key = normalize_text(table.rows[i][text_col]);
    if (key.empty()) {
      throw ParseError("line " + line_no + ": empty text");
    }
    double latent = 0.0;
    try {
      latent = std::stod(table.rows[i][latent_col]);
    } catch (const std::exception&) {
      throw ParseError("line " + line_no + ": bad latent value '" +
                       table.rows[i][latent_col] + "'");
    }
    if (!std::isfinite(latent) || latent < 0.0 || latent > 1.0) {
      throw ParseError("line " + line_no + ": latent outside [0,1]");
    }
    if (!latents.emplace(key, latent).second) {
      throw ParseError("line " + line_no + ": duplicate text key '" + key +
                       "'");
    }
  }
  return latents;
}

}  // namespace biasrank
