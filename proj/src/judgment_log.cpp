#include "biasrank/judgment_log.hpp"

#include <chrono>
#include <ctime>

#include <json.hpp>

#include "biasrank/errors.hpp"
#include "biasrank/rng.hpp"

namespace biasrank {
namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

JudgmentLog::JudgmentLog(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::app) {
  if (!out_) {
    throw Error("cannot open judgment log for append: " + path.string());
  }
}

void JudgmentLog::append(const std::string& line) {
  std::lock_guard<std::mutex> lock(mutex_);
  out_ << line << '\n';
  out_.flush();
  if (!out_) {
    throw Error("judgment log write failed: " + path_.string());
  }
}

void JudgmentLog::record_identify(const std::string& text,
                                  std::string_view raw_reply, int score) {
  nlohmann::json record;
  record["kind"] = "identify";
  record["input_hash"] = hex64(fnv1a64(text));
  record["raw"] = std::string(raw_reply);
  record["score"] = score;
  record["ts"] = utc_timestamp();
  append(record.dump());
}

void JudgmentLog::record_compare(const std::string& text_a,
                                 const std::string& text_b,
                                 std::string_view raw_reply, Winner winner) {
  nlohmann::json record;
  record["kind"] = "compare";
  record["input_hash"] = hex64(fnv1a64(text_a)) + ":" + hex64(fnv1a64(text_b));
  record["raw"] = std::string(raw_reply);
  record["winner"] = winner == Winner::A ? "A" : "B";
  record["ts"] = utc_timestamp();
  append(record.dump());
}

int LoggingJudge::identify(const std::string& text) {
  const int score = inner_.identify(text);
  log_.record_identify(text, "", score);
  return score;
}

Winner LoggingJudge::compare(const std::string& text_a,
                             const std::string& text_b,
                             bool presentation_swapped) {
  const Winner winner = inner_.compare(text_a, text_b, presentation_swapped);
  log_.record_compare(text_a, text_b, "", winner);
  return winner;
}

}  // namespace biasrank
