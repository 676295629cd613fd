#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>

#include "biasrank/judge.hpp"

namespace biasrank {

// Append-only line-delimited record of every judgment issued, sufficient to
// replay a run exactly via ReplayJudge. Appends are serialized; this is the
// only shared mutable resource under concurrent judging.
class JudgmentLog {
 public:
  explicit JudgmentLog(const std::filesystem::path& path);

  void record_identify(const std::string& text, std::string_view raw_reply,
                       int score);
  void record_compare(const std::string& text_a, const std::string& text_b,
                      std::string_view raw_reply, Winner winner);

  const std::filesystem::path& path() const { return path_; }

 private:
  void append(const std::string& line);

  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mutex_;
};

// Decorator that forwards to an inner judge and records every judgment.
class LoggingJudge : public Judge {
 public:
  LoggingJudge(Judge& inner, JudgmentLog& log) : inner_(inner), log_(log) {}

  int identify(const std::string& text) override;
  Winner compare(const std::string& text_a, const std::string& text_b,
                 bool presentation_swapped) override;
  std::string kind() const override { return inner_.kind(); }

 private:
  Judge& inner_;
  JudgmentLog& log_;
};

}  // namespace biasrank
