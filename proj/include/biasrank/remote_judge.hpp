#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <unordered_map>

#include "biasrank/judge.hpp"

namespace biasrank {

class JudgmentLog;

struct RemoteJudgeConfig {
  // Full chat-completions endpoint URL, scheme://host[:port]/path.
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4-1106-preview";
  // The key is read from this environment variable unless api_key is set
  // directly (tests only); it never goes through config files.
  std::string api_key_env = "BIASRANK_API_KEY";
  std::string api_key;
  double temperature = 0.0;  // deterministic decoding
  int max_retries = 3;
  int retry_backoff_ms = 250;
  int timeout_seconds = 60;
  // Optional (model, prompt-hash) -> reply cache; a hit never re-issues a
  // request. Empty path disables persistence (in-memory cache only).
  std::filesystem::path cache_path;
  PromptTemplates templates = PromptTemplates::defaults();
};

// LLM judge speaking the chat-completions wire format. Transport failures
// retry with backoff and end in TransportError; replies that never parse to
// a valid score/choice end in JudgeProtocolError.
class RemoteJudge : public Judge {
 public:
  explicit RemoteJudge(RemoteJudgeConfig config,
                       JudgmentLog* judgment_log = nullptr);
  ~RemoteJudge() override;

  int identify(const std::string& text) override;
  Winner compare(const std::string& text_a, const std::string& text_b,
                 bool presentation_swapped) override;
  std::string kind() const override { return "remote"; }

  std::uint64_t requests_issued() const;
  std::uint64_t cache_hits() const;

 private:
  std::string fetch(const std::string& prompt);
  std::string cache_key(const std::string& prompt) const;
  void load_cache();
  void store_cached(const std::string& key, const std::string& reply);

  RemoteJudgeConfig config_;
  JudgmentLog* judgment_log_;

  std::string base_url_;  // scheme://host[:port]
  std::string path_;      // /v1/chat/completions

  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::string> cache_;
  std::uint64_t requests_issued_ = 0;
  std::uint64_t cache_hits_ = 0;
};

}  // namespace biasrank
