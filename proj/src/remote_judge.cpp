#include "biasrank/remote_judge.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "biasrank/errors.hpp"
#include "biasrank/judgment_log.hpp"
#include "biasrank/rng.hpp"
#include "biasrank/text_util.hpp"

namespace biasrank {
namespace {

struct ParsedEndpoint {
  std::string base_url;
  std::string path;
};

ParsedEndpoint parse_endpoint(const std::string& endpoint) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw InvalidArgumentError("endpoint needs a scheme: " + endpoint);
  }
  const std::string scheme = endpoint.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw InvalidArgumentError("unsupported endpoint scheme: " + scheme);
  }
  const auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    throw InvalidArgumentError("endpoint needs a request path: " + endpoint);
  }
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

bool retriable_status(int status) {
  return status == 429 || status >= 500;
}

}  // namespace

RemoteJudge::RemoteJudge(RemoteJudgeConfig config, JudgmentLog* judgment_log)
    : config_(std::move(config)), judgment_log_(judgment_log) {
  config_.templates.validate();
  if (config_.max_retries < 0) {
    throw InvalidArgumentError("max_retries must be >= 0");
  }
  if (config_.api_key.empty()) {
    const char* env = std::getenv(config_.api_key_env.c_str());
    if (env == nullptr || *env == '\0') {
      throw InvalidArgumentError("no API key: set the " + config_.api_key_env +
                                 " environment variable");
    }
    config_.api_key = env;
  }
  const ParsedEndpoint parsed = parse_endpoint(config_.endpoint);
  base_url_ = parsed.base_url;
  path_ = parsed.path;
  load_cache();
}

RemoteJudge::~RemoteJudge() = default;

std::string RemoteJudge::cache_key(const std::string& prompt) const {
  return config_.model + ":" + hex64(fnv1a64(prompt));
}

void RemoteJudge::load_cache() {
  if (config_.cache_path.empty()) {
    return;
  }
  std::ifstream in(config_.cache_path);
  if (!in) {
    return;  // first run; the file is created on the first store
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    try {
      const nlohmann::json record = nlohmann::json::parse(line);
      cache_[record.at("key").get<std::string>()] =
          record.at("reply").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("reply cache line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
}

void RemoteJudge::store_cached(const std::string& key,
                               const std::string& reply) {
  std::lock_guard<std::mutex> lock(mutex_);
  cache_[key] = reply;
  if (config_.cache_path.empty()) {
    return;
  }
  std::ofstream out(config_.cache_path, std::ios::binary | std::ios::app);
  if (!out) {
    throw Error("cannot append to reply cache: " +
                config_.cache_path.string());
  }
  nlohmann::json record;
  record["key"] = key;
  record["reply"] = reply;
  out << record.dump() << '\n';
}

std::string RemoteJudge::fetch(const std::string& prompt) {
  nlohmann::json body;
  body["model"] = config_.model;
  body["temperature"] = config_.temperature;
  body["messages"] =
      nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
  const std::string payload = body.dump();

  const httplib::Headers headers = {
      {"Authorization", "Bearer " + config_.api_key},
  };

  std::string last_failure;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config_.retry_backoff_ms * attempt));
    }
    httplib::Client client(base_url_);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      ++requests_issued_;
    }
    auto result = client.Post(path_, headers, payload, "application/json");
    if (!result) {
      last_failure = "transport error: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status != 200) {
      last_failure = "HTTP status " + std::to_string(result->status);
      if (retriable_status(result->status)) {
        continue;
      }
      throw TransportError("judge endpoint rejected the request (" +
                           last_failure + ")");
    }
    try {
      const nlohmann::json response = nlohmann::json::parse(result->body);
      return response.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw JudgeProtocolError(std::string("malformed judge response: ") +
                               e.what());
    }
  }
  throw TransportError("judge endpoint unreachable after " +
                       std::to_string(config_.max_retries + 1) +
                       " attempts (" + last_failure + ")");
}

int RemoteJudge::identify(const std::string& text) {
  if (normalize_text(text).empty()) {
    throw InvalidArgumentError("cannot judge an empty text");
  }
  const std::string prompt = config_.templates.render_identification(text);
  const std::string key = cache_key(prompt);

  std::optional<std::string> reply;
  bool from_cache = false;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) {
      ++cache_hits_;
      reply = it->second;
      from_cache = true;
    }
  }
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (!reply) {
      reply = fetch(prompt);
      from_cache = false;
    }
    const std::optional<int> score = parse_integer_score(*reply);
    if (score) {
      if (!from_cache) {
        store_cached(key, *reply);
      }
      if (judgment_log_ != nullptr) {
        judgment_log_->record_identify(text, *reply, *score);
      }
      return *score;
    }
    reply.reset();  // unparsable, re-ask
  }
  throw JudgeProtocolError("no parsable 0-100 score after " +
                           std::to_string(config_.max_retries + 1) +
                           " attempts for text: " + text);
}

Winner RemoteJudge::compare(const std::string& text_a,
                            const std::string& text_b,
                            bool presentation_swapped) {
  if (normalize_text(text_a).empty() || normalize_text(text_b).empty()) {
    throw InvalidArgumentError("cannot judge an empty text");
  }
  if (text_a == text_b) {
    throw InvalidArgumentError("compare needs two distinct texts");
  }
  const std::string& first = presentation_swapped ? text_b : text_a;
  const std::string& second = presentation_swapped ? text_a : text_b;
  const std::string prompt = config_.templates.render_comparison(first, second);
  const std::string key = cache_key(prompt);

  std::optional<std::string> reply;
  bool from_cache = false;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) {
      ++cache_hits_;
      reply = it->second;
      from_cache = true;
    }
  }
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (!reply) {
      reply = fetch(prompt);
      from_cache = false;
    }
    const std::optional<Winner> choice = parse_choice(*reply);
    if (choice) {
      if (!from_cache) {
        store_cached(key, *reply);
      }
      // The reply names the shown positions; map back to canonical (a, b).
      Winner winner = *choice;
      if (presentation_swapped) {
        winner = winner == Winner::A ? Winner::B : Winner::A;
      }
      if (judgment_log_ != nullptr) {
        judgment_log_->record_compare(text_a, text_b, *reply, winner);
      }
      return winner;
    }
    reply.reset();  // refusal or unparsable, re-ask
  }
  throw JudgeProtocolError("no A/B choice after " +
                           std::to_string(config_.max_retries + 1) +
                           " attempts for pair: '" + text_a + "' vs '" +
                           text_b + "'");
}

std::uint64_t RemoteJudge::requests_issued() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return requests_issued_;
}

std::uint64_t RemoteJudge::cache_hits() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_hits_;
}

}  // namespace biasrank
