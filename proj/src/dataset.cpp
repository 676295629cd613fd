#include "biasrank/dataset.hpp"

#include <algorithm>
#include <unordered_set>

#include "biasrank/csv.hpp"
#include "biasrank/errors.hpp"
#include "biasrank/text_util.hpp"

namespace biasrank {
namespace {

std::optional<char> parse_expansion(std::string_view field,
                                    std::size_t line_no) {
  const std::string_view trimmed = trim(field);
  if (trimmed.empty()) {
    return std::nullopt;
  }
  if (trimmed.size() == 1 && trimmed[0] >= 'a' && trimmed[0] <= 'z') {
    return trimmed[0];
  }
  throw ParseError("line " + std::to_string(line_no) +
                   ": expansion must be a single letter a-z or empty, got '" +
                   std::string(field) + "'");
}

std::string padded_id(char prefix, std::size_t n) {
  std::string digits = std::to_string(n);
  std::string out(1, prefix);
  if (digits.size() < 5) {
    out.append(5 - digits.size(), '0');
  }
  return out + digits;
}

SuggestionRecord parse_record(const std::vector<std::string>& row,
                              std::size_t text_col, std::size_t topic_col,
                              std::size_t engine_col, std::size_t exp_col,
                              std::size_t line_no) {
  SuggestionRecord record;
  record.text = std::string(trim(row[text_col]));
  if (record.text.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": empty text");
  }
  record.topic = std::string(trim(row[topic_col]));
  if (record.topic.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": empty topic");
  }
  const auto engine = parse_engine(row[engine_col]);
  if (!engine) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": unknown engine '" + row[engine_col] +
                     "' (expected Bing or Google)");
  }
  record.engine = *engine;
  record.expansion = parse_expansion(row[exp_col], line_no);
  return record;
}

}  // namespace

std::string engine_name(Engine engine) {
  return engine == Engine::Bing ? "Bing" : "Google";
}

std::optional<Engine> parse_engine(std::string_view name) {
  const std::string key = normalize_text(name);
  if (key == "bing") {
    return Engine::Bing;
  }
  if (key == "google") {
    return Engine::Google;
  }
  return std::nullopt;
}

std::size_t Dataset::count_engine(Engine engine) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(),
                    [&](const SuggestionRecord& r) { return r.engine == engine; }));
}

Dataset ingest(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t text_col = table.column("text");
  const std::size_t topic_col = table.column("topic");
  const std::size_t engine_col = table.column("engine");
  const std::size_t exp_col = table.column("expansion");

  Dataset dataset;
  dataset.stage = DatasetStage::Raw;
  dataset.records.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    dataset.records.push_back(parse_record(table.rows[i], text_col, topic_col,
                                           engine_col, exp_col, i + 2));
  }
  return dataset;
}

Dataset deduplicate(const Dataset& dataset) {
  if (dataset.stage != DatasetStage::Raw) {
    throw StageOrderError("deduplicate expects a raw dataset");
  }
  Dataset out;
  out.stage = DatasetStage::Deduplicated;
  out.records.reserve(dataset.records.size());
  // Dedup keys are scoped per engine: the same text under Bing and Google is
  // two records.
  std::unordered_set<std::string> seen_bing, seen_google;
  std::size_t next_bing = 0, next_google = 0;
  for (const SuggestionRecord& record : dataset.records) {
    auto& seen = record.engine == Engine::Bing ? seen_bing : seen_google;
    if (!seen.insert(normalize_text(record.text)).second) {
      continue;
    }
    SuggestionRecord kept = record;
    kept.id = record.engine == Engine::Bing ? padded_id('B', ++next_bing)
                                            : padded_id('G', ++next_google);
    out.records.push_back(std::move(kept));
  }
  return out;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(dataset.records.size());
  for (const SuggestionRecord& record : dataset.records) {
    rows.push_back({record.id, record.text, record.topic,
                    engine_name(record.engine),
                    record.expansion ? std::string(1, *record.expansion)
                                     : std::string()});
  }
  write_csv(path, {"id", "text", "topic", "engine", "expansion"}, rows);
}

Dataset load_deduplicated(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t id_col = table.column("id");
  const std::size_t text_col = table.column("text");
  const std::size_t topic_col = table.column("topic");
  const std::size_t engine_col = table.column("engine");
  const std::size_t exp_col = table.column("expansion");

  Dataset dataset;
  dataset.stage = DatasetStage::Deduplicated;
  dataset.records.reserve(table.rows.size());
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    SuggestionRecord record = parse_record(table.rows[i], text_col, topic_col,
                                           engine_col, exp_col, i + 2);
    record.id = std::string(trim(table.rows[i][id_col]));
    if (record.id.empty()) {
      throw ParseError("line " + std::to_string(i + 2) + ": empty record id");
    }
    if (!ids.insert(record.id).second) {
      throw ParseError("line " + std::to_string(i + 2) +
                       ": duplicate record id '" + record.id + "'");
    }
    dataset.records.push_back(std::move(record));
  }
  return dataset;
}

}  // namespace biasrank
