#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace biasrank {

enum class Engine { Bing, Google };

std::string engine_name(Engine engine);
std::optional<Engine> parse_engine(std::string_view name);

// One query suggestion. expansion is the a-z letter the root query was
// extended with, or empty for the root query itself. id is assigned at
// deduplication and empty before it.
struct SuggestionRecord {
  std::string id;
  std::string text;
  std::string topic;
  Engine engine = Engine::Bing;
  std::optional<char> expansion;
};

enum class DatasetStage { Raw, Deduplicated };

struct Dataset {
  std::vector<SuggestionRecord> records;
  DatasetStage stage = DatasetStage::Raw;

  std::size_t count_engine(Engine engine) const;
};

// Reads a raw suggestion file (columns: text, topic, engine, expansion;
// comma- or tab-separated with a header row). Engine values are the closed
// set {Bing, Google}; anything else is a parse error naming the line.
Dataset ingest(const std::filesystem::path& path);

// Drops records whose normalized text repeats an earlier record of the same
// engine, keeping the first occurrence, and assigns stable record ids
// (B00001..., G00001...). Requires the raw stage.
Dataset deduplicate(const Dataset& dataset);

// Stage artifact I/O (adds the id column to the raw schema).
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_deduplicated(const std::filesystem::path& path);

}  // namespace biasrank
