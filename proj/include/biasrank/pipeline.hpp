#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "biasrank/dataset.hpp"
#include "biasrank/elo.hpp"
#include "biasrank/judge.hpp"
#include "biasrank/pairing.hpp"

namespace biasrank {

enum class BiasLabel { Unbiased, Biased };

std::string bias_label_name(BiasLabel label);

// Final per-text verdict. Unbiased records keep bias_score 0 and no rating;
// biased records get a rating and the min-max normalized score after the
// quantification stage.
struct BiasScoreRecord {
  std::string text_id;
  BiasLabel label = BiasLabel::Unbiased;
  int identification_score = 0;
  std::optional<double> elo_rating;
  double bias_score = 0.0;
};

struct Boxplot {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct CategoryReport {
  std::string topic;
  Engine engine = Engine::Bing;
  // Mean over biased AND unbiased records of the cell; unbiased contribute 0.
  double mean_bias = 0.0;
  std::size_t biased_count = 0;
  // Present only when the cell holds more than 8 biased records.
  std::optional<Boxplot> boxplot;
};

// Scores every deduplicated record once and labels it biased iff the
// identification score is strictly greater than threshold. Judge errors
// propagate with the offending text id prefixed.
std::vector<BiasScoreRecord> identify_stage(const Dataset& dataset,
                                            Judge& judge, int threshold = 10,
                                            int parallelism = 1);

// Judges every scheduled pair and applies the rating updates strictly in
// schedule order (judging itself may run on several threads). Returns the
// final state per item id, matches_played = schedule rounds each.
std::vector<EloState> elo_ratings_for_schedule(
    const Schedule& schedule,
    const std::unordered_map<std::string, std::string>& text_by_id,
    Judge& judge, const EloConfig& elo, std::uint64_t presentation_seed,
    int parallelism = 1);

// Runs the comparison schedule over the biased records (all labels must be
// Biased), then attaches ratings and min-max normalized bias scores.
// Returns the schedule that was played, for audit files and manifests.
Schedule quantify_stage(std::vector<BiasScoreRecord>& biased,
                        const Dataset& dataset, Judge& judge,
                        const PairingConfig& pairing, const EloConfig& elo,
                        int parallelism = 1);

// Per (topic, engine) aggregation over all records, ordered by descending
// mean. Boxplot stats (linear-interpolation quantiles over biased-only
// scores) appear only for cells with more than 8 biased records.
std::vector<CategoryReport> build_reports(
    std::span<const BiasScoreRecord> records, const Dataset& dataset);

// Quantile by linear interpolation between closest ranks; values must be
// sorted ascending and non-empty. q in [0, 1].
double interpolated_quantile(std::span<const double> sorted_values, double q);

// Stage artifact files ------------------------------------------------------

// identified.csv: id,text,topic,engine,expansion,identification_score,label
void write_identified(const std::filesystem::path& path,
                      const Dataset& dataset,
                      std::span<const BiasScoreRecord> records);
std::pair<Dataset, std::vector<BiasScoreRecord>> read_identified(
    const std::filesystem::path& path);

// scored.csv: text_id,text,topic,engine,label,identification_score,bias_score
void write_scored(const std::filesystem::path& path, const Dataset& dataset,
                  std::span<const BiasScoreRecord> records);
std::vector<BiasScoreRecord> read_scored(const std::filesystem::path& path);

// categories.csv + boxplots.csv (boxplot rows only where biased_count > 8)
void write_category_reports(const std::filesystem::path& categories_path,
                            const std::filesystem::path& boxplots_path,
                            std::span<const CategoryReport> reports);

// histogram.csv: bucket,fraction in canonical bucket order
void write_histogram(const std::filesystem::path& path,
                     const std::map<std::string, double>& histogram);

// Fixed-precision float formatting shared by every emitted file so outputs
// are byte-stable.
std::string format_score(double value);

}  // namespace biasrank
