#include "biasrank/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

#include "biasrank/csv.hpp"
#include "biasrank/errors.hpp"
#include "biasrank/parallel.hpp"
#include "biasrank/rng.hpp"

namespace biasrank {
namespace {

// Re-throws judge errors with the offending item named, preserving the type.
template <typename Fn>
auto with_context(const std::string& context, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ReplayMissError& e) {
    throw ReplayMissError(context + ": " + e.what());
  } catch (const JudgeProtocolError& e) {
    throw JudgeProtocolError(context + ": " + e.what());
  } catch (const TransportError& e) {
    throw TransportError(context + ": " + e.what());
  } catch (const InvalidArgumentError& e) {
    throw InvalidArgumentError(context + ": " + e.what());
  }
}

std::vector<std::vector<std::string>> scored_rows(
    const Dataset& dataset, std::span<const BiasScoreRecord> records,
    bool with_expansion) {
  std::unordered_map<std::string, const BiasScoreRecord*> by_id;
  by_id.reserve(records.size());
  for (const BiasScoreRecord& record : records) {
    if (!by_id.emplace(record.text_id, &record).second) {
      throw InvalidArgumentError("duplicate text id in score records: " +
                                 record.text_id);
    }
  }
  std::vector<std::vector<std::string>> rows;
  rows.reserve(dataset.records.size());
  for (const SuggestionRecord& suggestion : dataset.records) {
    const auto it = by_id.find(suggestion.id);
    if (it == by_id.end()) {
      throw InvalidArgumentError("no score record for dataset id " +
                                 suggestion.id);
    }
    const BiasScoreRecord& record = *it->second;
    std::vector<std::string> row{suggestion.id, suggestion.text,
                                 suggestion.topic,
                                 engine_name(suggestion.engine)};
    if (with_expansion) {
      row.push_back(suggestion.expansion ? std::string(1, *suggestion.expansion)
                                         : std::string());
      row.push_back(std::to_string(record.identification_score));
      row.push_back(bias_label_name(record.label));
    } else {
      row.push_back(bias_label_name(record.label));
      row.push_back(std::to_string(record.identification_score));
      row.push_back(format_score(record.bias_score));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

BiasLabel parse_label(const std::string& value, std::size_t line_no) {
  if (value == "biased") {
    return BiasLabel::Biased;
  }
  if (value == "unbiased") {
    return BiasLabel::Unbiased;
  }
  throw ParseError("line " + std::to_string(line_no) + ": unknown label '" +
                   value + "'");
}

int parse_int_field(const std::string& value, std::size_t line_no,
                    const char* what) {
  try {
    return std::stoi(value);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                     " '" + value + "'");
  }
}

double parse_double_field(const std::string& value, std::size_t line_no,
                          const char* what) {
  try {
    return std::stod(value);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                     " '" + value + "'");
  }
}

}  // namespace

std::string bias_label_name(BiasLabel label) {
  return label == BiasLabel::Biased ? "biased" : "unbiased";
}

std::string format_score(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

std::vector<BiasScoreRecord> identify_stage(const Dataset& dataset,
                                            Judge& judge, int threshold,
                                            int parallelism) {
  if (dataset.stage != DatasetStage::Deduplicated) {
    throw StageOrderError("identify expects a deduplicated dataset");
  }
  std::vector<int> scores(dataset.records.size(), 0);
  parallel_for_index(dataset.records.size(), parallelism, [&](std::size_t i) {
    const SuggestionRecord& record = dataset.records[i];
    scores[i] = with_context("text " + record.id,
                             [&] { return judge.identify(record.text); });
  });
  std::vector<BiasScoreRecord> records;
  records.reserve(dataset.records.size());
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    BiasScoreRecord record;
    record.text_id = dataset.records[i].id;
    record.identification_score = scores[i];
    // Strictly greater: a score of exactly `threshold` stays unbiased.
    record.label =
        scores[i] > threshold ? BiasLabel::Biased : BiasLabel::Unbiased;
    record.bias_score = 0.0;
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<EloState> elo_ratings_for_schedule(
    const Schedule& schedule,
    const std::unordered_map<std::string, std::string>& text_by_id,
    Judge& judge, const EloConfig& elo, std::uint64_t presentation_seed,
    int parallelism) {
  elo.validate();
  // Collect the items in first-appearance order so results do not depend on
  // map iteration.
  std::vector<EloState> states;
  std::unordered_map<std::string, std::size_t> index_of;
  for (const ScheduledPair& pair : schedule.pairs) {
    for (const std::string& id : {pair.item_a, pair.item_b}) {
      if (index_of.emplace(id, states.size()).second) {
        if (text_by_id.find(id) == text_by_id.end()) {
          throw InvalidArgumentError("schedule references unknown item " + id);
        }
        states.push_back({id, elo.initial_rating, 0});
      }
    }
  }

  // Judging may fan out across threads; the rating walk below stays strictly
  // in schedule order, which the update rule is sensitive to.
  std::vector<Winner> winners(schedule.pairs.size(), Winner::A);
  parallel_for_index(schedule.pairs.size(), parallelism, [&](std::size_t i) {
    const ScheduledPair& pair = schedule.pairs[i];
    const std::string& text_a = text_by_id.at(pair.item_a);
    const std::string& text_b = text_by_id.at(pair.item_b);
    const bool swap =
        derive_presentation_swap(presentation_seed, pair.item_a, pair.item_b);
    winners[i] = with_context(
        "pair (" + pair.item_a + ", " + pair.item_b + ")",
        [&] { return judge.compare(text_a, text_b, swap); });
  });

  for (std::size_t i = 0; i < schedule.pairs.size(); ++i) {
    const ScheduledPair& pair = schedule.pairs[i];
    MatchOutcome outcome{pair.item_a, pair.item_b, winners[i]};
    apply_match(states[index_of[pair.item_a]], states[index_of[pair.item_b]],
                outcome, elo);
  }
  return states;
}

Schedule quantify_stage(std::vector<BiasScoreRecord>& biased,
                        const Dataset& dataset, Judge& judge,
                        const PairingConfig& pairing, const EloConfig& elo,
                        int parallelism) {
  if (dataset.stage != DatasetStage::Deduplicated) {
    throw StageOrderError("quantify expects a deduplicated dataset");
  }
  std::unordered_map<std::string, std::string> text_by_id;
  text_by_id.reserve(dataset.records.size());
  for (const SuggestionRecord& record : dataset.records) {
    text_by_id.emplace(record.id, record.text);
  }
  std::vector<std::string> item_ids;
  item_ids.reserve(biased.size());
  for (const BiasScoreRecord& record : biased) {
    if (record.label != BiasLabel::Biased) {
      throw InvalidArgumentError("quantify expects only biased records, got " +
                                 record.text_id);
    }
    if (text_by_id.find(record.text_id) == text_by_id.end()) {
      throw InvalidArgumentError("biased record " + record.text_id +
                                 " is not in the dataset");
    }
    item_ids.push_back(record.text_id);
  }

  const Schedule schedule = build_schedule(item_ids, pairing);
  const std::vector<EloState> states = elo_ratings_for_schedule(
      schedule, text_by_id, judge, elo, pairing.seed, parallelism);
  const std::map<std::string, double> scores = normalize_ratings(states);

  std::unordered_map<std::string, double> rating_by_id;
  rating_by_id.reserve(states.size());
  for (const EloState& state : states) {
    rating_by_id.emplace(state.item_id, state.rating);
  }
  for (BiasScoreRecord& record : biased) {
    record.elo_rating = rating_by_id.at(record.text_id);
    record.bias_score = scores.at(record.text_id);
  }
  return schedule;
}

double interpolated_quantile(std::span<const double> sorted_values, double q) {
  if (sorted_values.empty()) {
    throw InvalidArgumentError("quantile of an empty sample");
  }
  if (q < 0.0 || q > 1.0) {
    throw InvalidArgumentError("quantile fraction outside [0,1]");
  }
  const double position = q * static_cast<double>(sorted_values.size() - 1);
  const auto lo = static_cast<std::size_t>(position);
  const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
  const double frac = position - static_cast<double>(lo);
  return sorted_values[lo] + (sorted_values[hi] - sorted_values[lo]) * frac;
}

std::vector<CategoryReport> build_reports(
    std::span<const BiasScoreRecord> records, const Dataset& dataset) {
  std::unordered_map<std::string, const BiasScoreRecord*> by_id;
  by_id.reserve(records.size());
  for (const BiasScoreRecord& record : records) {
    if (!by_id.emplace(record.text_id, &record).second) {
      throw InvalidArgumentError("duplicate text id in score records: " +
                                 record.text_id);
    }
  }

  struct Cell {
    double score_sum = 0.0;
    std::size_t count = 0;
    std::vector<double> biased_scores;
  };
  std::map<std::pair<std::string, std::string>, Cell> cells;
  for (const SuggestionRecord& suggestion : dataset.records) {
    const auto it = by_id.find(suggestion.id);
    if (it == by_id.end()) {
      throw InvalidArgumentError("no score record for dataset id " +
                                 suggestion.id);
    }
    Cell& cell = cells[{suggestion.topic, engine_name(suggestion.engine)}];
    cell.score_sum += it->second->bias_score;
    ++cell.count;
    if (it->second->label == BiasLabel::Biased) {
      cell.biased_scores.push_back(it->second->bias_score);
    }
  }

  std::vector<CategoryReport> reports;
  reports.reserve(cells.size());
  for (auto& [key, cell] : cells) {
    CategoryReport report;
    report.topic = key.first;
    report.engine = *parse_engine(key.second);
    report.mean_bias = cell.score_sum / static_cast<double>(cell.count);
    report.biased_count = cell.biased_scores.size();
    if (cell.biased_scores.size() > 8) {
      std::sort(cell.biased_scores.begin(), cell.biased_scores.end());
      Boxplot box;
      box.min = cell.biased_scores.front();
      box.max = cell.biased_scores.back();
      box.q1 = interpolated_quantile(cell.biased_scores, 0.25);
      box.median = interpolated_quantile(cell.biased_scores, 0.5);
      box.q3 = interpolated_quantile(cell.biased_scores, 0.75);
      double sum = 0.0;
      for (double v : cell.biased_scores) {
        sum += v;
      }
      box.mean = sum / static_cast<double>(cell.biased_scores.size());
      report.boxplot = box;
    }
    reports.push_back(std::move(report));
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const CategoryReport& a, const CategoryReport& b) {
                     if (a.mean_bias != b.mean_bias) {
                       return a.mean_bias > b.mean_bias;
                     }
                     if (a.topic != b.topic) {
                       return a.topic < b.topic;
                     }
                     return engine_name(a.engine) < engine_name(b.engine);
                   });
  return reports;
}

void write_identified(const std::filesystem::path& path,
                      const Dataset& dataset,
                      std::span<const BiasScoreRecord> records) {
  write_csv(path,
            {"id", "text", "topic", "engine", "expansion",
             "identification_score", "label"},
            scored_rows(dataset, records, /*with_expansion=*/true));
}

std::pair<Dataset, std::vector<BiasScoreRecord>> read_identified(
    const std::filesystem::path& path) {
  Dataset dataset = load_deduplicated(path);
  const CsvTable table = read_csv(path);
  const std::size_t id_col = table.column("id");
  const std::size_t score_col = table.column("identification_score");
  const std::size_t label_col = table.column("label");
  std::vector<BiasScoreRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    BiasScoreRecord record;
    record.text_id = table.rows[i][id_col];
    record.identification_score = parse_int_field(
        table.rows[i][score_col], i + 2, "identification score");
    record.label = parse_label(table.rows[i][label_col], i + 2);
    records.push_back(std::move(record));
  }
  return {std::move(dataset), std::move(records)};
}

void write_scored(const std::filesystem::path& path, const Dataset& dataset,
                  std::span<const BiasScoreRecord> records) {
  write_csv(path,
            {"text_id", "text", "topic", "engine", "label",
             "identification_score", "bias_score"},
            scored_rows(dataset, records, /*with_expansion=*/false));
}

std::vector<BiasScoreRecord> read_scored(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t id_col = table.column("text_id");
  const std::size_t label_col = table.column("label");
  const std::size_t score_col = table.column("identification_score");
  const std::size_t bias_col = table.column("bias_score");
  std::vector<BiasScoreRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    BiasScoreRecord record;
    record.text_id = table.rows[i][id_col];
    record.label = parse_label(table.rows[i][label_col], i + 2);
    record.identification_score = parse_int_field(
        table.rows[i][score_col], i + 2, "identification score");
    record.bias_score =
        parse_double_field(table.rows[i][bias_col], i + 2, "bias score");
    records.push_back(std::move(record));
  }
  return records;
}

void write_category_reports(const std::filesystem::path& categories_path,
                            const std::filesystem::path& boxplots_path,
                            std::span<const CategoryReport> reports) {
  std::vector<std::vector<std::string>> category_rows;
  std::vector<std::vector<std::string>> boxplot_rows;
  category_rows.reserve(reports.size());
  for (const CategoryReport& report : reports) {
    category_rows.push_back({report.topic, engine_name(report.engine),
                             format_score(report.mean_bias),
                             std::to_string(report.biased_count)});
    if (report.boxplot) {
      boxplot_rows.push_back(
          {report.topic, engine_name(report.engine),
           format_score(report.boxplot->min), format_score(report.boxplot->q1),
           format_score(report.boxplot->median),
           format_score(report.boxplot->q3), format_score(report.boxplot->max),
           format_score(report.boxplot->mean)});
    }
  }
  write_csv(categories_path, {"topic", "engine", "mean_bias", "biased_count"},
            category_rows);
  write_csv(boxplots_path,
            {"topic", "engine", "min", "q1", "median", "q3", "max", "mean"},
            boxplot_rows);
}

void write_histogram(const std::filesystem::path& path,
                     const std::map<std::string, double>& histogram) {
  static const char* kOrder[] = {"0-10", "20", "30", "50", "65-85", "other"};
  std::vector<std::vector<std::string>> rows;
  for (const char* label : kOrder) {
    const auto it = histogram.find(label);
    if (it != histogram.end()) {
      rows.push_back({label, format_score(it->second)});
    }
  }
  write_csv(path, {"bucket", "fraction"}, rows);
}

}  // namespace biasrank
