#include "biasrank/simulation.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "biasrank/csv.hpp"
#include "biasrank/errors.hpp"
#include "biasrank/judge.hpp"
#include "biasrank/metrics.hpp"
#include "biasrank/parallel.hpp"
#include "biasrank/pipeline.hpp"
#include "biasrank/rng.hpp"

namespace biasrank {
namespace {

constexpr std::uint64_t kTrialSalt = 0x747269616C73ULL;
constexpr std::uint64_t kLatentSalt = 0x6C6174656E74ULL;
constexpr std::uint64_t kScheduleSalt = 0x7363686564ULL;
constexpr std::uint64_t kJudgeSalt = 0x6A75646765ULL;

std::string item_id(int index) {
  std::string digits = std::to_string(index + 1);
  std::string out = "item";
  if (digits.size() < 6) {
    out.append(6 - digits.size(), '0');
  }
  return out + digits;
}

double sample_sd(const std::vector<double>& values, double mean) {
  if (values.size() < 2) {
    return 0.0;
  }
  double sum_sq = 0.0;
  for (double v : values) {
    sum_sq += (v - mean) * (v - mean);
  }
  return std::sqrt(sum_sq / static_cast<double>(values.size() - 1));
}

}  // namespace

void SimConfig::validate() const {
  if (max_rounds < 2 || max_rounds % 2 != 0) {
    throw InvalidArgumentError("max_rounds must be even and >= 2");
  }
  if (n_items <= max_rounds) {
    throw InvalidArgumentError(
        "n_items must exceed max_rounds (need more items than rounds)");
  }
  if (trials < 1) {
    throw InvalidArgumentError("trials must be >= 1");
  }
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw InvalidArgumentError("temperature must be finite and >= 0");
  }
}

SimResult run_convergence(const SimConfig& config, int parallelism) {
  config.validate();

  std::vector<int> round_counts;
  for (int r = 2; r <= config.max_rounds; r += 2) {
    round_counts.push_back(r);
  }

  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(config.n_items));
  std::unordered_map<std::string, std::string> text_by_id;
  for (int i = 0; i < config.n_items; ++i) {
    ids.push_back(item_id(i));
    text_by_id.emplace(ids.back(), ids.back());
  }

  // rho/tau per [round][trial]
  std::vector<std::vector<double>> rho(
      round_counts.size(), std::vector<double>(config.trials, 0.0));
  std::vector<std::vector<double>> tau = rho;

  parallel_for_index(
      static_cast<std::size_t>(config.trials), parallelism,
      [&](std::size_t trial) {
        const std::uint64_t trial_seed =
            mix_seed(mix_seed(config.seed, kTrialSalt), trial);
        Rng latent_rng(mix_seed(trial_seed, kLatentSalt));
        std::unordered_map<std::string, double> latents;
        latents.reserve(ids.size());
        std::vector<ScoredItem> latent_ranking;
        latent_ranking.reserve(ids.size());
        for (const std::string& id : ids) {
          const double latent = latent_rng.next_unit();
          latents.emplace(id, latent);
          latent_ranking.push_back({id, latent});
        }

        for (std::size_t ri = 0; ri < round_counts.size(); ++ri) {
          const int rounds = round_counts[ri];
          // Each budget gets its own schedule built from scratch, so the
          // measurement at r rounds is self-contained.
          PairingConfig pairing;
          pairing.rounds = rounds;
          pairing.seed = mix_seed(trial_seed,
                                  kScheduleSalt + static_cast<std::uint64_t>(rounds));
          SyntheticJudgeConfig judge_config;
          judge_config.latent_scores = latents;
          judge_config.temperature = config.temperature;
          judge_config.seed = mix_seed(trial_seed,
                                       kJudgeSalt + static_cast<std::uint64_t>(rounds));
          SyntheticJudge judge(std::move(judge_config));

          const Schedule schedule = build_schedule(ids, pairing);
          const std::vector<EloState> states = elo_ratings_for_schedule(
              schedule, text_by_id, judge, EloConfig{}, pairing.seed);

          std::vector<ScoredItem> elo_ranking;
          elo_ranking.reserve(states.size());
          for (const EloState& state : states) {
            elo_ranking.push_back({state.item_id, state.rating});
          }
          rho[ri][trial] = spearman_rho(elo_ranking, latent_ranking);
          tau[ri][trial] = kendall_tau(elo_ranking, latent_ranking);
        }
      });

  SimResult result;
  result.per_round.reserve(round_counts.size());
  for (std::size_t ri = 0; ri < round_counts.size(); ++ri) {
    SimRoundResult round_result;
    round_result.rounds = round_counts[ri];
    round_result.trials = config.trials;
    double rho_sum = 0.0, tau_sum = 0.0;
    for (int t = 0; t < config.trials; ++t) {
      rho_sum += rho[ri][static_cast<std::size_t>(t)];
      tau_sum += tau[ri][static_cast<std::size_t>(t)];
    }
    round_result.mean_rho = rho_sum / config.trials;
    round_result.mean_tau = tau_sum / config.trials;
    round_result.sd_rho = sample_sd(rho[ri], round_result.mean_rho);
    round_result.sd_tau = sample_sd(tau[ri], round_result.mean_tau);
    result.per_round.push_back(round_result);
  }
  return result;
}

void write_sim_result(const SimResult& result,
                      const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(result.per_round.size());
  for (const SimRoundResult& r : result.per_round) {
    rows.push_back({std::to_string(r.rounds), std::to_string(r.trials),
                    format_score(r.mean_rho), format_score(r.sd_rho),
                    format_score(r.mean_tau), format_score(r.sd_tau)});
  }
  write_csv(path,
            {"rounds", "trials", "mean_rho", "sd_rho", "mean_tau", "sd_tau"},
            rows);
}

}  // namespace biasrank
