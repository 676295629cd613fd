#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace biasrank {

// Convergence experiment: how well does the rating-induced order recover a
// hidden ground-truth order as the comparison budget grows.
struct SimConfig {
  int n_items = 200;
  int max_rounds = 12;  // even; measured at 2, 4, ..., max_rounds
  int trials = 30;
  double temperature = 0.0;  // synthetic judge noise; 0 = deterministic
  enum class LatentDistribution { Uniform01 };
  LatentDistribution latent_distribution = LatentDistribution::Uniform01;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimRoundResult {
  int rounds = 0;
  int trials = 0;
  double mean_rho = 0.0;
  double sd_rho = 0.0;
  double mean_tau = 0.0;
  double sd_tau = 0.0;
};

struct SimResult {
  std::vector<SimRoundResult> per_round;  // ascending round count
};

// Per trial: sample latent scores, then for every even round count r build a
// fresh seeded schedule, judge it synthetically, run the rating walk in
// schedule order and correlate the induced ranking against the latent order.
// Trials may run in parallel; per-trial seeds make the result independent of
// execution order.
SimResult run_convergence(const SimConfig& config, int parallelism = 1);

// convergence.csv: rounds,trials,mean_rho,sd_rho,mean_tau,sd_tau
void write_sim_result(const SimResult& result,
                      const std::filesystem::path& path);

}  // namespace biasrank
