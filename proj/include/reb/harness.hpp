#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "reb/environments.hpp"
#include "reb/estimators.hpp"
#include "reb/policies.hpp"
#include "reb/random.hpp"

namespace reb {

struct EpisodeResult {
    std::vector<std::size_t> pulled;
    std::vector<double> instant_regret;
    std::vector<double> cum_regret;
    double final_regret = 0.0;
};

struct AggregateResult {
    std::string label;
    std::int64_t n_runs = 0;
    std::vector<double> mean_cum_regret;
    /// Standard error of the mean across runs (zero for a single run).
    std::vector<double> stderr_cum_regret;
    std::vector<double> final_regret_samples;
};

/// Plays `horizon` rounds of one policy on one instance. The seed drives both
/// the reward stream and the policy's own stream.
[[nodiscard]] EpisodeResult run_episode(const PolicyConfig& policy, const BanditInstance& instance,
                                        std::int64_t horizon, std::uint64_t seed);

/// Produces the instance for a run from that run's instance stream.
using InstanceSampler = std::function<BanditInstance(Rng&)>;

[[nodiscard]] InstanceSampler prior_sampler(PriorSpec prior, RewardSpec reward, std::size_t arms);

struct RunnerOptions {
    /// Worker cap; 0 uses the OpenMP default.
    int threads = 0;
    /// Debug mode: every run reuses run 0's instance.
    bool fixed_instance = false;
};

/// Seeds used by run `run` of an experiment.
[[nodiscard]] std::uint64_t instance_seed(std::uint64_t base_seed, std::int64_t run) noexcept;
[[nodiscard]] std::uint64_t episode_seed(std::uint64_t base_seed, std::int64_t run, std::string_view label) noexcept;

/// Runs every policy on `n_runs` freshly sampled instances (shared across
/// policies within a run). Runs execute in parallel in fixed-size blocks that
/// are reduced in run order, so the result does not depend on the thread count.
[[nodiscard]] std::vector<AggregateResult> run_experiment(std::span<const PolicyConfig> policies,
                                                          const InstanceSampler& sampler, std::int64_t horizon,
                                                          std::int64_t n_runs, std::uint64_t base_seed,
                                                          const RunnerOptions& options = {});

[[nodiscard]] std::vector<AggregateResult> run_experiment(std::span<const PolicyConfig> policies,
                                                          const PriorSpec& prior, const RewardSpec& reward,
                                                          std::size_t arms, std::int64_t horizon,
                                                          std::int64_t n_runs, std::uint64_t base_seed,
                                                          const RunnerOptions& options = {});

/// Single-threaded reference: one pass over runs in order with a running
/// mean/variance per round.
[[nodiscard]] std::vector<AggregateResult> run_experiment_serial(std::span<const PolicyConfig> policies,
                                                                 const InstanceSampler& sampler,
                                                                 std::int64_t horizon, std::int64_t n_runs,
                                                                 std::uint64_t base_seed,
                                                                 bool fixed_instance = false);

/// Fraction of (replicate, arm) pairs whose true mean lies within 1.96 tau_k of
/// the synthetic estimate, for Gaussian means N(mu0, sigma0^2) and Gaussian
/// rewards pulled according to `allocation`.
[[nodiscard]] double posterior_coverage_check(std::span<const std::int64_t> allocation,
                                              const VarianceParams& params, std::int64_t n_reps, Rng& rng,
                                              double mu0 = 0.0, double z = 1.96);

}  // namespace reb
