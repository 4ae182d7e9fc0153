#include "reb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include <omp.h>

namespace reb {

namespace {

// Runs per parallel task. Fixed so the reduction tree is independent of threads.
constexpr std::int64_t kBlockRuns = 8;

// Per-round running mean and sum of squared deviations.
struct CurveMoments {
    std::int64_t count = 0;
    std::vector<double> mean;
    std::vector<double> m2;

    explicit CurveMoments(std::size_t rounds) : mean(rounds, 0.0), m2(rounds, 0.0) {}

    void push(std::span<const double> curve) {
        ++count;
        const double c = static_cast<double>(count);
        for (std::size_t t = 0; t < curve.size(); ++t) {
            const double delta = curve[t] - mean[t];
            mean[t] += delta / c;
            m2[t] += delta * (curve[t] - mean[t]);
        }
    }

    void merge(const CurveMoments& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(other.count);
        const double n = na + nb;
        for (std::size_t t = 0; t < mean.size(); ++t) {
            const double delta = other.mean[t] - mean[t];
            mean[t] += delta * nb / n;
            m2[t] += other.m2[t] + delta * delta * na * nb / n;
        }
        count += other.count;
    }
};

AggregateResult finish(std::string label, const CurveMoments& moments, std::vector<double> finals) {
    AggregateResult out;
    out.label = std::move(label);
    out.n_runs = moments.count;
    out.mean_cum_regret = moments.mean;
    out.stderr_cum_regret.resize(moments.mean.size(), 0.0);
    if (moments.count > 1) {
        const double n = static_cast<double>(moments.count);
        for (std::size_t t = 0; t < moments.m2.size(); ++t)
            out.stderr_cum_regret[t] = std::sqrt(std::max(0.0, moments.m2[t] / (n - 1.0)) / n);
    }
    out.final_regret_samples = std::move(finals);
    return out;
}

void check_experiment(std::span<const PolicyConfig> policies, std::int64_t horizon, std::int64_t n_runs) {
    if (policies.empty()) throw std::invalid_argument("experiment needs at least one policy");
    if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    for (std::size_t i = 0; i < policies.size(); ++i) {
        validate(policies[i]);
        for (std::size_t j = 0; j < i; ++j)
            if (policies[i].display_name() == policies[j].display_name())
                throw std::invalid_argument("duplicate policy label '" + policies[i].display_name() + "'");
    }
}

BanditInstance instance_for_run(const InstanceSampler& sampler, std::uint64_t base_seed, std::int64_t run,
                                bool fixed_instance) {
    Rng rng(instance_seed(base_seed, fixed_instance ? 0 : run));
    return sampler(rng);
}

}  // namespace

EpisodeResult run_episode(const PolicyConfig& policy, const BanditInstance& instance, std::int64_t horizon,
                          std::uint64_t seed) {
    const std::size_t arms = instance.arms();
    if (horizon < static_cast<std::int64_t>(arms))
        throw std::invalid_argument("horizon must be at least the number of arms");

    Policy agent(policy, arms, horizon, derive_seed(seed, 2));
    Rng reward_rng(derive_seed(seed, 1));

    EpisodeResult out;
    const auto n = static_cast<std::size_t>(horizon);
    out.pulled.resize(n);
    out.instant_regret.resize(n);
    out.cum_regret.resize(n);
    double total = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t arm = agent.select_arm();
        agent.observe(arm, sample_reward(instance, arm, reward_rng));
        const double regret = instance.best_mean - instance.means[arm];
        total += regret;
        out.pulled[t] = arm;
        out.instant_regret[t] = regret;
        out.cum_regret[t] = total;
    }
    out.final_regret = total;
    return out;
}

InstanceSampler prior_sampler(PriorSpec prior, RewardSpec reward, std::size_t arms) {
    validate(prior);
    validate(reward);
    return [prior = std::move(prior), reward = std::move(reward), arms](Rng& rng) {
        return sample_instance(prior, arms, reward, rng);
    };
}

std::uint64_t instance_seed(std::uint64_t base_seed, std::int64_t run) noexcept {
    return derive_seed(base_seed + static_cast<std::uint64_t>(run), 0);
}

std::uint64_t episode_seed(std::uint64_t base_seed, std::int64_t run, std::string_view label) noexcept {
    return derive_seed(base_seed + static_cast<std::uint64_t>(run), 1, stream_id(label));
}

std::vector<AggregateResult> run_experiment(std::span<const PolicyConfig> policies, const InstanceSampler& sampler,
                                            std::int64_t horizon, std::int64_t n_runs, std::uint64_t base_seed,
                                            const RunnerOptions& options) {
    check_experiment(policies, horizon, n_runs);
    const std::size_t n_policies = policies.size();
    const auto rounds = static_cast<std::size_t>(horizon);
    const std::int64_t n_blocks = (n_runs + kBlockRuns - 1) / kBlockRuns;

    std::vector<std::vector<CurveMoments>> blocks(static_cast<std::size_t>(n_blocks));
    std::vector<std::vector<double>> finals(n_policies, std::vector<double>(static_cast<std::size_t>(n_runs)));

    std::exception_ptr failure;
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        try {
            std::vector<CurveMoments> acc(n_policies, CurveMoments(rounds));
            const std::int64_t first = b * kBlockRuns;
            const std::int64_t last = std::min(n_runs, first + kBlockRuns);
            for (std::int64_t run = first; run < last; ++run) {
                const auto instance = instance_for_run(sampler, base_seed, run, options.fixed_instance);
                for (std::size_t p = 0; p < n_policies; ++p) {
                    const auto config = adapt_to_instance(policies[p], instance);
                    const auto ep = run_episode(config, instance, horizon,
                                                episode_seed(base_seed, run, policies[p].display_name()));
                    acc[p].push(ep.cum_regret);
                    finals[p][static_cast<std::size_t>(run)] = ep.final_regret;
                }
            }
            blocks[static_cast<std::size_t>(b)] = std::move(acc);
        } catch (...) {
#pragma omp critical(reb_experiment_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<AggregateResult> out;
    out.reserve(n_policies);
    for (std::size_t p = 0; p < n_policies; ++p) {
        CurveMoments total(rounds);
        for (const auto& block : blocks) total.merge(block[p]);
        out.push_back(finish(policies[p].display_name(), total, std::move(finals[p])));
    }
    return out;
}

std::vector<AggregateResult> run_experiment(std::span<const PolicyConfig> policies, const PriorSpec& prior,
                                            const RewardSpec& reward, std::size_t arms, std::int64_t horizon,
                                            std::int64_t n_runs, std::uint64_t base_seed,
                                            const RunnerOptions& options) {
    return run_experiment(policies, prior_sampler(prior, reward, arms), horizon, n_runs, base_seed, options);
}

std::vector<AggregateResult> run_experiment_serial(std::span<const PolicyConfig> policies,
                                                   const InstanceSampler& sampler, std::int64_t horizon,
                                                   std::int64_t n_runs, std::uint64_t base_seed,
                                                   bool fixed_instance) {
    check_experiment(policies, horizon, n_runs);
    const std::size_t n_policies = policies.size();
    std::vector<CurveMoments> acc(n_policies, CurveMoments(static_cast<std::size_t>(horizon)));
    std::vector<std::vector<double>> finals(n_policies);
    for (std::int64_t run = 0; run < n_runs; ++run) {
        const auto instance = instance_for_run(sampler, base_seed, run, fixed_instance);
        for (std::size_t p = 0; p < n_policies; ++p) {
            const auto ep = run_episode(adapt_to_instance(policies[p], instance), instance, horizon,
                                        episode_seed(base_seed, run, policies[p].display_name()));
            acc[p].push(ep.cum_regret);
            finals[p].push_back(ep.final_regret);
        }
    }
    std::vector<AggregateResult> out;
    for (std::size_t p = 0; p < n_policies; ++p)
        out.push_back(finish(policies[p].display_name(), acc[p], std::move(finals[p])));
    return out;
}

double posterior_coverage_check(std::span<const std::int64_t> allocation, const VarianceParams& params,
                                std::int64_t n_reps, Rng& rng, double mu0, double z) {
    validate(params);
    if (allocation.size() < 2) throw std::invalid_argument("coverage check needs at least two arms");
    if (n_reps < 1) throw std::invalid_argument("n_reps must be >= 1");
    for (auto n : allocation)
        if (n < 1) throw std::invalid_argument("every arm needs at least one pull");

    const double prior_sd = std::sqrt(params.sigma0_sq);
    const double noise_sd = std::sqrt(params.sigma_sq);
    const std::size_t k = allocation.size();
    std::vector<double> mu(k);
    std::vector<ArmStats> stats(k);
    std::int64_t covered = 0;
    for (std::int64_t rep = 0; rep < n_reps; ++rep) {
        for (std::size_t i = 0; i < k; ++i) {
            mu[i] = mu0 + prior_sd * standard_normal(rng);
            stats[i] = ArmStats{};
            for (std::int64_t j = 0; j < allocation[i]; ++j) {
                const double r = noise_sd == 0.0 ? mu[i] : mu[i] + noise_sd * standard_normal(rng);
                stats[i] = update_stats(stats[i], r);
            }
        }
        const auto est = synthetic_estimate(stats, params);
        for (std::size_t i = 0; i < k; ++i) {
            // Slack absorbs the rounding of sum / n when the interval has zero width.
            const double slack = 1e-12 * (1.0 + std::abs(mu[i]));
            if (std::abs(mu[i] - est.synthetic_means[i]) <= z * std::sqrt(est.synthetic_vars[i]) + slack) ++covered;
        }
    }
    return static_cast<double>(covered) / static_cast<double>(n_reps * static_cast<std::int64_t>(k));
}

}  // namespace reb
