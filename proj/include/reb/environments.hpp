#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "reb/random.hpp"

namespace reb {

// Distributions the arm means are drawn from.
struct GaussianPrior {
    double mu0 = 0.0;
    double sigma0_sq = 1.0;
};
struct UniformPrior {
    double lo = 0.0;
    double hi = 1.0;
};
struct BetaPrior {
    double alpha = 1.0;
    double beta = 1.0;
};
struct ExplicitPrior {
    std::vector<double> means;
};
using PriorSpec = std::variant<GaussianPrior, UniformPrior, BetaPrior, ExplicitPrior>;

// Reward distributions given an arm mean.
struct GaussianReward {
    double sigma_sq = 1.0;
};
struct BernoulliReward {};
/// N(mu, sigma^2) clipped into [lo, hi].
struct TruncatedGaussianReward {
    double sigma_sq = 1.0;
    double lo = 0.0;
    double hi = 1.0;
};
/// Arm-dependent noise variances, one per arm.
struct HeteroGaussianReward {
    std::vector<double> sigma_sq;
};
using RewardSpec = std::variant<GaussianReward, BernoulliReward, TruncatedGaussianReward, HeteroGaussianReward>;

void validate(const PriorSpec& prior);
void validate(const RewardSpec& reward);

struct BanditInstance {
    std::vector<double> means;
    RewardSpec reward;
    std::size_t best_arm = 0;
    double best_mean = 0.0;

    [[nodiscard]] std::size_t arms() const noexcept { return means.size(); }
};

/// Builds an instance from fixed means; rejects means the reward model cannot produce.
[[nodiscard]] BanditInstance make_instance(std::vector<double> means, RewardSpec reward);

/// Draws K arm means i.i.d. from the prior (explicit priors are copied).
[[nodiscard]] BanditInstance sample_instance(const PriorSpec& prior, std::size_t arms, const RewardSpec& reward,
                                             Rng& rng);

[[nodiscard]] double sample_reward(const BanditInstance& instance, std::size_t arm, Rng& rng);

}  // namespace reb
