#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace reb {

/// Raised when a method-of-moments estimate has too few observations.
class insufficient_data : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Per-arm sufficient statistics: pull count, sum and sum of squares of rewards.
struct ArmStats {
    std::int64_t pulls = 0;
    double reward_sum = 0.0;
    double reward_sumsq = 0.0;

    bool operator==(const ArmStats&) const = default;
};

enum class VarianceSource { known, estimated };

/// Prior variance of the arm means and reward-noise variance.
struct VarianceParams {
    double sigma0_sq = 1.0;
    double sigma_sq = 1.0;
    VarianceSource source = VarianceSource::known;
};

/// Throws std::invalid_argument unless sigma0_sq > 0 and sigma_sq >= 0.
void validate(const VarianceParams& params);

struct PointEstimate {
    double mean = 0.0;
    double var = 0.0;
};

/// Output of the estimator stack for one round.
struct ShrinkageEstimate {
    std::vector<double> weights;
    double common_mean = 0.0;
    std::vector<double> synthetic_means;
    std::vector<double> synthetic_vars;
    // Populated only when the common mean is supplied by the caller.
    std::optional<std::vector<double>> known_mean_means;
    std::optional<std::vector<double>> known_mean_vars;
    std::optional<double> mu0_known;
};

[[nodiscard]] ArmStats update_stats(ArmStats stats, double reward) noexcept;

[[nodiscard]] double sample_mean(const ArmStats& stats);

/// w = sigma0^2 / (sigma0^2 + sigma^2 / n).
[[nodiscard]] double shrinkage_weight(std::int64_t pulls, const VarianceParams& params);

/// BLUP of an arm mean toward a known common mean, and its MSE w * sigma^2 / n.
[[nodiscard]] PointEstimate blup_known_mean(double mu0, const ArmStats& stats, const VarianceParams& params);

/// GLS estimate of the common mean. Falls back to the unweighted mean of the
/// sample means when sigma^2 = 0.
[[nodiscard]] double gls_common_mean(std::span<const ArmStats> all_stats, const VarianceParams& params);

/// Synthetic (shrinkage) estimator for every arm plus its MSE. When `mu0` is
/// given the known-mean BLUP and its variance are filled in as well.
[[nodiscard]] ShrinkageEstimate synthetic_estimate(std::span<const ArmStats> all_stats,
                                                   const VarianceParams& params,
                                                   std::optional<double> mu0 = std::nullopt);

/// Pooled within-arm variance; throws insufficient_data when sum(n_k - 1) = 0.
[[nodiscard]] double estimate_reward_variance(std::span<const ArmStats> all_stats);

/// Between-arm variance around the pooled grand mean, normalised by
/// n* = N - sum(n_k^2) / N. Throws insufficient_data when K < 2 or n* <= 0.
[[nodiscard]] double estimate_prior_variance(std::span<const ArmStats> all_stats);

/// Fallbacks and floors used when variances are estimated online.
struct EstimationSettings {
    double default_sigma_sq = 1.0;
    double default_sigma0_sq = 1.0;
    double sigma0_sq_floor = 1e-8;
    double sigma_sq_floor = 1e-12;
};

/// Method-of-moments variance parameters over the arms pulled so far, with
/// the configured fallbacks before enough data exists and floors afterwards.
[[nodiscard]] VarianceParams estimate_variance_params(std::span<const ArmStats> all_stats,
                                                      const EstimationSettings& settings = {});

}  // namespace reb
