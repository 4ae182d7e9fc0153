#pragma once

#include <cstdint>

namespace reb {

struct BoundInputs {
    std::int64_t arms = 1;   // K
    std::int64_t horizon = 1;  // n
    double sigma0_sq = 1.0;
    double sigma_sq = 1.0;
    double a = 1.0;
};

/// AtLeast1 holds for a >= 1 (or a >= m for the bounded-support bound),
/// AtLeast2 for a >= 2 (a >= 2m).
enum class BoundVariant { at_least_1, at_least_2 };

/// Price for estimating the common mean: 1 + sigma^2 / (K sigma0^2).
[[nodiscard]] double mean_estimation_factor(const BoundInputs& in);

/// sigma0^2 / log(1 + sigma0^2 / sigma^2).
[[nodiscard]] double log_ratio_constant(const BoundInputs& in);

/// Bayes regret bound for Gaussian arms and rewards with known variances.
/// Throws std::domain_error when a is below the variant's threshold.
[[nodiscard]] double gaussian_regret_bound(const BoundInputs& in, BoundVariant variant);

/// Leading term of the bound for an agent that ignores the shared common mean
/// and instead treats mu0 ~ N(0, sigma_q^2) independently per arm.
[[nodiscard]] double unshared_mean_leading_term(const BoundInputs& in, double sigma_q_sq);

struct BoundedSupportBound {
    double bound = 0.0;
    double m = 0.0;
};

/// m = [1 + sigma0^2 / (K (sigma0^2 + sigma^2))]^-1 [1 + sigma / (sqrt(K) sigma0)]^2.
[[nodiscard]] double sub_gaussian_threshold(const BoundInputs& in);

/// Bayes regret bound for sub-Gaussian rewards with support in [0, 1].
/// Throws std::domain_error reporting m when a < m (a < 2m for AtLeast2).
[[nodiscard]] BoundedSupportBound bounded_regret_bound(const BoundInputs& in, BoundVariant variant);

}  // namespace reb
