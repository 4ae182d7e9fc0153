#include "reb/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace reb {

namespace {

void require_pulled(const ArmStats& stats) {
    if (stats.pulls < 1) throw std::domain_error("arm never pulled");
}

void require_all_pulled(std::span<const ArmStats> all_stats) {
    if (all_stats.empty()) throw std::domain_error("no arms");
    for (const auto& s : all_stats) require_pulled(s);
}

// (1 - w_k) n_k written as sigma^2 / (sigma0^2 + sigma^2 / n_k).
double gls_weight(std::int64_t pulls, const VarianceParams& params) {
    const double n = static_cast<double>(pulls);
    return params.sigma_sq / (params.sigma0_sq + params.sigma_sq / n);
}

// 1 - w_k without the cancellation of subtracting w_k from one.
double complement_weight(std::int64_t pulls, const VarianceParams& params) {
    const double noise = params.sigma_sq / static_cast<double>(pulls);
    return noise / (params.sigma0_sq + noise);
}

}  // namespace

void validate(const VarianceParams& params) {
    if (!(params.sigma0_sq > 0.0) || !std::isfinite(params.sigma0_sq))
        throw std::invalid_argument("sigma0_sq must be positive and finite");
    if (!(params.sigma_sq >= 0.0) || !std::isfinite(params.sigma_sq))
        throw std::invalid_argument("sigma_sq must be non-negative and finite");
}

ArmStats update_stats(ArmStats stats, double reward) noexcept {
    ++stats.pulls;
    stats.reward_sum += reward;
    stats.reward_sumsq += reward * reward;
    return stats;
}

double sample_mean(const ArmStats& stats) {
    require_pulled(stats);
    return stats.reward_sum / static_cast<double>(stats.pulls);
}

double shrinkage_weight(std::int64_t pulls, const VarianceParams& params) {
    if (pulls < 1) throw std::domain_error("arm never pulled");
    validate(params);
    return params.sigma0_sq / (params.sigma0_sq + params.sigma_sq / static_cast<double>(pulls));
}

PointEstimate blup_known_mean(double mu0, const ArmStats& stats, const VarianceParams& params) {
    const double w = shrinkage_weight(stats.pulls, params);
    const double rbar = sample_mean(stats);
    const double one_minus_w = complement_weight(stats.pulls, params);
    return {one_minus_w * mu0 + w * rbar, w * params.sigma_sq / static_cast<double>(stats.pulls)};
}

double gls_common_mean(std::span<const ArmStats> all_stats, const VarianceParams& params) {
    require_all_pulled(all_stats);
    validate(params);
    if (params.sigma_sq == 0.0) {
        double total = 0.0;
        for (const auto& s : all_stats) total += sample_mean(s);
        return total / static_cast<double>(all_stats.size());
    }
    double num = 0.0;
    double den = 0.0;
    for (const auto& s : all_stats) {
        const double g = gls_weight(s.pulls, params);
        num += g * sample_mean(s);
        den += g;
    }
    return num / den;
}

ShrinkageEstimate synthetic_estimate(std::span<const ArmStats> all_stats, const VarianceParams& params,
                                     std::optional<double> mu0) {
    const double r0 = gls_common_mean(all_stats, params);
    const std::size_t k = all_stats.size();

    double gls_total = 0.0;
    for (const auto& s : all_stats) gls_total += gls_weight(s.pulls, params);

    ShrinkageEstimate out;
    out.common_mean = r0;
    out.weights.resize(k);
    out.synthetic_means.resize(k);
    out.synthetic_vars.resize(k);
    if (mu0) {
        out.mu0_known = *mu0;
        out.known_mean_means.emplace(k);
        out.known_mean_vars.emplace(k);
    }

    for (std::size_t i = 0; i < k; ++i) {
        const auto& s = all_stats[i];
        const double n = static_cast<double>(s.pulls);
        const double w = params.sigma0_sq / (params.sigma0_sq + params.sigma_sq / n);
        const double one_minus_w = complement_weight(s.pulls, params);
        const double rbar = s.reward_sum / n;
        const double known_var = w * params.sigma_sq / n;
        // sigma^2 = 0 makes both the numerator and gls_total vanish.
        const double mean_term = gls_total > 0.0 ? one_minus_w * one_minus_w * params.sigma_sq / gls_total : 0.0;

        out.weights[i] = w;
        out.synthetic_means[i] = one_minus_w * r0 + w * rbar;
        out.synthetic_vars[i] = known_var + mean_term;
        if (mu0) {
            (*out.known_mean_means)[i] = one_minus_w * *mu0 + w * rbar;
            (*out.known_mean_vars)[i] = known_var;
        }
    }
    return out;
}

double estimate_reward_variance(std::span<const ArmStats> all_stats) {
    double ss = 0.0;
    std::int64_t dof = 0;
    for (const auto& s : all_stats) {
        if (s.pulls < 1) continue;
        ss += s.reward_sumsq - s.reward_sum * s.reward_sum / static_cast<double>(s.pulls);
        dof += s.pulls - 1;
    }
    if (dof < 1) throw insufficient_data("insufficient data: no arm pulled twice");
    return std::max(0.0, ss / static_cast<double>(dof));
}

double estimate_prior_variance(std::span<const ArmStats> all_stats) {
    if (all_stats.size() < 2) throw insufficient_data("insufficient data: fewer than two arms");
    double total_pulls = 0.0;
    double total_sum = 0.0;
    double sum_sq_pulls = 0.0;
    for (const auto& s : all_stats) {
        if (s.pulls < 1) throw insufficient_data("insufficient data: arm never pulled");
        const double n = static_cast<double>(s.pulls);
        total_pulls += n;
        total_sum += s.reward_sum;
        sum_sq_pulls += n * n;
    }
    const double n_star = total_pulls - sum_sq_pulls / total_pulls;
    if (!(n_star > 0.0)) throw insufficient_data("insufficient data: n* <= 0");

    const double grand_mean = total_sum / total_pulls;
    double between = 0.0;
    for (const auto& s : all_stats) {
        const double u = s.reward_sum / static_cast<double>(s.pulls) - grand_mean;
        between += static_cast<double>(s.pulls) * u * u;
    }
    return between / n_star;
}

VarianceParams estimate_variance_params(std::span<const ArmStats> all_stats, const EstimationSettings& settings) {
    VarianceParams out{settings.default_sigma0_sq, settings.default_sigma_sq, VarianceSource::estimated};

    try {
        out.sigma_sq = std::max(estimate_reward_variance(all_stats), settings.sigma_sq_floor);
    } catch (const insufficient_data&) {
    }

    std::vector<ArmStats> pulled;
    const bool all_pulled = std::all_of(all_stats.begin(), all_stats.end(), [](const ArmStats& s) { return s.pulls > 0; });
    if (!all_pulled) {
        for (const auto& s : all_stats)
            if (s.pulls > 0) pulled.push_back(s);
    }
    try {
        const auto view = all_pulled ? all_stats : std::span<const ArmStats>(pulled);
        out.sigma0_sq = std::max(estimate_prior_variance(view), settings.sigma0_sq_floor);
    } catch (const insufficient_data&) {
    }
    return out;
}

}  // namespace reb
