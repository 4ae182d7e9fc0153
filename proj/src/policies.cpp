#include "reb/policies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace reb {

namespace {

constexpr std::array kAllKinds{
    PolicyKind::reucb,       PolicyKind::reucb_star,   PolicyKind::reucb_inf, PolicyKind::ucb1,
    PolicyKind::gaussian_ts, PolicyKind::bernoulli_ts, PolicyKind::bayes_ucb, PolicyKind::kl_ucb,
};

double log_round(std::int64_t t) {
    if (t < 1) throw std::domain_error("round index must be >= 1");
    return std::log(static_cast<double>(t));
}

void require_all_pulled(std::span<const ArmStats> stats) {
    for (const auto& s : stats)
        if (s.pulls < 1) throw std::domain_error("arm never pulled");
}

bool is_binary(double r) { return r == 0.0 || r == 1.0; }

}  // namespace

std::string_view to_string(PolicyKind kind) noexcept {
    switch (kind) {
    case PolicyKind::reucb: return "reucb";
    case PolicyKind::reucb_star: return "reucb_star";
    case PolicyKind::reucb_inf: return "reucb_inf";
    case PolicyKind::ucb1: return "ucb1";
    case PolicyKind::gaussian_ts: return "gaussian_ts";
    case PolicyKind::bernoulli_ts: return "bernoulli_ts";
    case PolicyKind::bayes_ucb: return "bayes_ucb";
    case PolicyKind::kl_ucb: return "kl_ucb";
    }
    return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
    for (auto kind : kAllKinds)
        if (to_string(kind) == name) return kind;
    throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

std::span<const PolicyKind> all_policy_kinds() noexcept { return kAllKinds; }

void validate(const PolicyConfig& config) {
    const auto name = config.display_name();
    if (!(config.bonus_multiplier > 0.0)) throw std::invalid_argument(name + ": bonus multiplier a must be > 0");
    if (config.kind != PolicyKind::reucb) {
        try {
            validate(config.variance_params);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(name + ": " + e.what());
        }
    }
    const bool wants_prior = config.kind == PolicyKind::gaussian_ts || config.kind == PolicyKind::bernoulli_ts ||
                             config.kind == PolicyKind::bayes_ucb;
    if (wants_prior && !config.prior) throw std::invalid_argument(name + ": a prior is required");
    if (!wants_prior && config.prior) throw std::invalid_argument(name + ": this policy takes no prior");
    if (config.kind == PolicyKind::gaussian_ts && !std::holds_alternative<GaussianPrior>(*config.prior))
        throw std::invalid_argument(name + ": gaussian_ts needs a gaussian prior");
    if (config.kind == PolicyKind::bernoulli_ts && !std::holds_alternative<BetaPrior>(*config.prior))
        throw std::invalid_argument(name + ": bernoulli_ts needs a beta prior");
    if (config.prior) {
        if (const auto* g = std::get_if<GaussianPrior>(&*config.prior); g && !(g->sigma0_sq > 0.0))
            throw std::invalid_argument(name + ": prior sigma0_sq must be > 0");
        if (const auto* b = std::get_if<BetaPrior>(&*config.prior); b && !(b->alpha > 0.0 && b->beta > 0.0))
            throw std::invalid_argument(name + ": prior alpha and beta must be > 0");
    }
    if (config.known_mu0 && config.kind != PolicyKind::reucb && config.kind != PolicyKind::reucb_star)
        throw std::invalid_argument(name + ": known_mu0 applies only to the ReUCB kinds");
    if (config.prior_from_instance && config.kind != PolicyKind::gaussian_ts)
        throw std::invalid_argument(name + ": prior_from_instance applies only to gaussian_ts");
    if (config.binarize_rewards && config.kind != PolicyKind::bernoulli_ts)
        throw std::invalid_argument(name + ": binarize applies only to bernoulli_ts");
}

std::vector<double> reucb_index(std::span<const ArmStats> stats, std::int64_t t, const VarianceParams& params,
                                double a, std::optional<double> known_mu0) {
    const double log_t = log_round(t);
    const auto est = synthetic_estimate(stats, params, known_mu0);
    const auto& means = known_mu0 ? *est.known_mean_means : est.synthetic_means;
    const auto& vars = known_mu0 ? *est.known_mean_vars : est.synthetic_vars;
    std::vector<double> out(stats.size());
    for (std::size_t k = 0; k < stats.size(); ++k) out[k] = means[k] + std::sqrt(a * vars[k] * log_t);
    return out;
}

std::vector<double> ucb1_index(std::span<const ArmStats> stats, std::int64_t t, double sigma_sq) {
    require_all_pulled(stats);
    const double log_t = log_round(t);
    std::vector<double> out(stats.size());
    for (std::size_t k = 0; k < stats.size(); ++k) {
        const double n = static_cast<double>(stats[k].pulls);
        out[k] = stats[k].reward_sum / n + std::sqrt(8.0 * sigma_sq * log_t / n);
    }
    return out;
}

std::vector<double> reucb_inf_index(std::span<const ArmStats> stats, std::int64_t t, double sigma_sq) {
    require_all_pulled(stats);
    const double log_t = log_round(t);
    std::vector<double> out(stats.size());
    for (std::size_t k = 0; k < stats.size(); ++k) {
        const double n = static_cast<double>(stats[k].pulls);
        out[k] = stats[k].reward_sum / n + std::sqrt(sigma_sq * log_t / n);
    }
    return out;
}

PointEstimate gaussian_posterior(const ArmStats& stats, const GaussianPrior& prior, double sigma_sq) {
    if (stats.pulls == 0) return {prior.mu0, prior.sigma0_sq};
    if (sigma_sq == 0.0) return {stats.reward_sum / static_cast<double>(stats.pulls), 0.0};
    const double precision = 1.0 / prior.sigma0_sq + static_cast<double>(stats.pulls) / sigma_sq;
    return {(prior.mu0 / prior.sigma0_sq + stats.reward_sum / sigma_sq) / precision, 1.0 / precision};
}

BetaPrior beta_posterior(const ArmStats& stats, const BetaPrior& prior) {
    const double successes = stats.reward_sum;
    const double n = static_cast<double>(stats.pulls);
    // {0,1} rewards give an integral success count with sumsq == sum.
    const double tol = 1e-9 * std::max(1.0, n);
    if (successes < -tol || successes > n + tol || std::abs(successes - std::round(successes)) > tol ||
        std::abs(stats.reward_sumsq - successes) > tol)
        throw std::domain_error("non-binary reward recorded for a Bernoulli posterior");
    const double s = std::round(successes);
    return {prior.alpha + s, prior.beta + (n - s)};
}

std::vector<double> gaussian_ts_sample(std::span<const ArmStats> stats, const GaussianPrior& prior, double sigma_sq,
                                       Rng& rng) {
    std::vector<double> out(stats.size());
    for (std::size_t k = 0; k < stats.size(); ++k) {
        const auto post = gaussian_posterior(stats[k], prior, sigma_sq);
        out[k] = post.mean + std::sqrt(post.var) * standard_normal(rng);
    }
    return out;
}

std::vector<double> bernoulli_ts_sample(std::span<const ArmStats> stats, const BetaPrior& prior, Rng& rng) {
    std::vector<double> out(stats.size());
    for (std::size_t k = 0; k < stats.size(); ++k) {
        const auto post = beta_posterior(stats[k], prior);
        out[k] = sample_beta(post.alpha, post.beta, rng);
    }
    return out;
}

double gaussian_quantile(const PointEstimate& posterior, double level) {
    if (posterior.var == 0.0) return posterior.mean;
    const boost::math::normal_distribution<double> dist(posterior.mean, std::sqrt(posterior.var));
    return boost::math::quantile(dist, level);
}

double beta_quantile(const BetaPrior& posterior, double level) {
    return boost::math::ibeta_inv(posterior.alpha, posterior.beta, level);
}

double bayes_ucb_level(std::int64_t t, std::int64_t horizon, double c) {
    constexpr double kMaxLevel = 1.0 - 1e-12;
    const double scale = static_cast<double>(t) * std::pow(std::log(static_cast<double>(horizon)), c);
    const double level = 1.0 - 1.0 / scale;
    if (!(level > 0.0) || !(level < 1.0) || level > kMaxLevel) return kMaxLevel;
    return level;
}

std::vector<double> bayes_ucb_index(std::span<const ArmStats> stats, const PosteriorPrior& prior, double sigma_sq,
                                    std::int64_t t, std::int64_t horizon, double c) {
    const double level = bayes_ucb_level(t, horizon, c);
    std::vector<double> out(stats.size());
    for (std::size_t k = 0; k < stats.size(); ++k) {
        if (const auto* g = std::get_if<GaussianPrior>(&prior))
            out[k] = gaussian_quantile(gaussian_posterior(stats[k], *g, sigma_sq), level);
        else
            out[k] = beta_quantile(beta_posterior(stats[k], std::get<BetaPrior>(prior)), level);
    }
    return out;
}

double bernoulli_kl(double p, double q) noexcept {
    auto term = [](double x, double y) {
        if (x == 0.0) return 0.0;
        if (y == 0.0) return std::numeric_limits<double>::infinity();
        return x * std::log(x / y);
    };
    return term(p, q) + term(1.0 - p, 1.0 - q);
}

double kl_ucb_bound(double p, std::int64_t pulls, double budget) {
    if (pulls < 1) throw std::domain_error("arm never pulled");
    p = std::clamp(p, 0.0, 1.0);
    if (budget <= 0.0 || p >= 1.0) return p;
    const double n = static_cast<double>(pulls);
    double lo = p;
    double hi = 1.0;
    for (int iter = 0; iter < 64 && hi - lo > 1e-9; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (n * bernoulli_kl(p, mid) <= budget)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

std::vector<double> kl_ucb_index(std::span<const ArmStats> stats, std::int64_t t) {
    require_all_pulled(stats);
    const double budget = log_round(t);
    std::vector<double> out(stats.size());
    for (std::size_t k = 0; k < stats.size(); ++k)
        out[k] = kl_ucb_bound(stats[k].reward_sum / static_cast<double>(stats[k].pulls), stats[k].pulls, budget);
    return out;
}

std::size_t argmax_lowest(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("argmax of an empty index vector");
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k)
        if (values[k] > values[best]) best = k;
    return best;
}

std::vector<double> policy_indices(const PolicyConfig& config, const PolicyState& state, std::int64_t horizon,
                                   Rng& rng) {
    const auto& stats = state.arm_stats;
    const std::int64_t t = state.round;
    const auto& params = config.variance_params;
    switch (config.kind) {
    case PolicyKind::reucb:
        return reucb_index(stats, t, estimate_variance_params(stats, config.estimation), config.bonus_multiplier,
                           config.known_mu0);
    case PolicyKind::reucb_star:
        return reucb_index(stats, t, params, config.bonus_multiplier, config.known_mu0);
    case PolicyKind::reucb_inf:
        return reucb_inf_index(stats, t, params.sigma_sq);
    case PolicyKind::ucb1:
        return ucb1_index(stats, t, params.sigma_sq);
    case PolicyKind::gaussian_ts:
        return gaussian_ts_sample(stats, std::get<GaussianPrior>(*config.prior), params.sigma_sq, rng);
    case PolicyKind::bernoulli_ts:
        return bernoulli_ts_sample(stats, std::get<BetaPrior>(*config.prior), rng);
    case PolicyKind::bayes_ucb:
        return bayes_ucb_index(stats, *config.prior, params.sigma_sq, t, horizon, config.bayes_ucb_c);
    case PolicyKind::kl_ucb:
        return kl_ucb_index(stats, t);
    }
    throw std::logic_error("unhandled policy kind");
}

std::size_t select_arm(const PolicyConfig& config, const PolicyState& state, std::int64_t horizon, Rng& rng) {
    if (state.round < 1) throw std::domain_error("round index must be >= 1");
    const auto arms = static_cast<std::int64_t>(state.arm_stats.size());
    if (state.round <= arms) return static_cast<std::size_t>(state.round - 1);
    const auto idx = policy_indices(config, state, horizon, rng);
    return argmax_lowest(idx);
}

Policy::Policy(PolicyConfig config, std::size_t arms, std::int64_t horizon, std::uint64_t seed)
    : config_(std::move(config)), horizon_(horizon), rng_(seed) {
    validate(config_);
    if (arms < 1) throw std::invalid_argument("policy needs at least one arm");
    state_.arm_stats.assign(arms, ArmStats{});
}

std::size_t Policy::select_arm() { return reb::select_arm(config_, state_, horizon_, rng_); }

std::vector<double> Policy::indices() { return policy_indices(config_, state_, horizon_, rng_); }

void Policy::observe(std::size_t arm, double reward) {
    if (arm >= state_.arm_stats.size()) throw std::out_of_range("arm index out of range");
    if (config_.kind == PolicyKind::bernoulli_ts && !is_binary(reward)) {
        if (!config_.binarize_rewards)
            throw std::domain_error("bernoulli_ts received non-binary reward " + std::to_string(reward));
        if (reward < 0.0 || reward > 1.0)
            throw std::domain_error("binarized reward " + std::to_string(reward) + " outside [0, 1]");
        reward = uniform01(rng_) < reward ? 1.0 : 0.0;
    }
    state_.arm_stats[arm] = update_stats(state_.arm_stats[arm], reward);
    ++state_.round;
}

PolicyConfig adapt_to_instance(const PolicyConfig& config, const BanditInstance& instance) {
    if (!config.prior_from_instance) return config;
    PolicyConfig out = config;
    const auto& m = instance.means;
    const double n = static_cast<double>(m.size());
    const double mean = std::accumulate(m.begin(), m.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : m) ss += (x - mean) * (x - mean);
    // Population variance; a constant row still needs a positive prior variance.
    const double var = std::max(ss / n, 1e-12);
    out.prior = GaussianPrior{mean, var};
    return out;
}

}  // namespace reb
