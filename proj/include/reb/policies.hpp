#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "reb/environments.hpp"
#include "reb/estimators.hpp"
#include "reb/random.hpp"

namespace reb {

enum class PolicyKind {
    reucb,       // all of mu0, sigma0^2, sigma^2 estimated
    reucb_star,  // mu0 estimated, variances known
    reucb_inf,   // w = 1: sample mean + sqrt(sigma^2 log t / n)
    ucb1,
    gaussian_ts,
    bernoulli_ts,
    bayes_ucb,
    kl_ucb,
};

[[nodiscard]] std::string_view to_string(PolicyKind kind) noexcept;
/// Parses the snake_case policy name; throws std::invalid_argument on unknown names.
[[nodiscard]] PolicyKind parse_policy_kind(std::string_view name);
[[nodiscard]] std::span<const PolicyKind> all_policy_kinds() noexcept;

using PosteriorPrior = std::variant<GaussianPrior, BetaPrior>;

struct PolicyConfig {
    PolicyKind kind = PolicyKind::reucb;
    std::string label;
    /// a in the ReUCB bonus sqrt(a tau^2 log t).
    double bonus_multiplier = 1.0;
    /// Known variances (ReUCB*), or the noise variance used by UCB1, ReUCB-inf,
    /// Gaussian TS and Gaussian Bayes-UCB.
    VarianceParams variance_params{};
    /// Required by the Thompson-sampling kinds and Bayes-UCB.
    std::optional<PosteriorPrior> prior;
    /// Switches the ReUCB kinds to the known-common-mean BLUP.
    std::optional<double> known_mu0;
    EstimationSettings estimation{};
    /// Gaussian TS: replace the prior each run with the empirical mean and
    /// variance of the instance's arm means.
    bool prior_from_instance = false;
    /// Bernoulli TS: turn a reward r in [0, 1] into a Bernoulli(r) draw.
    bool binarize_rewards = false;
    /// Bayes-UCB quantile schedule exponent.
    double bayes_ucb_c = 5.0;

    [[nodiscard]] std::string display_name() const { return label.empty() ? std::string(to_string(kind)) : label; }
};

/// Throws std::invalid_argument naming the violated requirement.
void validate(const PolicyConfig& config);

/// Sequential-decision state: per-arm statistics and the 1-based round index.
struct PolicyState {
    std::vector<ArmStats> arm_stats;
    std::int64_t round = 1;
};

// Index functions. All take the round t (1-based, global) and require every arm
// to have been pulled at least once unless noted.

[[nodiscard]] std::vector<double> reucb_index(std::span<const ArmStats> stats, std::int64_t t,
                                              const VarianceParams& params, double a,
                                              std::optional<double> known_mu0 = std::nullopt);

[[nodiscard]] std::vector<double> ucb1_index(std::span<const ArmStats> stats, std::int64_t t, double sigma_sq);

[[nodiscard]] std::vector<double> reucb_inf_index(std::span<const ArmStats> stats, std::int64_t t, double sigma_sq);

/// Conjugate Gaussian posterior of one arm; the prior itself when unpulled.
[[nodiscard]] PointEstimate gaussian_posterior(const ArmStats& stats, const GaussianPrior& prior, double sigma_sq);

/// Beta posterior of one arm; throws std::domain_error if the statistics
/// cannot come from {0,1} rewards.
[[nodiscard]] BetaPrior beta_posterior(const ArmStats& stats, const BetaPrior& prior);

[[nodiscard]] std::vector<double> gaussian_ts_sample(std::span<const ArmStats> stats, const GaussianPrior& prior,
                                                     double sigma_sq, Rng& rng);

[[nodiscard]] std::vector<double> bernoulli_ts_sample(std::span<const ArmStats> stats, const BetaPrior& prior,
                                                      Rng& rng);

[[nodiscard]] double gaussian_quantile(const PointEstimate& posterior, double level);
[[nodiscard]] double beta_quantile(const BetaPrior& posterior, double level);

/// 1 - 1 / (t (log horizon)^c), clamped to 1 - 1e-12 when outside (0, 1).
[[nodiscard]] double bayes_ucb_level(std::int64_t t, std::int64_t horizon, double c);

[[nodiscard]] std::vector<double> bayes_ucb_index(std::span<const ArmStats> stats, const PosteriorPrior& prior,
                                                  double sigma_sq, std::int64_t t, std::int64_t horizon,
                                                  double c = 5.0);

/// Bernoulli KL divergence with the 0 log 0 = 0 convention.
[[nodiscard]] double bernoulli_kl(double p, double q) noexcept;

/// Largest q in [p, 1] with n KL(p || q) <= budget, by bisection.
[[nodiscard]] double kl_ucb_bound(double p, std::int64_t pulls, double budget);

[[nodiscard]] std::vector<double> kl_ucb_index(std::span<const ArmStats> stats, std::int64_t t);

/// Index of the largest value; ties go to the lowest index.
[[nodiscard]] std::size_t argmax_lowest(std::span<const double> values);

/// Index or posterior-sample vector of the configured policy for the state's round.
[[nodiscard]] std::vector<double> policy_indices(const PolicyConfig& config, const PolicyState& state,
                                                 std::int64_t horizon, Rng& rng);

/// Forced initialisation for t <= K (returns arm t - 1), argmax of the
/// policy's indices afterwards.
[[nodiscard]] std::size_t select_arm(const PolicyConfig& config, const PolicyState& state, std::int64_t horizon,
                                     Rng& rng);

/// A policy bound to one episode: owns its state and random stream.
class Policy {
public:
    Policy(PolicyConfig config, std::size_t arms, std::int64_t horizon, std::uint64_t seed);

    /// Arm t (0-based t - 1) during the first K rounds, argmax of the index afterwards.
    [[nodiscard]] std::size_t select_arm();
    void observe(std::size_t arm, double reward);

    /// Index (or posterior sample) vector for the current round.
    [[nodiscard]] std::vector<double> indices();

    [[nodiscard]] const PolicyState& state() const noexcept { return state_; }
    [[nodiscard]] const PolicyConfig& config() const noexcept { return config_; }

private:
    PolicyConfig config_;
    PolicyState state_;
    std::int64_t horizon_;
    Rng rng_;
};

/// Applies per-instance adaptations (currently `prior_from_instance`).
[[nodiscard]] PolicyConfig adapt_to_instance(const PolicyConfig& config, const BanditInstance& instance);

}  // namespace reb
