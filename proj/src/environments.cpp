#include "reb/environments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace reb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void validate(const PriorSpec& prior) {
    std::visit(overloaded{
                   [](const GaussianPrior& p) {
                       if (!std::isfinite(p.mu0) || !(p.sigma0_sq > 0.0) || !std::isfinite(p.sigma0_sq))
                           throw std::invalid_argument("gaussian prior needs finite mu0 and sigma0_sq > 0");
                   },
                   [](const UniformPrior& p) {
                       if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !(p.lo < p.hi))
                           throw std::invalid_argument("uniform prior needs lo < hi");
                   },
                   [](const BetaPrior& p) {
                       if (!(p.alpha > 0.0) || !(p.beta > 0.0))
                           throw std::invalid_argument("beta prior needs alpha, beta > 0");
                   },
                   [](const ExplicitPrior& p) {
                       if (p.means.empty()) throw std::invalid_argument("explicit prior has no means");
                       for (double m : p.means)
                           if (!std::isfinite(m)) throw std::invalid_argument("explicit prior mean is not finite");
                   },
               },
               prior);
}

void validate(const RewardSpec& reward) {
    std::visit(overloaded{
                   [](const GaussianReward& r) {
                       if (!finite_nonneg(r.sigma_sq)) throw std::invalid_argument("reward sigma_sq must be >= 0");
                   },
                   [](const BernoulliReward&) {},
                   [](const TruncatedGaussianReward& r) {
                       if (!finite_nonneg(r.sigma_sq)) throw std::invalid_argument("reward sigma_sq must be >= 0");
                       if (!(r.lo < r.hi)) throw std::invalid_argument("truncation bounds need lo < hi");
                   },
                   [](const HeteroGaussianReward& r) {
                       if (r.sigma_sq.empty()) throw std::invalid_argument("hetero reward has no variances");
                       for (double v : r.sigma_sq)
                           if (!finite_nonneg(v)) throw std::invalid_argument("reward sigma_sq must be >= 0");
                   },
               },
               reward);
}

BanditInstance make_instance(std::vector<double> means, RewardSpec reward) {
    validate(reward);
    if (means.empty()) throw std::invalid_argument("instance has no arms");
    for (double m : means)
        if (!std::isfinite(m)) throw std::invalid_argument("arm mean is not finite");
    if (std::holds_alternative<BernoulliReward>(reward)) {
        for (double m : means)
            if (m < 0.0 || m > 1.0)
                throw std::invalid_argument("bernoulli arm mean " + std::to_string(m) + " outside [0, 1]");
    }
    if (const auto* h = std::get_if<HeteroGaussianReward>(&reward); h && h->sigma_sq.size() != means.size())
        throw std::invalid_argument("hetero reward needs one variance per arm");

    BanditInstance out;
    const auto best = std::max_element(means.begin(), means.end());  // first maximum
    out.best_arm = static_cast<std::size_t>(best - means.begin());
    out.best_mean = *best;
    out.means = std::move(means);
    out.reward = std::move(reward);
    return out;
}

BanditInstance sample_instance(const PriorSpec& prior, std::size_t arms, const RewardSpec& reward, Rng& rng) {
    validate(prior);
    if (arms < 2) throw std::invalid_argument("an instance needs at least two arms");

    std::vector<double> means(arms);
    std::visit(overloaded{
                   [&](const GaussianPrior& p) {
                       const double sd = std::sqrt(p.sigma0_sq);
                       for (auto& m : means) m = p.mu0 + sd * standard_normal(rng);
                   },
                   [&](const UniformPrior& p) {
                       for (auto& m : means) m = p.lo + (p.hi - p.lo) * uniform01(rng);
                   },
                   [&](const BetaPrior& p) {
                       for (auto& m : means) m = sample_beta(p.alpha, p.beta, rng);
                   },
                   [&](const ExplicitPrior& p) {
                       if (p.means.size() != arms)
                           throw std::invalid_argument("explicit prior length does not match the arm count");
                       means = p.means;
                   },
               },
               prior);
    return make_instance(std::move(means), reward);
}

double sample_reward(const BanditInstance& instance, std::size_t arm, Rng& rng) {
    const double mu = instance.means.at(arm);
    auto gaussian = [&](double sigma_sq) {
        if (sigma_sq == 0.0) return mu;
        return mu + std::sqrt(sigma_sq) * standard_normal(rng);
    };
    return std::visit(overloaded{
                          [&](const GaussianReward& r) { return gaussian(r.sigma_sq); },
                          [&](const BernoulliReward&) { return uniform01(rng) < mu ? 1.0 : 0.0; },
                          [&](const TruncatedGaussianReward& r) {
                              return std::min(std::max(gaussian(r.sigma_sq), r.lo), r.hi);
                          },
                          [&](const HeteroGaussianReward& r) { return gaussian(r.sigma_sq[arm]); },
                      },
                      instance.reward);
}

}  // namespace reb
