#include "reb/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace reb {

namespace {

void validate(const BoundInputs& in) {
    if (in.arms < 1) throw std::domain_error("bound needs K >= 1");
    if (in.horizon < 1) throw std::domain_error("bound needs n >= 1");
    if (!(in.sigma0_sq > 0.0) || !(in.sigma_sq > 0.0)) throw std::domain_error("bound needs positive variances");
    if (!(in.a > 0.0)) throw std::domain_error("bound needs a > 0");
}

// sqrt(a log(1 + n sigma0^2/sigma^2) / log(1 + sigma0^2/sigma^2) * sigma0^2 K n log n)
double confidence_sum(const BoundInputs& in) {
    const double k = static_cast<double>(in.arms);
    const double n = static_cast<double>(in.horizon);
    const double ratio = in.sigma0_sq / in.sigma_sq;
    return std::sqrt(in.a * std::log1p(ratio * n) / std::log1p(ratio) * in.sigma0_sq * k * n * std::log(n));
}

double tail_term_sqrt_n(const BoundInputs& in) {
    const double k = static_cast<double>(in.arms);
    const double n = static_cast<double>(in.horizon);
    const double s0 = in.sigma0_sq;
    const double s = in.sigma_sq;
    return (k * s0 + s) / s0 * std::sqrt(8.0 * n * s0 * s / (std::numbers::pi * (s0 + s)));
}

}  // namespace

double mean_estimation_factor(const BoundInputs& in) {
    validate(in);
    return 1.0 + in.sigma_sq / (static_cast<double>(in.arms) * in.sigma0_sq);
}

double log_ratio_constant(const BoundInputs& in) {
    validate(in);
    return in.sigma0_sq / std::log1p(in.sigma0_sq / in.sigma_sq);
}

double gaussian_regret_bound(const BoundInputs& in, BoundVariant variant) {
    validate(in);
    const double threshold = variant == BoundVariant::at_least_1 ? 1.0 : 2.0;
    if (in.a < threshold)
        throw std::domain_error("bound requires a >= " + std::to_string(threshold) + ", got " + std::to_string(in.a));

    const double lead = 2.0 * std::sqrt(mean_estimation_factor(in)) * confidence_sum(in);
    if (variant == BoundVariant::at_least_1) return lead + tail_term_sqrt_n(in);

    const double k = static_cast<double>(in.arms);
    const double n = static_cast<double>(in.horizon);
    const double s0 = in.sigma0_sq;
    const double s = in.sigma_sq;
    return lead + (1.0 + std::log(n)) * (k + s / s0) * std::sqrt(2.0 * s0 * s / (std::numbers::pi * (s + s0)));
}

double unshared_mean_leading_term(const BoundInputs& in, double sigma_q_sq) {
    validate(in);
    if (!(sigma_q_sq >= 0.0)) throw std::domain_error("sigma_q^2 must be >= 0");
    BoundInputs widened = in;
    widened.sigma0_sq = in.sigma0_sq + sigma_q_sq;
    return 2.0 * confidence_sum(widened);
}

double sub_gaussian_threshold(const BoundInputs& in) {
    validate(in);
    const double k = static_cast<double>(in.arms);
    const double s0 = in.sigma0_sq;
    const double s = in.sigma_sq;
    const double root = 1.0 + std::sqrt(s / s0) / std::sqrt(k);
    return root * root / (1.0 + s0 / (k * (s0 + s)));
}

BoundedSupportBound bounded_regret_bound(const BoundInputs& in, BoundVariant variant) {
    const double m = sub_gaussian_threshold(in);
    const double threshold = variant == BoundVariant::at_least_1 ? m : 2.0 * m;
    if (in.a < threshold)
        throw std::domain_error("bound requires a >= " + std::to_string(threshold) + " (m = " + std::to_string(m) +
                                "), got a = " + std::to_string(in.a));

    const double lead = 2.0 * mean_estimation_factor(in) * confidence_sum(in);
    const double tail = variant == BoundVariant::at_least_1
                            ? tail_term_sqrt_n(in)
                            : 2.0 * static_cast<double>(in.arms) * (1.0 + std::log(static_cast<double>(in.horizon)));
    return {lead + tail, m};
}

}  // namespace reb
