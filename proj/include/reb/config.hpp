#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reb/environments.hpp"
#include "reb/policies.hpp"

namespace reb {

/// Parse or validation failure; `line` is 1-based, 0 when not line-specific.
class config_error : public std::runtime_error {
public:
    config_error(const std::string& origin, std::size_t line, const std::string& message);
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct ExperimentConfig {
    std::string name;
    PriorSpec prior;
    RewardSpec reward;
    std::size_t arms = 0;
    std::int64_t horizon = 0;
    std::int64_t n_runs = 0;
    std::uint64_t base_seed = 1;
    std::vector<PolicyConfig> policies;
    std::string out_dir;
    bool fixed_instance = false;
};

/// Parses the `key = value` experiment format:
///
///   name    = fig1a
///   prior   = gaussian 1 0.04        | uniform LO HI | beta A B | explicit M1 M2 ...
///   reward  = gaussian 0.25          | bernoulli | truncated_gaussian VAR LO HI | hetero_gaussian V1 V2 ...
///   arms    = 50                     (implied by an explicit prior)
///   horizon = 10000
///   runs    = 1000
///   seed    = 1
///   out     = results/fig1a
///   fixed_instance = false
///   policy  = KIND [label=L] [a=X] [sigma0_sq=X] [sigma_sq=X] [known_mu0=X]
///             [prior_mu0=X prior_sigma0_sq=X | prior_alpha=X prior_beta=X]
///             [c=X] [default_sigma_sq=X] [default_sigma0_sq=X]
///             [prior_from_instance=true] [binarize=true]
///
/// `policy` may repeat; `#` starts a comment. Unknown keys are errors.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text, const std::string& origin = "<config>");

[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws config_error naming the first violated precondition.
void validate(const ExperimentConfig& config, const std::string& origin = "<config>");

/// Parses one `policy =` value (everything after the equals sign).
[[nodiscard]] PolicyConfig parse_policy(std::string_view spec);

[[nodiscard]] std::string describe(const PriorSpec& prior);
[[nodiscard]] std::string describe(const RewardSpec& reward);
[[nodiscard]] std::string describe(const PolicyConfig& policy);

}  // namespace reb
