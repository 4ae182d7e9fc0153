#include "reb/config.hpp"

#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "reb/format.hpp"

namespace reb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

double number(std::string_view token, const std::string& field) {
    double v = 0.0;
    if (!parse_double(token, v)) throw std::invalid_argument(field + ": expected a number, got '" + std::string(token) + "'");
    return v;
}

bool boolean(std::string_view token, const std::string& field) {
    if (token == "true" || token == "1" || token == "yes") return true;
    if (token == "false" || token == "0" || token == "no") return false;
    throw std::invalid_argument(field + ": expected true or false, got '" + std::string(token) + "'");
}

std::vector<double> numbers(std::span<const std::string_view> tokens, const std::string& field) {
    std::vector<double> out;
    for (auto t : tokens) out.push_back(number(t, field));
    return out;
}

void expect_args(std::span<const std::string_view> args, std::size_t n, const std::string& what) {
    if (args.size() != n)
        throw std::invalid_argument(what + " takes " + std::to_string(n) + " argument(s), got " +
                                    std::to_string(args.size()));
}

PriorSpec parse_prior(std::string_view value) {
    const auto tok = split_ws(value);
    if (tok.empty()) throw std::invalid_argument("prior: missing kind");
    const auto args = std::span(tok).subspan(1);
    if (tok[0] == "gaussian") {
        expect_args(args, 2, "prior gaussian");
        return GaussianPrior{number(args[0], "prior mu0"), number(args[1], "prior sigma0_sq")};
    }
    if (tok[0] == "uniform") {
        expect_args(args, 2, "prior uniform");
        return UniformPrior{number(args[0], "prior lo"), number(args[1], "prior hi")};
    }
    if (tok[0] == "beta") {
        expect_args(args, 2, "prior beta");
        return BetaPrior{number(args[0], "prior alpha"), number(args[1], "prior beta")};
    }
    if (tok[0] == "explicit") return ExplicitPrior{numbers(args, "prior means")};
    throw std::invalid_argument("prior: unknown kind '" + std::string(tok[0]) + "'");
}

RewardSpec parse_reward(std::string_view value) {
    const auto tok = split_ws(value);
    if (tok.empty()) throw std::invalid_argument("reward: missing kind");
    const auto args = std::span(tok).subspan(1);
    if (tok[0] == "gaussian") {
        expect_args(args, 1, "reward gaussian");
        return GaussianReward{number(args[0], "reward sigma_sq")};
    }
    if (tok[0] == "bernoulli") {
        expect_args(args, 0, "reward bernoulli");
        return BernoulliReward{};
    }
    if (tok[0] == "truncated_gaussian") {
        if (args.size() != 1 && args.size() != 3)
            throw std::invalid_argument("reward truncated_gaussian takes VAR [LO HI]");
        TruncatedGaussianReward r{number(args[0], "reward sigma_sq")};
        if (args.size() == 3) {
            r.lo = number(args[1], "reward lo");
            r.hi = number(args[2], "reward hi");
        }
        return r;
    }
    if (tok[0] == "hetero_gaussian") return HeteroGaussianReward{numbers(args, "reward sigma_sq")};
    throw std::invalid_argument("reward: unknown kind '" + std::string(tok[0]) + "'");
}

std::string join_numbers(const std::vector<double>& xs) {
    std::string out;
    for (double x : xs) out += " " + format_double(x);
    return out;
}

}  // namespace

config_error::config_error(const std::string& origin, std::size_t line, const std::string& message)
    : std::runtime_error(origin + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
      line_(line) {}

PolicyConfig parse_policy(std::string_view spec) {
    const auto tok = split_ws(spec);
    if (tok.empty()) throw std::invalid_argument("policy: missing kind");
    PolicyConfig cfg;
    cfg.kind = parse_policy_kind(tok[0]);

    std::optional<double> sigma0_sq, sigma_sq, prior_mu0, prior_sigma0_sq, prior_alpha, prior_beta;
    std::set<std::string, std::less<>> seen;
    for (auto t : std::span(tok).subspan(1)) {
        const auto eq = t.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("policy option '" + std::string(t) + "' is not key=value");
        const std::string key(t.substr(0, eq));
        const auto value = t.substr(eq + 1);
        if (!seen.insert(key).second) throw std::invalid_argument("policy option '" + key + "' given twice");

        if (key == "label") cfg.label = std::string(value);
        else if (key == "a") cfg.bonus_multiplier = number(value, key);
        else if (key == "sigma0_sq") sigma0_sq = number(value, key);
        else if (key == "sigma_sq") sigma_sq = number(value, key);
        else if (key == "known_mu0") cfg.known_mu0 = number(value, key);
        else if (key == "prior_mu0") prior_mu0 = number(value, key);
        else if (key == "prior_sigma0_sq") prior_sigma0_sq = number(value, key);
        else if (key == "prior_alpha") prior_alpha = number(value, key);
        else if (key == "prior_beta") prior_beta = number(value, key);
        else if (key == "c") cfg.bayes_ucb_c = number(value, key);
        else if (key == "default_sigma_sq") cfg.estimation.default_sigma_sq = number(value, key);
        else if (key == "default_sigma0_sq") cfg.estimation.default_sigma0_sq = number(value, key);
        else if (key == "prior_from_instance") cfg.prior_from_instance = boolean(value, key);
        else if (key == "binarize") cfg.binarize_rewards = boolean(value, key);
        else throw std::invalid_argument("unknown policy option '" + key + "'");
    }

    const bool gaussian_prior = prior_mu0 || prior_sigma0_sq;
    const bool beta_prior = prior_alpha || prior_beta;
    if (gaussian_prior && beta_prior) throw std::invalid_argument("policy mixes gaussian and beta prior options");
    if (gaussian_prior) {
        if (!prior_mu0 || !prior_sigma0_sq)
            throw std::invalid_argument("gaussian prior needs both prior_mu0 and prior_sigma0_sq");
        cfg.prior = GaussianPrior{*prior_mu0, *prior_sigma0_sq};
    }
    if (beta_prior) {
        if (!prior_alpha || !prior_beta) throw std::invalid_argument("beta prior needs both prior_alpha and prior_beta");
        cfg.prior = BetaPrior{*prior_alpha, *prior_beta};
    }
    if (cfg.prior_from_instance && !cfg.prior) cfg.prior = GaussianPrior{0.0, 1.0};  // replaced per run

    const auto kind = std::string(to_string(cfg.kind));
    const bool needs_noise = cfg.kind == PolicyKind::reucb_star || cfg.kind == PolicyKind::reucb_inf ||
                             cfg.kind == PolicyKind::ucb1 || cfg.kind == PolicyKind::gaussian_ts ||
                             (cfg.kind == PolicyKind::bayes_ucb && cfg.prior &&
                              std::holds_alternative<GaussianPrior>(*cfg.prior));
    if (needs_noise && !sigma_sq) throw std::invalid_argument(kind + " needs sigma_sq");
    if (cfg.kind == PolicyKind::reucb_star && !sigma0_sq) throw std::invalid_argument(kind + " needs sigma0_sq");
    if (sigma_sq) cfg.variance_params.sigma_sq = *sigma_sq;
    if (sigma0_sq) cfg.variance_params.sigma0_sq = *sigma0_sq;
    cfg.variance_params.source = VarianceSource::known;
    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config(std::string_view text, const std::string& origin) {
    ExperimentConfig cfg;
    std::optional<PriorSpec> prior;
    std::optional<RewardSpec> reward;
    std::optional<std::size_t> arms;
    std::set<std::string, std::less<>> seen;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw config_error(origin, line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        if (key != "policy" && !seen.insert(key).second)
            throw config_error(origin, line_no, "key '" + key + "' given twice");

        try {
            if (key == "name") cfg.name = std::string(value);
            else if (key == "prior") prior = parse_prior(value);
            else if (key == "reward") reward = parse_reward(value);
            else if (key == "arms") {
                std::size_t k = 0;
                if (!parse_int(value, k)) throw std::invalid_argument("arms: expected a count");
                arms = k;
            } else if (key == "horizon") {
                if (!parse_int(value, cfg.horizon)) throw std::invalid_argument("horizon: expected an integer");
            } else if (key == "runs") {
                if (!parse_int(value, cfg.n_runs)) throw std::invalid_argument("runs: expected an integer");
            } else if (key == "seed") {
                if (!parse_int(value, cfg.base_seed)) throw std::invalid_argument("seed: expected an unsigned integer");
            } else if (key == "out") cfg.out_dir = std::string(value);
            else if (key == "fixed_instance") cfg.fixed_instance = boolean(value, key);
            else if (key == "policy") cfg.policies.push_back(parse_policy(value));
            else throw std::invalid_argument("unknown key '" + key + "'");
        } catch (const std::invalid_argument& e) {
            throw config_error(origin, line_no, e.what());
        } catch (const std::domain_error& e) {
            throw config_error(origin, line_no, e.what());
        }
    }

    if (!prior) throw config_error(origin, 0, "missing required key 'prior'");
    if (!reward) throw config_error(origin, 0, "missing required key 'reward'");
    cfg.prior = *prior;
    cfg.reward = *reward;
    if (const auto* e = std::get_if<ExplicitPrior>(&cfg.prior)) {
        if (arms && *arms != e->means.size())
            throw config_error(origin, 0, "arms does not match the number of explicit means");
        arms = e->means.size();
    }
    if (!arms) throw config_error(origin, 0, "missing required key 'arms'");
    cfg.arms = *arms;
    if (cfg.name.empty()) cfg.name = "experiment";
    if (cfg.out_dir.empty()) cfg.out_dir = "results/" + cfg.name;
    validate(cfg, origin);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error(path.string(), 0, "cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    auto cfg = parse_config(buf.str(), path.string());
    return cfg;
}

void validate(const ExperimentConfig& config, const std::string& origin) {
    auto fail = [&](const std::string& msg) { throw config_error(origin, 0, msg); };
    try {
        validate(config.prior);
        validate(config.reward);
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (config.arms < 2) fail("arms must be >= 2");
    if (config.n_runs < 1) fail("runs must be >= 1");
    if (config.horizon < static_cast<std::int64_t>(config.arms)) fail("horizon must be >= arms");
    if (config.policies.empty()) fail("at least one policy is required");
    if (const auto* h = std::get_if<HeteroGaussianReward>(&config.reward); h && h->sigma_sq.size() != config.arms)
        fail("hetero_gaussian needs one variance per arm");
    std::set<std::string> labels;
    for (const auto& p : config.policies) {
        try {
            validate(p);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        if (!labels.insert(p.display_name()).second) fail("duplicate policy label '" + p.display_name() + "'");
    }
}

std::string describe(const PriorSpec& prior) {
    return std::visit(
        overloaded{
            [](const GaussianPrior& p) { return "gaussian " + format_double(p.mu0) + " " + format_double(p.sigma0_sq); },
            [](const UniformPrior& p) { return "uniform " + format_double(p.lo) + " " + format_double(p.hi); },
            [](const BetaPrior& p) { return "beta " + format_double(p.alpha) + " " + format_double(p.beta); },
            [](const ExplicitPrior& p) { return "explicit" + join_numbers(p.means); },
        },
        prior);
}

std::string describe(const RewardSpec& reward) {
    return std::visit(overloaded{
                          [](const GaussianReward& r) { return "gaussian " + format_double(r.sigma_sq); },
                          [](const BernoulliReward&) { return std::string("bernoulli"); },
                          [](const TruncatedGaussianReward& r) {
                              return "truncated_gaussian " + format_double(r.sigma_sq) + " " + format_double(r.lo) +
                                     " " + format_double(r.hi);
                          },
                          [](const HeteroGaussianReward& r) { return "hetero_gaussian" + join_numbers(r.sigma_sq); },
                      },
                      reward);
}

std::string describe(const PolicyConfig& p) {
    std::string out(to_string(p.kind));
    if (!p.label.empty()) out += " label=" + p.label;
    if (p.bonus_multiplier != 1.0) out += " a=" + format_double(p.bonus_multiplier);
    switch (p.kind) {
    case PolicyKind::reucb_star:
        out += " sigma0_sq=" + format_double(p.variance_params.sigma0_sq);
        [[fallthrough]];
    case PolicyKind::reucb_inf:
    case PolicyKind::ucb1:
    case PolicyKind::gaussian_ts:
        out += " sigma_sq=" + format_double(p.variance_params.sigma_sq);
        break;
    case PolicyKind::bayes_ucb:
        if (p.prior && std::holds_alternative<GaussianPrior>(*p.prior))
            out += " sigma_sq=" + format_double(p.variance_params.sigma_sq);
        out += " c=" + format_double(p.bayes_ucb_c);
        break;
    case PolicyKind::reucb:
        out += " default_sigma_sq=" + format_double(p.estimation.default_sigma_sq) +
               " default_sigma0_sq=" + format_double(p.estimation.default_sigma0_sq);
        break;
    default: break;
    }
    if (p.known_mu0) out += " known_mu0=" + format_double(*p.known_mu0);
    if (p.prior_from_instance) out += " prior_from_instance=true";
    else if (p.prior) {
        if (const auto* g = std::get_if<GaussianPrior>(&*p.prior))
            out += " prior_mu0=" + format_double(g->mu0) + " prior_sigma0_sq=" + format_double(g->sigma0_sq);
        else {
            const auto& b = std::get<BetaPrior>(*p.prior);
            out += " prior_alpha=" + format_double(b.alpha) + " prior_beta=" + format_double(b.beta);
        }
    }
    if (p.binarize_rewards) out += " binarize=true";
    return out;
}

}  // namespace reb
