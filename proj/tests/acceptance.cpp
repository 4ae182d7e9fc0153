// Runs every primary acceptance criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "properties.hpp"
#include "reb/bounds.hpp"
#include "reb/config.hpp"
#include "reb/format.hpp"
#include "reb/harness.hpp"
#include "reb/rating_matrix.hpp"
#include "reb/results_io.hpp"

using namespace reb;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

PolicyConfig policy(std::string_view spec) { return parse_policy(spec); }

const AggregateResult& find(const std::vector<AggregateResult>& rs, const std::string& label) {
    for (const auto& r : rs)
        if (r.label == label) return r;
    throw std::logic_error("no result for " + label);
}

double final_mean(const AggregateResult& r) { return r.mean_cum_regret.back(); }
double final_se(const AggregateResult& r) { return r.stderr_cum_regret.back(); }
double pooled_se(const AggregateResult& a, const AggregateResult& b) {
    return std::hypot(final_se(a), final_se(b));
}

std::string summary(const std::vector<AggregateResult>& rs) {
    std::string out;
    for (const auto& r : rs) out += (out.empty() ? "" : ", ") + r.label + " " + fmt(final_mean(r)) + "+-" + fmt(final_se(r), 2);
    return out;
}

Outcome estimator_properties() {
    const auto start = std::chrono::steady_clock::now();
    const auto rep = props::estimator_properties(1000, 7);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Outcome o;
    o.pass = rep.failures == 0 && rep.published_lower_violations == 0 && secs < 10.0;
    o.detail = std::to_string(rep.configs) + " configs, " + std::to_string(rep.failures) +
               " violations of weight/identity/upper-bound/oracle checks, " +
               std::to_string(rep.published_lower_violations) + " arms below the published tau^2 lower bound" +
               (rep.published_lower_violations ? " (first: " + rep.first_published_lower_violation + ")" : "") +
               ", " + fmt(secs, 3) + " s" + (rep.failures ? " (first: " + rep.first_failure + ")" : "");
    return o;
}

Outcome coverage() {
    Rng rng(derive_seed(11, 0));
    const std::vector<std::int64_t> balanced(10, 5);
    const std::vector<std::int64_t> unbalanced{1, 50, 2, 20, 5, 100, 3, 10, 7, 30};
    const double b = posterior_coverage_check(balanced, {1.0, 1.0}, 10000, rng);
    const double u = posterior_coverage_check(unbalanced, {1.0, 1.0}, 10000, rng);
    return {std::abs(b - 0.95) <= 0.02 && std::abs(u - 0.95) <= 0.02,
            "balanced " + fmt(b) + ", unbalanced " + fmt(u) + " (target 0.95 +- 0.02)"};
}

Outcome variance_unbiasedness() {
    const std::size_t K = 10;
    const std::int64_t n = 20;
    const double s0 = 1.0, s = 1.0;
    const int reps = 10000;
    Rng rng(derive_seed(12, 0));
    double sum_s = 0.0, sum_s0 = 0.0;
    for (int r = 0; r < reps; ++r) {
        std::vector<ArmStats> stats(K);
        for (auto& st : stats) {
            const double mu = std::sqrt(s0) * standard_normal(rng);
            for (std::int64_t j = 0; j < n; ++j) st = update_stats(st, mu + std::sqrt(s) * standard_normal(rng));
        }
        sum_s += estimate_reward_variance(stats);
        sum_s0 += estimate_prior_variance(stats);
    }
    const double m_s = sum_s / reps, m_s0 = sum_s0 / reps;
    const double e_s = std::abs(m_s - s) / s, e_s0 = std::abs(m_s0 - s0) / s0;
    // Expected value of the between-arm estimator under this design.
    const double big_n = static_cast<double>(K * n);
    const double n_star = big_n - static_cast<double>(K) * n * n / big_n;
    const double expected_s0 = s0 + (static_cast<double>(K) - 1.0) * s / n_star;
    return {e_s <= 0.05 && e_s0 <= 0.05,
            "sigma^2 mean " + fmt(m_s) + " (rel err " + fmt(e_s, 2) + "), sigma0^2 mean " + fmt(m_s0) +
                " (rel err " + fmt(e_s0, 2) + "; analytic expectation of the estimator " + fmt(expected_s0) + ")"};
}

Outcome fig1a() {
    const std::vector<PolicyConfig> ps{policy("reucb label=ReUCB"),
                                       policy("reucb_star label=ReUCB* sigma0_sq=0.04 sigma_sq=0.25"),
                                       policy("ucb1 label=UCB1 sigma_sq=0.25"),
                                       policy("gaussian_ts label=TS sigma_sq=0.25 prior_mu0=1 prior_sigma0_sq=0.04")};
    const auto rs = run_experiment(ps, GaussianPrior{1.0, 0.04}, GaussianReward{0.25}, 50, 10000, 200, 1);
    const auto &re = find(rs, "ReUCB"), &star = find(rs, "ReUCB*"), &ucb = find(rs, "UCB1"), &ts = find(rs, "TS");
    const bool order = final_mean(re) < final_mean(ts) && final_mean(ts) < final_mean(ucb);
    const bool margin = final_mean(ts) - final_mean(re) > 2.0 * pooled_se(re, ts);
    const bool close = std::abs(final_mean(re) - final_mean(star)) <= 2.0 * pooled_se(re, star);
    return {order && margin && close, summary(rs) + "; order " + (order ? "ok" : "violated") + ", TS-ReUCB > 2SE " +
                                          (margin ? "ok" : "no") + ", |ReUCB-ReUCB*| <= 2SE " + (close ? "ok" : "no")};
}

Outcome fig2() {
    const std::vector<PolicyConfig> ps{policy("reucb label=ReUCB"), policy("ucb1 label=UCB1 sigma_sq=0.25"),
                                       policy("bernoulli_ts label=TS prior_alpha=1 prior_beta=1")};
    std::string detail;
    bool pass = true;
    double gap[2] = {0.0, 0.0};
    const std::size_t arms[2] = {20, 100};
    for (int i = 0; i < 2; ++i) {
        const auto rs = run_experiment(ps, UniformPrior{0.2, 0.5}, BernoulliReward{}, arms[i], 10000, 200, 2);
        const auto &re = find(rs, "ReUCB"), &ucb = find(rs, "UCB1"), &ts = find(rs, "TS");
        const bool order = final_mean(re) < final_mean(ts) && final_mean(ts) < final_mean(ucb);
        pass = pass && order;
        gap[i] = final_mean(ucb) - final_mean(re);
        detail += "K=" + std::to_string(arms[i]) + ": " + summary(rs) + (order ? " (order ok); " : " (order violated); ");
    }
    const bool widening = gap[1] > gap[0];
    detail += "UCB1-ReUCB gap " + fmt(gap[0]) + " -> " + fmt(gap[1]);
    return {pass && widening, detail};
}

Outcome fig3a() {
    const std::vector<PolicyConfig> ps{policy("reucb label=ReUCB"),
                                       policy("gaussian_ts label=TSm2 sigma_sq=0.25 prior_mu0=0 prior_sigma0_sq=0.04")};
    const auto rs = run_experiment(ps, GaussianPrior{1.0, 1.0}, GaussianReward{0.25}, 50, 10000, 200, 3);
    const auto &re = find(rs, "ReUCB"), &tsm = find(rs, "TSm2");
    const double at_1k = tsm.mean_cum_regret[999];
    const double at_10k = final_mean(tsm);
    const bool linear = at_10k > 0.5 * (10.0 * at_1k);
    const bool factor = at_10k >= 5.0 * final_mean(re);
    return {linear && factor, "TSm2 regret " + fmt(at_1k) + " at 1e3, " + fmt(at_10k) + " at 1e4 (needs > " +
                                  fmt(5.0 * at_1k) + "); ReUCB " + fmt(final_mean(re)) + ", ratio " +
                                  fmt(at_10k / final_mean(re), 3) + " (needs >= 5)"};
}

Outcome theorem1_dominance() {
    const std::vector<PolicyConfig> ps{policy("reucb_star label=ReUCB* sigma0_sq=1 sigma_sq=1")};
    const auto rs = run_experiment(ps, GaussianPrior{0.0, 1.0}, GaussianReward{1.0}, 10, 10000, 200, 4);
    const auto& r = rs.front();
    const double emp_1k = r.mean_cum_regret[999];
    const double emp_10k = final_mean(r);
    const double b_1k = gaussian_regret_bound({10, 1000, 1.0, 1.0, 1.0}, BoundVariant::at_least_1);
    const double b_10k = gaussian_regret_bound({10, 10000, 1.0, 1.0, 1.0}, BoundVariant::at_least_1);
    // Values from an independent high-precision evaluation of the closed form.
    const bool exact = std::abs(b_1k - 2133.03912987526889) <= 1e-9 * 2133.03912987526889 &&
                       std::abs(b_10k - 8579.45258653767669) <= 1e-9 * 8579.45258653767669;
    const bool below = emp_1k < b_1k && emp_10k < b_10k;
    return {exact && below, "regret " + fmt(emp_1k) + " vs bound " + fmt(b_1k, 10) + " at 1e3; " + fmt(emp_10k) +
                                " vs " + fmt(b_10k, 10) + " at 1e4; bound values " +
                                (exact ? "match" : "differ from") + " the reference"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome deterministic_replay() {
    auto cfg = load_config(fs::path(REB_SOURCE_DIR) / "configs" / "fig1a.cfg");
    cfg.n_runs = 24;
    cfg.horizon = 2000;
    const auto root = fs::temp_directory_path() / "reb_acceptance_replay";
    fs::remove_all(root);
    std::vector<std::pair<std::string, std::string>> bodies;
    for (int threads : {1, 3, 1}) {
        const auto dir = root / std::to_string(bodies.size());
        const auto rs = run_experiment(cfg.policies, cfg.prior, cfg.reward, cfg.arms, cfg.horizon, cfg.n_runs,
                                       cfg.base_seed, {threads, false});
        const auto files = write_results(rs, dir, config_json(cfg));
        bodies.emplace_back(slurp(files.curves), slurp(files.final));
    }
    fs::remove_all(root);
    const bool same = bodies[0] == bodies[1] && bodies[0] == bodies[2];
    return {same, std::string("3 runs of fig1a (24 runs, n=2000; 1, 3, 1 threads): CSV bodies ") +
                      (same ? "byte-identical" : "differ")};
}

Outcome movielens() {
    const auto matrix = synthetic_rating_matrix(128, 128, 5, 1);
    const auto ps = movielens_default_policies(matrix.noise_sd);
    const auto rs = movielens_experiment(matrix, 10000, 200, 5, ps);
    const auto &re = find(rs, "ReUCB"), &ucb = find(rs, "UCB1"), &ts = find(rs, "TS");
    return {final_mean(re) < final_mean(ts) && final_mean(re) < final_mean(ucb), summary(rs)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"estimator property suite", estimator_properties},
        {"posterior coverage", coverage},
        {"variance estimator unbiasedness", variance_unbiasedness},
        {"gaussian bandit ordering (K=50, N(1,0.04))", fig1a},
        {"bernoulli bandit ordering and widening gap", fig2},
        {"misspecified TS prior regret", fig3a},
        {"gaussian regret bound dominance", theorem1_dominance},
        {"deterministic replay", deterministic_replay},
        {"rating-matrix experiment", movielens},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
