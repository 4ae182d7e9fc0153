#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reb/bounds.hpp"
#include "reb/config.hpp"
#include "reb/format.hpp"
#include "reb/harness.hpp"
#include "reb/rating_matrix.hpp"
#include "reb/results_io.hpp"

namespace {

struct RunFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> runs;
    std::optional<std::int64_t> horizon;
    int threads = 0;
    std::string out;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--seed", f.seed, "Base seed");
    cmd->add_option("--runs", f.runs, "Number of runs")->check(CLI::PositiveNumber);
    cmd->add_option("--horizon", f.horizon, "Rounds per run")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", f.threads, "Worker cap (0 = all available)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", f.out, "Output directory");
}

void print_summary(const std::vector<reb::AggregateResult>& results) {
    for (const auto& r : results) {
        std::cout << r.label << ": final regret " << reb::format_double(r.mean_cum_regret.back()) << " +- "
                  << reb::format_double(r.stderr_cum_regret.back()) << " (" << r.n_runs << " runs)\n";
    }
}

int simulate(const std::string& path, const RunFlags& f) {
    auto cfg = reb::load_config(path);
    if (f.seed) cfg.base_seed = *f.seed;
    if (f.runs) cfg.n_runs = *f.runs;
    if (f.horizon) cfg.horizon = *f.horizon;
    if (!f.out.empty()) cfg.out_dir = f.out;
    reb::validate(cfg, path);

    const auto results = reb::run_experiment(cfg.policies, cfg.prior, cfg.reward, cfg.arms, cfg.horizon, cfg.n_runs,
                                             cfg.base_seed, {f.threads, cfg.fixed_instance});
    const auto files = reb::write_results(results, cfg.out_dir, reb::config_json(cfg));
    print_summary(results);
    std::cout << "wrote " << files.curves.string() << ", " << files.final.string() << ", " << files.meta.string()
              << "\n";
    return 0;
}

int movielens(const std::string& matrix_path, bool synthetic, double noise_sd, const RunFlags& f) {
    if (matrix_path.empty() && !synthetic) throw std::invalid_argument("movielens needs a matrix file or --synthetic");
    const std::uint64_t seed = f.seed.value_or(1);
    auto matrix = synthetic ? reb::synthetic_rating_matrix(128, 128, 5, seed) : reb::load_rating_matrix(matrix_path);
    matrix.noise_sd = noise_sd;
    reb::validate(matrix);

    const std::int64_t horizon = f.horizon.value_or(10000);
    const std::int64_t runs = f.runs.value_or(200);
    const auto policies = reb::movielens_default_policies(noise_sd);
    const auto results = reb::movielens_experiment(matrix, horizon, runs, seed, policies, {f.threads, false});

    nlohmann::json meta;
    meta["name"] = "movielens";
    meta["matrix"] = synthetic ? std::string("synthetic rank-5 128x128") : matrix_path;
    meta["rows"] = matrix.rows;
    meta["cols"] = matrix.cols;
    meta["noise_sd"] = noise_sd;
    meta["horizon"] = horizon;
    meta["runs"] = runs;
    meta["seed"] = seed;
    for (const auto& p : policies) meta["policies"].push_back(reb::describe(p));
    const auto files = reb::write_results(results, f.out.empty() ? "results/movielens" : f.out, meta);
    print_summary(results);
    std::cout << "wrote " << files.curves.parent_path().string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-effect bandit simulator"};
    app.require_subcommand(1);

    RunFlags sim_flags;
    std::string config_path;
    auto* sim = app.add_subcommand("simulate", "Run an experiment config and write CSV results");
    sim->add_option("config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    add_run_flags(sim, sim_flags);

    RunFlags ml_flags;
    std::string matrix_path;
    bool synthetic = false;
    double noise_sd = 0.796;
    auto* ml = app.add_subcommand("movielens", "Recommendation experiment on a rating matrix");
    ml->add_option("matrix", matrix_path, "Headerless CSV rating matrix")->check(CLI::ExistingFile);
    ml->add_flag("--synthetic", synthetic, "Use a generated rank-5 128x128 matrix");
    ml->add_option("--noise-sd", noise_sd, "Reward noise standard deviation")->check(CLI::NonNegativeNumber);
    add_run_flags(ml, ml_flags);

    reb::BoundInputs bound_in{10, 1000, 1.0, 1.0, 1.0};
    std::optional<double> sigma_q_sq;
    auto* bound = app.add_subcommand("bound", "Print the regret bounds");
    bound->add_option("--arms", bound_in.arms, "K")->check(CLI::PositiveNumber);
    bound->add_option("--horizon", bound_in.horizon, "n")->check(CLI::PositiveNumber);
    bound->add_option("--sigma0-sq", bound_in.sigma0_sq, "Prior variance of the arm means");
    bound->add_option("--sigma-sq", bound_in.sigma_sq, "Reward noise variance");
    bound->add_option("-a,--a", bound_in.a, "Bonus multiplier");
    bound->add_option("--sigma-q-sq", sigma_q_sq, "Also print the unshared-mean leading term");

    std::vector<std::int64_t> allocation{10, 10, 10, 10, 10};
    reb::VarianceParams cov_params;
    std::int64_t cov_reps = 10000;
    std::uint64_t cov_seed = 1;
    double cov_mu0 = 0.0;
    auto* cov = app.add_subcommand("coverage", "Monte Carlo coverage of the 1.96 tau interval");
    cov->add_option("--pulls", allocation, "Pulls per arm")->delimiter(',');
    cov->add_option("--sigma0-sq", cov_params.sigma0_sq, "Prior variance of the arm means");
    cov->add_option("--sigma-sq", cov_params.sigma_sq, "Reward noise variance");
    cov->add_option("--mu0", cov_mu0, "Common mean");
    cov->add_option("--reps", cov_reps, "Replicates")->check(CLI::PositiveNumber);
    cov->add_option("--seed", cov_seed, "Seed");

    auto* list = app.add_subcommand("list-policies", "List policy kinds");

    std::size_t mm_rows = 128, mm_cols = 128, mm_rank = 5;
    std::uint64_t mm_seed = 1;
    std::string mm_out;
    auto* mm = app.add_subcommand("make-matrix", "Write a synthetic rating matrix CSV");
    mm->add_option("--rows", mm_rows)->check(CLI::Range(2, 1 << 20));
    mm->add_option("--cols", mm_cols)->check(CLI::Range(2, 1 << 20));
    mm->add_option("--rank", mm_rank)->check(CLI::PositiveNumber);
    mm->add_option("--seed", mm_seed);
    mm->add_option("--out", mm_out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return simulate(config_path, sim_flags);
        if (ml->parsed()) return movielens(matrix_path, synthetic, noise_sd, ml_flags);
        if (bound->parsed()) {
            std::cout << "beta = " << reb::format_double(reb::mean_estimation_factor(bound_in)) << "\n";
            for (auto v : {reb::BoundVariant::at_least_1, reb::BoundVariant::at_least_2}) {
                const char* name = v == reb::BoundVariant::at_least_1 ? "a>=1" : "a>=2";
                try {
                    const double b = reb::gaussian_regret_bound(bound_in, v);
                    std::cout << "gaussian (" << name << ") = " << reb::format_double(b) << "\n";
                } catch (const std::domain_error& e) {
                    std::cout << "gaussian (" << name << "): " << e.what() << "\n";
                }
                const char* bname = v == reb::BoundVariant::at_least_1 ? "a>=m" : "a>=2m";
                try {
                    const auto b = reb::bounded_regret_bound(bound_in, v);
                    std::cout << "bounded support (" << bname << ") = " << reb::format_double(b.bound) << "\n";
                } catch (const std::domain_error& e) {
                    std::cout << "bounded support (" << bname << "): " << e.what() << "\n";
                }
            }
            std::cout << "m = " << reb::format_double(reb::sub_gaussian_threshold(bound_in)) << "\n";
            if (sigma_q_sq)
                std::cout << "unshared-mean leading term = "
                          << reb::format_double(reb::unshared_mean_leading_term(bound_in, *sigma_q_sq)) << "\n";
            return 0;
        }
        if (cov->parsed()) {
            reb::validate(cov_params);
            reb::Rng rng(cov_seed);
            const double c = reb::posterior_coverage_check(allocation, cov_params, cov_reps, rng, cov_mu0);
            std::cout << "coverage = " << reb::format_double(c) << "\n";
            return 0;
        }
        if (list->parsed()) {
            for (auto k : reb::all_policy_kinds()) std::cout << reb::to_string(k) << "\n";
            return 0;
        }
        if (mm->parsed()) {
            reb::save_rating_matrix(reb::synthetic_rating_matrix(mm_rows, mm_cols, mm_rank, mm_seed), mm_out);
            std::cout << "wrote " << mm_out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
