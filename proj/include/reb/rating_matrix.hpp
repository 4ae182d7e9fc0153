#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "reb/harness.hpp"
#include "reb/policies.hpp"

namespace reb {

/// Expected ratings of user groups (rows) for movies (columns).
struct RatingMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major
    double noise_sd = 0.796;

    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    [[nodiscard]] std::vector<double> row(std::size_t r) const;
};

/// Malformed matrix input; row and column are 1-based (0 when not applicable).
class matrix_parse_error : public std::runtime_error {
public:
    matrix_parse_error(const std::string& origin, std::size_t row, std::size_t col, const std::string& message);
    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

/// Throws std::invalid_argument on wrong sizes or non-finite entries.
void validate(const RatingMatrix& matrix);

/// Headerless CSV of reals; every row must have the same number of cells.
[[nodiscard]] RatingMatrix parse_rating_matrix(std::string_view text, const std::string& origin = "<matrix>");
[[nodiscard]] RatingMatrix load_rating_matrix(const std::filesystem::path& path);
void save_rating_matrix(const RatingMatrix& matrix, const std::filesystem::path& path);

/// Product of two Gaussian factor matrices of the given rank, min-max scaled
/// into [0, 5]. Stands in for the pre-processed ratings when they are absent.
[[nodiscard]] RatingMatrix synthetic_rating_matrix(std::size_t rows = 128, std::size_t cols = 128,
                                                   std::size_t rank = 5, std::uint64_t seed = 1);

/// ReUCB, UCB1 and Gaussian TS with a per-run prior fitted to the sampled row.
[[nodiscard]] std::vector<PolicyConfig> movielens_default_policies(double noise_sd);

/// Each run draws a row uniformly at random; its entries are the arm means and
/// rewards are Gaussian with variance noise_sd^2.
[[nodiscard]] std::vector<AggregateResult> movielens_experiment(const RatingMatrix& matrix, std::int64_t horizon,
                                                                std::int64_t n_runs, std::uint64_t base_seed,
                                                                std::span<const PolicyConfig> policies,
                                                                const RunnerOptions& options = {});

[[nodiscard]] InstanceSampler movielens_sampler(const RatingMatrix& matrix);

}  // namespace reb
