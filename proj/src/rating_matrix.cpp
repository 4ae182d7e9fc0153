#include "reb/rating_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "reb/format.hpp"

namespace reb {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

}  // namespace

std::vector<double> RatingMatrix::row(std::size_t r) const {
    if (r >= rows) throw std::out_of_range("row index out of range");
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(r * cols);
    return {first, first + static_cast<std::ptrdiff_t>(cols)};
}

matrix_parse_error::matrix_parse_error(const std::string& origin, std::size_t row, std::size_t col,
                                       const std::string& message)
    : std::runtime_error(origin + ": row " + std::to_string(row) + (col > 0 ? ", column " + std::to_string(col) : "") +
                         ": " + message),
      row_(row), col_(col) {}

void validate(const RatingMatrix& m) {
    if (m.rows < 2 || m.cols < 2) throw std::invalid_argument("rating matrix needs at least 2 rows and 2 columns");
    if (m.values.size() != m.rows * m.cols) throw std::invalid_argument("rating matrix size does not match rows x cols");
    if (!std::all_of(m.values.begin(), m.values.end(), [](double v) { return std::isfinite(v); }))
        throw std::invalid_argument("rating matrix has non-finite entries");
    if (!(m.noise_sd >= 0.0) || !std::isfinite(m.noise_sd)) throw std::invalid_argument("noise_sd must be >= 0");
}

RatingMatrix parse_rating_matrix(std::string_view text, const std::string& origin) {
    RatingMatrix m;
    std::size_t row = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        if (line.empty()) continue;
        ++row;

        std::size_t col = 0;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const auto cell = trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                       : comma - start));
            ++col;
            double v = 0.0;
            if (!parse_double(cell, v) || !std::isfinite(v))
                throw matrix_parse_error(origin, row, col, "not a finite number: '" + std::string(cell) + "'");
            m.values.push_back(v);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (row == 1) m.cols = col;
        else if (col != m.cols)
            throw matrix_parse_error(origin, row, 0,
                                     "expected " + std::to_string(m.cols) + " cells, found " + std::to_string(col));
    }
    m.rows = row;
    if (m.rows < 2 || m.cols < 2)
        throw matrix_parse_error(origin, m.rows, 0, "rating matrix needs at least 2 rows and 2 columns");
    return m;
}

RatingMatrix load_rating_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open rating matrix");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_rating_matrix(buf.str(), path.string());
}

void save_rating_matrix(const RatingMatrix& m, const std::filesystem::path& path) {
    validate(m);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) out << (c ? "," : "") << format_double(m.at(r, c));
        out << '\n';
    }
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

RatingMatrix synthetic_rating_matrix(std::size_t rows, std::size_t cols, std::size_t rank, std::uint64_t seed) {
    if (rows < 2 || cols < 2 || rank < 1) throw std::invalid_argument("synthetic matrix needs rows, cols >= 2, rank >= 1");
    Rng rng(derive_seed(seed, stream_id("rating-matrix")));
    std::vector<double> u(rows * rank);
    std::vector<double> v(cols * rank);
    for (auto& x : u) x = standard_normal(rng);
    for (auto& x : v) x = standard_normal(rng);

    RatingMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.values.resize(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < rank; ++k) s += u[r * rank + k] * v[c * rank + k];
            m.values[r * cols + c] = s;
        }
    const auto [lo, hi] = std::minmax_element(m.values.begin(), m.values.end());
    const double min = *lo;
    const double span = *hi - *lo;
    for (auto& x : m.values) x = span > 0.0 ? 5.0 * (x - min) / span : 0.0;
    return m;
}

std::vector<PolicyConfig> movielens_default_policies(double noise_sd) {
    const double sigma_sq = noise_sd * noise_sd;
    PolicyConfig reucb;
    reucb.kind = PolicyKind::reucb;
    reucb.label = "ReUCB";

    PolicyConfig ucb1;
    ucb1.kind = PolicyKind::ucb1;
    ucb1.label = "UCB1";
    ucb1.variance_params.sigma_sq = sigma_sq;

    PolicyConfig ts;
    ts.kind = PolicyKind::gaussian_ts;
    ts.label = "TS";
    ts.variance_params.sigma_sq = sigma_sq;
    ts.prior = GaussianPrior{0.0, 1.0};
    ts.prior_from_instance = true;
    return {reucb, ucb1, ts};
}

InstanceSampler movielens_sampler(const RatingMatrix& matrix) {
    validate(matrix);
    return [matrix](Rng& rng) {
        std::uniform_int_distribution<std::size_t> pick(0, matrix.rows - 1);
        return make_instance(matrix.row(pick(rng)), GaussianReward{matrix.noise_sd * matrix.noise_sd});
    };
}

std::vector<AggregateResult> movielens_experiment(const RatingMatrix& matrix, std::int64_t horizon,
                                                  std::int64_t n_runs, std::uint64_t base_seed,
                                                  std::span<const PolicyConfig> policies,
                                                  const RunnerOptions& options) {
    return run_experiment(policies, movielens_sampler(matrix), horizon, n_runs, base_seed, options);
}

}  // namespace reb
