#include "reb/results_io.hpp"

#include <fstream>
#include <stdexcept>

#include "reb/format.hpp"

namespace reb {

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << body;
    out.flush();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

}  // namespace

std::string curves_csv(std::span<const AggregateResult> results) {
    if (results.empty()) throw std::invalid_argument("no results to write");
    const std::size_t rounds = results.front().mean_cum_regret.size();
    for (const auto& r : results)
        if (r.mean_cum_regret.size() != rounds || r.stderr_cum_regret.size() != rounds)
            throw std::invalid_argument("results have different horizons");

    std::string out = "round";
    for (const auto& r : results) out += "," + r.label + "_mean," + r.label + "_stderr";
    out += '\n';
    for (std::size_t t = 0; t < rounds; ++t) {
        out += std::to_string(t + 1);
        for (const auto& r : results) {
            out += ',';
            out += format_double(r.mean_cum_regret[t]);
            out += ',';
            out += format_double(r.stderr_cum_regret[t]);
        }
        out += '\n';
    }
    return out;
}

std::string final_csv(std::span<const AggregateResult> results) {
    std::string out = "policy,run,final_regret\n";
    for (const auto& r : results)
        for (std::size_t i = 0; i < r.final_regret_samples.size(); ++i)
            out += r.label + "," + std::to_string(i) + "," + format_double(r.final_regret_samples[i]) + "\n";
    return out;
}

nlohmann::json config_json(const ExperimentConfig& config) {
    nlohmann::json j;
    j["name"] = config.name;
    j["prior"] = describe(config.prior);
    j["reward"] = describe(config.reward);
    j["arms"] = config.arms;
    j["horizon"] = config.horizon;
    j["runs"] = config.n_runs;
    j["seed"] = config.base_seed;
    j["fixed_instance"] = config.fixed_instance;
    auto& policies = j["policies"] = nlohmann::json::array();
    for (const auto& p : config.policies) policies.push_back(describe(p));
    return j;
}

ResultFiles write_results(std::span<const AggregateResult> results, const std::filesystem::path& out_dir,
                          const nlohmann::json& meta) {
    if (results.empty()) throw std::invalid_argument("no results to write");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error(out_dir.string() + ": cannot create directory: " + ec.message());

    ResultFiles files{out_dir / "curves.csv", out_dir / "final.csv", out_dir / "meta.json"};
    write_file(files.curves, curves_csv(results));
    write_file(files.final, final_csv(results));
    write_file(files.meta, meta.dump(2) + "\n");
    return files;
}

CurvesTable parse_curves_csv(std::string_view text) {
    CurvesTable table;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    std::vector<std::string_view> header;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        if (line.empty()) continue;
        ++line_no;
        const auto cells = split(line, ',');
        if (line_no == 1) {
            if (cells.empty() || cells[0] != "round") throw std::runtime_error("curves.csv: first column must be 'round'");
            if (cells.size() < 3 || cells.size() % 2 == 0)
                throw std::runtime_error("curves.csv: expected round plus mean/stderr column pairs");
            for (std::size_t c = 1; c < cells.size(); c += 2) {
                const std::string mean(cells[c]);
                const std::string se(cells[c + 1]);
                if (mean.size() < 5 || mean.substr(mean.size() - 5) != "_mean")
                    throw std::runtime_error("curves.csv: column '" + mean + "' should end in _mean");
                const std::string label = mean.substr(0, mean.size() - 5);
                if (se != label + "_stderr")
                    throw std::runtime_error("curves.csv: column '" + se + "' should be '" + label + "_stderr'");
                table.labels.push_back(label);
            }
            header = cells;
            table.mean.resize(table.labels.size());
            table.stderr_.resize(table.labels.size());
            continue;
        }
        if (cells.size() != header.size())
            throw std::runtime_error("curves.csv: line " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        for (std::size_t c = 1; c < cells.size(); ++c) {
            double v = 0.0;
            if (!parse_double(cells[c], v))
                throw std::runtime_error("curves.csv: line " + std::to_string(line_no) + ", column '" +
                                         std::string(header[c]) + "': not a number");
            const std::size_t p = (c - 1) / 2;
            ((c - 1) % 2 == 0 ? table.mean : table.stderr_)[p].push_back(v);
        }
    }
    if (header.empty()) throw std::runtime_error("curves.csv: missing header");
    return table;
}

}  // namespace reb
