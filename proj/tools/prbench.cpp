// Benchmark CLI: runs the measurement-ratio x noise-level experiment grid
// and writes per-trial results (CSV) plus aggregated plot-data curves.

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "phaseret/bench.hpp"
#include "phaseret/io_formats.hpp"

namespace {

std::vector<std::string> split_commas(const std::string &text) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

double parse_real(const std::string &token, const std::string &what) {
    errno = 0;
    char *end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
        throw std::invalid_argument(what + ": '" + token +
                                    "' is not a number");
    return value;
}

long long parse_integer(const std::string &token, const std::string &what) {
    errno = 0;
    char *end = nullptr;
    const long long value = std::strtoll(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0' || errno == ERANGE)
        throw std::invalid_argument(what + ": '" + token +
                                    "' is not an integer");
    return value;
}

std::uint64_t parse_seed(const std::string &token) {
    errno = 0;
    char *end = nullptr;
    const unsigned long long value = std::strtoull(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0' || errno == ERANGE ||
        token.find('-') != std::string::npos)
        throw std::invalid_argument("seed: '" + token +
                                    "' is not an unsigned 64-bit integer");
    return value;
}

std::vector<double> parse_real_list(const std::string &text,
                                    const std::string &what) {
    std::vector<double> out;
    for (const std::string &tok : split_commas(text))
        out.push_back(parse_real(tok, what));
    return out;
}

// key=value lines; blank lines and '#' comments ignored.
std::map<std::string, std::string> read_config_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == first)
            throw std::runtime_error(path + ": line " +
                                     std::to_string(lineno) +
                                     ": expected key=value");
        std::string key = line.substr(first, eq - first);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t'))
            key.pop_back();
        std::string value = line.substr(eq + 1);
        const auto vstart = value.find_first_not_of(" \t");
        value = vstart == std::string::npos ? std::string() :
                value.substr(vstart);
        while (!value.empty() && (value.back() == ' ' || value.back() == '\t'))
            value.pop_back();
        kv[key] = value;
    }
    return kv;
}

void apply_setting(phaseret::bench::ExperimentConfig &config,
                   std::string *out_path, std::string *curves_path,
                   const std::string &key, const std::string &value) {
    if (key == "n") {
        config.n = static_cast<int>(parse_integer(value, "n"));
    } else if (key == "alphas") {
        config.alphas = parse_real_list(value, "alphas");
    } else if (key == "noise") {
        config.sigma_n2_list = parse_real_list(value, "noise");
    } else if (key == "sigma_x2") {
        config.sigma_x2 = parse_real(value, "sigma_x2");
    } else if (key == "trials") {
        config.trials = static_cast<int>(parse_integer(value, "trials"));
    } else if (key == "algos") {
        config.algos = split_commas(value);
    } else if (key == "seed") {
        config.master_seed = parse_seed(value);
    } else if (key == "workers") {
        config.workers = static_cast<int>(parse_integer(value, "workers"));
    } else if (key == "out") {
        *out_path = value;
    } else if (key == "curves") {
        *curves_path = value;
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{
        "Phase-retrieval benchmark: sweeps M/N ratios and noise levels, "
        "running the selected solvers over seeded trials."};

    std::string n_str, alphas_str, noise_str, sigma_x2_str, trials_str,
        algos_str, seed_str, workers_str, out_str, curves_str, config_path;
    app.add_option("--n", n_str, "Signal dimension N (default 64)");
    app.add_option("--alphas", alphas_str,
                   "Comma list of M/N ratios (default 1,2,3,4,5,6)");
    app.add_option("--noise", noise_str,
                   "Comma list of noise variances (default 0,0.3,0.7)");
    app.add_option("--sigma-x2", sigma_x2_str,
                   "Generation-side signal variance (default 1)");
    app.add_option("--trials", trials_str, "Trials per cell (default 100)");
    app.add_option("--algos", algos_str,
                   "Comma subset of prvbem,gs (default both)");
    app.add_option("--seed", seed_str, "Master seed (default 1)");
    app.add_option("--workers", workers_str,
                   "Worker threads (default: hardware concurrency)");
    app.add_option("--out", out_str,
                   "Per-trial results CSV path (default results.csv)");
    app.add_option("--curves", curves_str,
                   "Aggregated plot-data path (default curves.txt)");
    app.add_option("--config", config_path,
                   "key=value config file; explicit flags override it");

    CLI11_PARSE(app, argc, argv);

    try {
        phaseret::bench::ExperimentConfig config;
        const unsigned hw = std::thread::hardware_concurrency();
        config.workers = hw == 0 ? 1 : static_cast<int>(hw);
        std::string out_path = "results.csv";
        std::string curves_path = "curves.txt";

        if (!config_path.empty())
            for (const auto &[key, value] : read_config_file(config_path))
                apply_setting(config, &out_path, &curves_path, key, value);

        const std::pair<const char *, const std::string *> overrides[] = {
            {"n", &n_str},           {"alphas", &alphas_str},
            {"noise", &noise_str},   {"sigma_x2", &sigma_x2_str},
            {"trials", &trials_str}, {"algos", &algos_str},
            {"seed", &seed_str},     {"workers", &workers_str},
            {"out", &out_str},       {"curves", &curves_str},
        };
        for (const auto &[key, value] : overrides)
            if (!value->empty())
                apply_setting(config, &out_path, &curves_path, key, *value);

        phaseret::bench::validate(config);
        const std::vector<phaseret::TrialResult> results =
            phaseret::bench::run_experiment(config);
        phaseret::write_results(out_path, results);
        const std::vector<std::string> notes =
            phaseret::bench::emit_curve(results, curves_path);
        for (const std::string &note : notes)
            std::cerr << "prbench: note: " << note << "\n";
        std::cout << results.size() << " result rows -> " << out_path
                  << ", curves -> " << curves_path << "\n";
        return 0;
    } catch (const std::exception &ex) {
        std::cerr << "prbench: error: " << ex.what() << "\n";
        return 1;
    }
}
