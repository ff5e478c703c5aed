// scoreband: batch front end for score-band estimation, Monte Carlo
// experiments, density zoo tables, and good-event diagnostics.
//
// Exit codes: 0 success, 2 usage/config/input-format errors, 3 runtime
// failures (n too small, quadrature breakdown, I/O).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scoreband/band.hpp"
#include "scoreband/concentration.hpp"
#include "scoreband/densities.hpp"
#include "scoreband/errors.hpp"
#include "scoreband/format.hpp"
#include "scoreband/sample.hpp"
#include "scoreband/simulate.hpp"

namespace {

using scoreband::ParseError;

// ---------------------------------------------------------------------------
// Small text utilities

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    for (;;) {
        std::size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                               diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::string nearest_key(const std::string& key,
                        const std::vector<std::string>& known) {
    std::string best;
    std::size_t best_d = 5;  // suggest only when reasonably close
    for (const std::string& k : known) {
        std::size_t d = edit_distance(key, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw scoreband::Error("cannot open output file: " + path);
    out << text;
    if (!out) throw scoreband::Error("failed writing output file: " + path);
}

// ---------------------------------------------------------------------------
// Data and parameter parsing

std::vector<double> read_data_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open data file: " + path, 0);
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::string tok = trim(line);
        if (tok.empty()) continue;
        double v = scoreband::parse_double(tok, lineno);
        if (!std::isfinite(v))
            throw ParseError("data values must be finite, got '" + tok + "'",
                             lineno);
        values.push_back(v);
    }
    return values;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> params;
    for (const std::string& kv : kvs) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ParseError("model parameter must look like name=value, got '" +
                                 kv + "'",
                             0);
        std::string key = trim(kv.substr(0, eq));
        double value = scoreband::parse_double(trim(kv.substr(eq + 1)), 0);
        if (!params.emplace(key, value).second)
            throw ParseError("duplicate model parameter '" + key + "'", 0);
    }
    return params;
}

scoreband::ModelPtr make_model_checked(const std::string& family,
                                       const std::map<std::string, double>& p) {
    // Bad family names and parameter sets are usage errors, not runtime ones.
    try {
        return scoreband::make_model(family, p);
    } catch (const scoreband::DomainError& e) {
        throw ParseError(e.what(), 0);
    }
}

// ---------------------------------------------------------------------------
// estimate

struct GridFlags {
    std::size_t levels = 0;
    double h_max = 0.0;
    std::size_t grid_points = 0;
};

int cmd_estimate(const std::string& data_path, double delta,
                 std::uint64_t seed, const GridFlags& grid,
                 const std::string& format, const std::string& out) {
    scoreband::Sample data(read_data_file(data_path));
    scoreband::GridSpec spec = scoreband::default_grid(
        data, grid.levels, grid.h_max, grid.grid_points);
    scoreband::BandCurve band = scoreband::multiscale_band(data, delta, spec);
    band.seed = seed;
    write_output(out, format == "json" ? scoreband::band_to_json(band)
                                       : scoreband::band_to_csv(band));
    return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateFile {
    std::string kind;
    scoreband::ExperimentConfig config;
    std::string out_json;
    std::string out_csv;
};

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "kind",       "model",           "L",
        "a",          "b",               "hshift",
        "beta",       "n",               "delta",
        "reps",       "seed",            "levels",
        "hmax",       "grid_points",     "bandwidths",
        "coverage_points", "coverage_u_lo", "coverage_u_hi",
        "xgrid",      "check_refinement", "out_json",
        "out_csv"};
    return keys;
}

std::vector<double> parse_double_list(const std::string& text,
                                      std::size_t lineno) {
    std::vector<double> out;
    for (const std::string& part : split(text, ','))
        out.push_back(scoreband::parse_double(trim(part), lineno));
    return out;
}

std::uint64_t parse_u64(const std::string& text, std::size_t lineno) {
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ParseError("malformed unsigned integer: '" + text + "'", lineno);
    }
}

SimulateFile parse_simulate_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path, 0);

    std::map<std::string, std::pair<std::string, std::size_t>> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line must look like key = value", lineno);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        const auto& known = config_keys();
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            std::string hint = nearest_key(key, known);
            std::string msg = "unknown config key '" + key + "'";
            if (!hint.empty()) msg += "; did you mean '" + hint + "'?";
            throw ParseError(msg, lineno);
        }
        if (!kv.emplace(key, std::make_pair(value, lineno)).second)
            throw ParseError("duplicate config key '" + key + "'", lineno);
    }

    auto get = [&](const std::string& key) -> const std::pair<std::string, std::size_t>* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto require = [&](const std::string& key) -> const std::pair<std::string, std::size_t>& {
        const auto* p = get(key);
        if (!p) throw ParseError("config is missing required key '" + key + "'", 0);
        return *p;
    };

    SimulateFile out;
    out.kind = require("kind").first;
    if (out.kind != "coverage" && out.kind != "rates" &&
        out.kind != "goodevent" && out.kind != "pointwise")
        throw ParseError("kind must be coverage | rates | goodevent | pointwise",
                         require("kind").second);

    std::map<std::string, double> params;
    for (const char* pk : {"L", "a", "b", "hshift", "beta"})
        if (const auto* p = get(pk))
            params[pk] = scoreband::parse_double(p->first, p->second);
    out.config.model = make_model_checked(require("model").first, params);

    for (double v : parse_double_list(require("n").first, require("n").second)) {
        if (!(v > 0.0 && v == std::floor(v)))
            throw ParseError("n entries must be positive integers",
                             require("n").second);
        out.config.sizes.push_back(static_cast<std::size_t>(v));
    }

    if (const auto* p = get("delta")) {
        if (p->first == "1/n") {
            out.config.delta_policy = scoreband::DeltaPolicy::one_over_n;
        } else {
            out.config.delta = scoreband::parse_double(p->first, p->second);
        }
    }
    if (const auto* p = get("reps"))
        out.config.reps = static_cast<std::size_t>(parse_u64(p->first, p->second));
    if (const auto* p = get("seed")) out.config.seed = parse_u64(p->first, p->second);
    if (const auto* p = get("levels"))
        out.config.levels = static_cast<std::size_t>(parse_u64(p->first, p->second));
    if (const auto* p = get("hmax"))
        out.config.h_max = scoreband::parse_double(p->first, p->second);
    if (const auto* p = get("grid_points"))
        out.config.eval_count =
            static_cast<std::size_t>(parse_u64(p->first, p->second));
    if (const auto* p = get("bandwidths"))
        out.config.bandwidths = parse_double_list(p->first, p->second);
    if (const auto* p = get("coverage_points"))
        out.config.coverage_points =
            static_cast<std::size_t>(parse_u64(p->first, p->second));
    if (const auto* p = get("coverage_u_lo"))
        out.config.coverage_u_lo = scoreband::parse_double(p->first, p->second);
    if (const auto* p = get("coverage_u_hi"))
        out.config.coverage_u_hi = scoreband::parse_double(p->first, p->second);
    if (const auto* p = get("xgrid"))
        out.config.xgrid = parse_double_list(p->first, p->second);
    if (const auto* p = get("check_refinement"))
        out.config.check_refinement = p->first == "1" || p->first == "true";
    if (const auto* p = get("out_json")) out.out_json = p->first;
    if (const auto* p = get("out_csv")) out.out_csv = p->first;
    return out;
}

int cmd_simulate(const std::string& config_path, const CLI::App* sub,
                 double delta, std::uint64_t seed, const GridFlags& grid,
                 const std::string& out) {
    SimulateFile sim = parse_simulate_config(config_path);

    // Command-line overrides win over config-file values.
    if (sub->count("--delta")) {
        sim.config.delta = delta;
        sim.config.delta_policy = scoreband::DeltaPolicy::fixed;
    }
    if (sub->count("--seed")) sim.config.seed = seed;
    if (sub->count("--levels")) sim.config.levels = grid.levels;
    if (sub->count("--hmax")) sim.config.h_max = grid.h_max;
    if (sub->count("--grid-points")) sim.config.eval_count = grid.grid_points;
    if (sub->count("--out")) sim.out_json = out;

    try {
        scoreband::validate_config(sim.config);
    } catch (const scoreband::DomainError& e) {
        throw ParseError(e.what(), 0);  // config content is a usage error
    }

    scoreband::ExperimentReport report;
    if (sim.kind == "coverage") report = scoreband::run_coverage(sim.config);
    else if (sim.kind == "rates") report = scoreband::run_rates(sim.config);
    else if (sim.kind == "goodevent") report = scoreband::run_goodevent(sim.config);
    else report = scoreband::run_pointwise(sim.config);

    std::cerr << "wall clock: " << report.wall_seconds << " s\n";
    write_output(sim.out_json, scoreband::report_to_json(report));
    if (!sim.out_csv.empty())
        write_output(sim.out_csv, scoreband::records_to_csv(report.records));
    return 0;
}

// ---------------------------------------------------------------------------
// zoo

int cmd_zoo(const std::string& family, const std::vector<std::string>& kvs,
            std::size_t grid_points, const std::string& format,
            const std::string& out) {
    scoreband::ModelPtr model = make_model_checked(family, parse_params(kvs));
    std::size_t count = grid_points == 0 ? 201 : grid_points;

    std::vector<double> u(count), x(count);
    for (std::size_t i = 0; i < count; ++i) {
        u[i] = static_cast<double>(i + 1) / static_cast<double>(count + 1);
        x[i] = model->quantile(u[i]);
    }

    if (format == "json") {
        auto col = [&](auto&& f) {
            nlohmann::json arr = nlohmann::json::array();
            for (std::size_t i = 0; i < count; ++i) {
                double v = f(i);
                if (std::isinf(v))
                    arr.push_back(v > 0 ? "+inf" : "-inf");
                else
                    arr.push_back(v);
            }
            return arr;
        };
        nlohmann::json j;
        j["family"] = model->name();
        j["params"] = nlohmann::json(model->params());
        j["u"] = col([&](std::size_t i) { return u[i]; });
        j["x"] = col([&](std::size_t i) { return x[i]; });
        j["f0"] = col([&](std::size_t i) { return model->pdf(x[i]); });
        j["score"] = col([&](std::size_t i) { return model->score(x[i]); });
        j["J"] = col([&](std::size_t i) { return model->dq(u[i]); });
        j["Jprime"] = col([&](std::size_t i) { return model->dq_slope(u[i]); });
        write_output(out, j.dump(2) + "\n");
        return 0;
    }

    std::string text = "u,x,f0,score,J,Jprime\n";
    for (std::size_t i = 0; i < count; ++i) {
        text += scoreband::fmt_double(u[i]);
        text += ',';
        text += scoreband::fmt_double(x[i]);
        text += ',';
        text += scoreband::fmt_double(model->pdf(x[i]));
        text += ',';
        text += scoreband::fmt_double(model->score(x[i]));
        text += ',';
        text += scoreband::fmt_double(model->dq(u[i]));
        text += ',';
        text += scoreband::fmt_double(model->dq_slope(u[i]));
        text += '\n';
    }
    write_output(out, text);
    return 0;
}

// ---------------------------------------------------------------------------
// goodevent

int cmd_goodevent(const std::string& data_path, const std::string& family,
                  const std::vector<std::string>& kvs, double delta,
                  const std::string& format, const std::string& out) {
    scoreband::ModelPtr model = make_model_checked(family, parse_params(kvs));
    scoreband::Sample data(read_data_file(data_path));
    scoreband::GoodEventReport rep =
        scoreband::goodevent_stat(data, *model, delta);

    if (format == "csv") {
        std::string text =
            "n,delta,max_stat,budget,holds,worst_x0,worst_x1,worst_is_complement\n";
        text += std::to_string(data.size());
        text += ',';
        text += scoreband::fmt_double(delta);
        text += ',';
        text += scoreband::fmt_double(rep.max_stat);
        text += ',';
        text += scoreband::fmt_double(rep.budget);
        text += ',';
        text += rep.holds ? '1' : '0';
        text += ',';
        text += scoreband::fmt_double(rep.worst_x0);
        text += ',';
        text += scoreband::fmt_double(rep.worst_x1);
        text += ',';
        text += rep.worst_is_complement ? '1' : '0';
        text += '\n';
        write_output(out, text);
        return 0;
    }

    nlohmann::json j;
    j["n"] = data.size();
    j["delta"] = delta;
    j["max_stat"] = rep.max_stat;
    j["budget"] = rep.budget;
    j["holds"] = rep.holds;
    j["worst_x0"] = rep.worst_x0;
    j["worst_x1"] = rep.worst_x1;
    j["worst_is_complement"] = rep.worst_is_complement;
    write_output(out, j.dump(2) + "\n");
    return 0;
}

void check_delta_flag(const CLI::App* sub, double delta) {
    if (sub->count("--delta") &&
        !(std::isfinite(delta) && delta > 0.0 && delta < 1.0))
        throw ParseError("--delta must lie strictly inside (0,1)", 0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiscale score confidence bands for log-concave densities"};
    app.require_subcommand(1);

    std::string data_path, config_path, family, format = "csv", out;
    std::vector<std::string> params;
    double delta = 0.1;
    std::uint64_t seed = 0;
    GridFlags grid;

    auto add_common = [&](CLI::App* sub, bool with_grid) {
        sub->add_option("--delta", delta, "confidence level parameter in (0,1)");
        sub->add_option("--seed", seed, "seed recorded in the output");
        if (with_grid) {
            sub->add_option("--levels", grid.levels,
                            "bandwidth halvings below the data range");
            sub->add_option("--hmax", grid.h_max, "largest bandwidth");
            sub->add_option("--grid-points", grid.grid_points,
                            "evaluation grid size");
        }
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out, "output path (default stdout)");
    };

    CLI::App* est = app.add_subcommand(
        "estimate", "score band and estimate from a data file");
    est->add_option("data", data_path, "one real per line; # comments")
        ->required();
    add_common(est, true);

    CLI::App* sim = app.add_subcommand(
        "simulate", "Monte Carlo experiment from a key=value config file");
    sim->add_option("config", config_path, "flat key=value experiment config")
        ->required();
    add_common(sim, true);

    CLI::App* zoo = app.add_subcommand(
        "zoo", "tabulate density, score, and density-quantile functions");
    zoo->add_option("family", family,
                    "gaussian|laplace|flattened_laplace|subbotin|gumbel|beta")
        ->required();
    zoo->add_option("params", params, "model parameters as name=value");
    add_common(zoo, true);

    CLI::App* good = app.add_subcommand(
        "goodevent", "evaluate the interval concentration event on a data file");
    good->add_option("data", data_path, "one real per line; # comments")
        ->required();
    good->add_option("family", family, "reference model family")->required();
    good->add_option("params", params, "model parameters as name=value");
    add_common(good, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (est->parsed()) {
            check_delta_flag(est, delta);
            return cmd_estimate(data_path, delta, seed, grid, format, out);
        }
        if (sim->parsed()) {
            check_delta_flag(sim, delta);
            return cmd_simulate(config_path, sim, delta, seed, grid, out);
        }
        if (zoo->parsed())
            return cmd_zoo(family, params, grid.grid_points, format, out);
        check_delta_flag(good, delta);
        return cmd_goodevent(data_path, family, params, delta, format, out);
    } catch (const ParseError& e) {
        if (e.line() > 0)
            std::cerr << "error (line " << e.line() << "): " << e.what() << "\n";
        else
            std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
