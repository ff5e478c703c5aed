#include "scoreband/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "scoreband/band.hpp"
#include "scoreband/concentration.hpp"
#include "scoreband/errors.hpp"
#include "scoreband/format.hpp"
#include "scoreband/loss.hpp"
#include "scoreband/parallel.hpp"
#include "scoreband/rng.hpp"

namespace scoreband {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kBootstrapTag = 0x626F6F7473747261ULL;
constexpr std::size_t kBootstrapReplicates = 200;

enum class RunKind { coverage, rates, goodevent, pointwise };

const char* kind_name(RunKind kind) {
    switch (kind) {
        case RunKind::coverage: return "coverage";
        case RunKind::rates: return "rates";
        case RunKind::goodevent: return "goodevent";
        case RunKind::pointwise: return "pointwise";
    }
    return "";
}

// One independent stream per rep index, shared across n cells so larger-n
// cells reuse the same underlying randomness per rep.
std::uint64_t rep_stream_seed(std::uint64_t master, std::size_t rep) {
    return Rng::stream(master, static_cast<std::uint64_t>(rep)).next_u64();
}

double cell_delta(const ExperimentConfig& config, std::size_t n) {
    return config.delta_policy == DeltaPolicy::one_over_n
               ? 1.0 / static_cast<double>(n)
               : config.delta;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t m = v.size();
    return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

struct RepWork {
    RepRecord rec;
    std::vector<double> abs_err;  // pointwise sites; empty otherwise
};

void one_rep(const ExperimentConfig& config, RunKind kind, std::size_t n,
             double delta, const std::vector<double>& check_x,
             const std::vector<double>& check_psi, std::size_t rep,
             RepWork& out) {
    const DensityModel& model = *config.model;
    Sample data(sample(model, n, rep_stream_seed(config.seed, rep)));
    GridSpec grid = kind == RunKind::coverage
                        ? custom_grid(data, check_x, config.levels, config.h_max)
                        : default_grid(data, config.levels, config.h_max,
                                       config.eval_count);
    if (!config.bandwidths.empty())
        grid = explicit_grid(data, std::move(grid.eval_points),
                             config.bandwidths);
    BandCurve band = multiscale_band(data, delta, grid);

    bool covered = true;
    if (kind == RunKind::coverage) {
        // The eval grid is exactly the checkpoint set, so the band is read
        // off directly rather than through the step interpolant.
        for (std::size_t i = 0; i < check_psi.size() && covered; ++i)
            covered = band.lower[i] <= check_psi[i] &&
                      check_psi[i] <= band.upper[i];
    } else {
        for (std::size_t i = 0; i < band.x.size() && covered; ++i) {
            double truth = model.score(band.x[i]);
            covered = band.lower[i] <= truth && truth <= band.upper[i];
        }
    }

    if (config.check_refinement) {
        // Adding a scale can only shrink the min over uppers and grow the
        // max over lowers, so the nested band must sit inside, exactly.
        GridSpec fine = grid;
        fine.bandwidths.push_back(fine.bandwidths.back() / 2.0);
        BandCurve fb = multiscale_band(data, delta, fine);
        for (std::size_t i = 0; i < band.x.size(); ++i)
            if (fb.upper[i] > band.upper[i] || fb.lower[i] < band.lower[i])
                throw Error("refining the bandwidth grid widened the band");
    }

    auto curve = [&band](double x) { return band_estimate_at(band, x); };
    LossReport loss = l2_loss(curve, band.x, model, {});

    out.rec = RepRecord{rep, n, loss.total, covered,
                        goodevent_stat(data, model, delta).holds};
    if (kind == RunKind::pointwise) {
        out.abs_err.resize(config.xgrid.size());
        for (std::size_t j = 0; j < config.xgrid.size(); ++j) {
            double truth = model.score(config.xgrid[j]);
            out.abs_err[j] = std::isfinite(truth)
                                 ? std::fabs(band_estimate_at(band, config.xgrid[j]) -
                                             truth)
                                 : kInf;
        }
    }
}

CellSummary summarize_cell(std::size_t n, double delta,
                           const std::vector<RepWork>& works) {
    CellSummary cell;
    cell.n = n;
    cell.delta = delta;
    double reps = static_cast<double>(works.size());
    std::size_t covered = 0, good = 0;
    std::vector<double> losses;
    losses.reserve(works.size());
    bool all_finite = true;
    for (const RepWork& w : works) {
        covered += w.rec.covered ? 1 : 0;
        good += w.rec.goodevent ? 1 : 0;
        losses.push_back(w.rec.loss);
        all_finite = all_finite && std::isfinite(w.rec.loss);
    }
    cell.coverage = static_cast<double>(covered) / reps;
    cell.coverage_se = std::sqrt(cell.coverage * (1.0 - cell.coverage) / reps);
    cell.goodevent_rate = static_cast<double>(good) / reps;
    cell.median_loss = median_of(losses);
    if (all_finite) {
        double sum = 0.0;
        for (double v : losses) sum += v;
        cell.mean_loss = sum / reps;
        double ss = 0.0;
        for (double v : losses) ss += (v - cell.mean_loss) * (v - cell.mean_loss);
        cell.loss_se = losses.size() > 1
                           ? std::sqrt(ss / (reps * (reps - 1.0)))
                           : 0.0;
    } else {
        cell.mean_loss = kInf;
        cell.loss_se = kInf;
    }
    return cell;
}

SlopeFit least_squares(const std::vector<double>& x,
                       const std::vector<double>& y) {
    double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

SlopeFit fit_rates(const std::vector<std::size_t>& sizes,
                   const std::vector<std::vector<double>>& cell_losses,
                   std::uint64_t seed) {
    std::vector<double> logn, logm;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        double med = median_of(cell_losses[c]);
        if (!(std::isfinite(med) && med > 0.0))
            throw DomainError("rate fit needs positive finite median losses");
        logn.push_back(std::log(static_cast<double>(sizes[c])));
        logm.push_back(std::log(med));
    }
    SlopeFit fit = least_squares(logn, logm);

    // Percentile bootstrap: resample reps within each cell, re-take medians,
    // refit. Streams split off the master seed keep this deterministic.
    std::vector<double> slopes(kBootstrapReplicates);
    for (std::size_t b = 0; b < kBootstrapReplicates; ++b) {
        Rng rng = Rng::stream(seed ^ kBootstrapTag, b);
        std::vector<double> boot_logm(sizes.size());
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            const auto& losses = cell_losses[c];
            std::vector<double> draw(losses.size());
            for (std::size_t r = 0; r < losses.size(); ++r)
                draw[r] = losses[rng.next_below(losses.size())];
            boot_logm[c] = std::log(median_of(draw));
        }
        slopes[b] = least_squares(logn, boot_logm).slope;
    }
    std::sort(slopes.begin(), slopes.end());
    auto pick = [&](double q) {
        double pos = q * static_cast<double>(kBootstrapReplicates - 1);
        return slopes[static_cast<std::size_t>(pos + 0.5)];
    };
    fit.ci_lo = pick(0.025);
    fit.ci_hi = pick(0.975);
    return fit;
}

ExperimentReport run_cells(const ExperimentConfig& config, RunKind kind) {
    validate_config(config);
    if (kind == RunKind::pointwise) {
        if (config.xgrid.empty())
            throw DomainError("pointwise run needs a non-empty xgrid");
        for (std::size_t j = 0; j < config.xgrid.size(); ++j) {
            if (!std::isfinite(config.xgrid[j]))
                throw NonFiniteInput("xgrid point is not finite");
            if (j > 0 && config.xgrid[j] <= config.xgrid[j - 1])
                throw DomainError("xgrid must be strictly increasing");
        }
    }
    if (kind == RunKind::rates) {
        if (config.sizes.size() < 4)
            throw DomainError("rate run needs at least 4 sample sizes");
        auto [lo, hi] = std::minmax_element(config.sizes.begin(),
                                            config.sizes.end());
        if (*hi < 4 * *lo)
            throw DomainError("rate run sizes must span at least 2 octaves");
    }

    auto t0 = std::chrono::steady_clock::now();
    const DensityModel& model = *config.model;

    // Coverage checkpoints: model quantiles of an equispaced u grid, shared
    // by every cell. Strictly increasing by monotonicity; deduplicated in
    // case adjacent u's collapse to one double deep in a tail.
    std::vector<double> check_x, check_psi;
    if (kind == RunKind::coverage) {
        std::size_t m = config.coverage_points;
        for (std::size_t i = 0; i < m; ++i) {
            double t = static_cast<double>(i) / static_cast<double>(m - 1);
            double u = config.coverage_u_lo +
                       t * (config.coverage_u_hi - config.coverage_u_lo);
            double x = model.quantile(u);
            if (!check_x.empty() && x <= check_x.back()) continue;
            check_x.push_back(x);
            check_psi.push_back(model.score(x));
        }
    }

    ExperimentReport report;
    report.kind = kind_name(kind);
    report.model_name = model.name();
    report.model_params = model.params();
    report.reps = config.reps;
    report.seed = config.seed;
    report.delta_policy =
        config.delta_policy == DeltaPolicy::one_over_n ? "1/n" : "fixed";
    report.delta =
        config.delta_policy == DeltaPolicy::one_over_n ? 0.0 : config.delta;
    report.coverage_points = config.coverage_points;
    report.coverage_u_lo = config.coverage_u_lo;
    report.coverage_u_hi = config.coverage_u_hi;
    report.grid_levels = config.levels;
    report.grid_h_max = config.h_max;
    report.grid_eval_count = config.eval_count;
    if (kind == RunKind::pointwise) report.xgrid = config.xgrid;

    std::vector<std::vector<double>> cell_losses;
    for (std::size_t n : config.sizes) {
        double delta = cell_delta(config, n);
        std::vector<RepWork> works(config.reps);
        parallel_for(config.reps, [&](std::size_t r) {
            one_rep(config, kind, n, delta, check_x, check_psi, r, works[r]);
        });
        report.cells.push_back(summarize_cell(n, delta, works));
        std::vector<double> losses;
        losses.reserve(config.reps);
        for (const RepWork& w : works) {
            report.records.push_back(w.rec);
            losses.push_back(w.rec.loss);
        }
        cell_losses.push_back(std::move(losses));
        if (kind == RunKind::pointwise) {
            std::vector<double> med(config.xgrid.size());
            for (std::size_t j = 0; j < config.xgrid.size(); ++j) {
                std::vector<double> site(config.reps);
                for (std::size_t r = 0; r < config.reps; ++r)
                    site[r] = works[r].abs_err[j];
                med[j] = median_of(site);
            }
            report.pointwise_median_err.push_back(std::move(med));
        }
    }

    if (kind == RunKind::rates) {
        report.slope = fit_rates(config.sizes, cell_losses, config.seed);
        report.has_slope = true;
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return report;
}

nlohmann::json jnum(double v) {
    if (std::isnan(v)) throw NonFiniteInput("report value is NaN");
    if (std::isfinite(v)) return v;
    return v > 0.0 ? "+inf" : "-inf";
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
    if (!config.model) throw DomainError("experiment config needs a model");
    if (config.sizes.empty())
        throw DomainError("experiment config needs at least one sample size");
    for (std::size_t n : config.sizes)
        if (n < 3) throw DomainError("sample sizes must be >= 3");
    if (config.reps < 1) throw DomainError("reps must be >= 1");
    if (config.delta_policy == DeltaPolicy::fixed &&
        !(std::isfinite(config.delta) && config.delta > 0.0 &&
          config.delta < 1.0))
        throw DomainError("delta must lie strictly inside (0,1)");
    if (config.coverage_points < 2)
        throw DomainError("coverage needs at least 2 checkpoints");
    if (!(config.coverage_u_lo > 0.0 &&
          config.coverage_u_lo < config.coverage_u_hi &&
          config.coverage_u_hi < 1.0))
        throw DomainError("coverage checkpoint range must satisfy "
                          "0 < u_lo < u_hi < 1");
}

ExperimentReport run_coverage(const ExperimentConfig& config) {
    return run_cells(config, RunKind::coverage);
}

ExperimentReport run_rates(const ExperimentConfig& config) {
    return run_cells(config, RunKind::rates);
}

ExperimentReport run_goodevent(const ExperimentConfig& config) {
    return run_cells(config, RunKind::goodevent);
}

ExperimentReport run_pointwise(const ExperimentConfig& config) {
    return run_cells(config, RunKind::pointwise);
}

std::string report_to_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["kind"] = report.kind;
    j["model"] = {{"family", report.model_name},
                  {"params", nlohmann::json(report.model_params)}};
    j["reps"] = report.reps;
    j["seed"] = report.seed;
    j["delta_policy"] = report.delta_policy;
    j["delta"] = jnum(report.delta);
    j["coverage_points"] = report.coverage_points;
    j["coverage_u"] = {jnum(report.coverage_u_lo), jnum(report.coverage_u_hi)};
    j["grid"] = {{"levels", report.grid_levels},
                 {"h_max", jnum(report.grid_h_max)},
                 {"eval_count", report.grid_eval_count}};
    nlohmann::json cells = nlohmann::json::array();
    for (const CellSummary& c : report.cells) {
        cells.push_back({{"n", c.n},
                         {"delta", jnum(c.delta)},
                         {"coverage", jnum(c.coverage)},
                         {"coverage_se", jnum(c.coverage_se)},
                         {"goodevent_rate", jnum(c.goodevent_rate)},
                         {"median_loss", jnum(c.median_loss)},
                         {"mean_loss", jnum(c.mean_loss)},
                         {"loss_se", jnum(c.loss_se)}});
    }
    j["cells"] = std::move(cells);
    nlohmann::json records = nlohmann::json::array();
    for (const RepRecord& r : report.records)
        records.push_back({r.rep, r.n, jnum(r.loss), r.covered ? 1 : 0,
                           r.goodevent ? 1 : 0});
    j["records"] = std::move(records);
    if (report.has_slope)
        j["slope"] = {{"slope", jnum(report.slope.slope)},
                      {"intercept", jnum(report.slope.intercept)},
                      {"ci_lo", jnum(report.slope.ci_lo)},
                      {"ci_hi", jnum(report.slope.ci_hi)}};
    if (!report.xgrid.empty()) {
        nlohmann::json xs = nlohmann::json::array();
        for (double x : report.xgrid) xs.push_back(jnum(x));
        j["xgrid"] = std::move(xs);
        nlohmann::json err = nlohmann::json::array();
        for (const auto& row : report.pointwise_median_err) {
            nlohmann::json jr = nlohmann::json::array();
            for (double v : row) jr.push_back(jnum(v));
            err.push_back(std::move(jr));
        }
        j["median_abs_err"] = std::move(err);
    }
    return j.dump(2) + "\n";
}

std::string records_to_csv(const std::vector<RepRecord>& records) {
    std::string out = "rep,n,loss,covered,goodevent\n";
    for (const RepRecord& r : records) {
        out += std::to_string(r.rep);
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += fmt_double(r.loss);
        out += ',';
        out += r.covered ? '1' : '0';
        out += ',';
        out += r.goodevent ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace scoreband
