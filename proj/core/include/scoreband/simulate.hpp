#ifndef SCOREBAND_SIMULATE_HPP
#define SCOREBAND_SIMULATE_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scoreband/densities.hpp"

namespace scoreband {

enum class DeltaPolicy { fixed, one_over_n };

struct ExperimentConfig {
    ModelPtr model;
    std::vector<std::size_t> sizes;  // one Monte Carlo cell per n, each >= 3
    DeltaPolicy delta_policy = DeltaPolicy::fixed;
    double delta = 0.1;       // fixed-policy level, must lie in (0,1)
    std::size_t reps = 1;     // >= 1
    std::uint64_t seed = 0;   // master seed; rep streams split from it
    std::size_t levels = 0;   // grid overrides; 0 keeps the defaults
    double h_max = 0.0;
    std::size_t eval_count = 0;
    std::vector<double> bandwidths;  // explicit ladder; empty keeps dyadic
    std::size_t coverage_points = 101;  // quantile checkpoints, >= 2
    double coverage_u_lo = 0.01;        // checkpoint range in u
    double coverage_u_hi = 0.99;
    std::vector<double> xgrid;      // pointwise-error evaluation sites
    bool check_refinement = false;  // per-rep nested-grid narrowing assertion
};

// Throws DomainError unless the config identifies a runnable experiment:
// model present, sizes non-empty with every n >= 3, reps >= 1, delta in
// (0,1) under the fixed policy (delta = 1 is degenerate and rejected), and
// 0 < coverage_u_lo < coverage_u_hi < 1 with at least 2 checkpoints.
void validate_config(const ExperimentConfig& config);

struct RepRecord {
    std::size_t rep = 0;
    std::size_t n = 0;
    double loss = 0.0;  // l2 score loss of the rep's estimate; may be +inf
    bool covered = false;
    bool goodevent = false;
};

struct CellSummary {
    std::size_t n = 0;
    double delta = 0.0;        // level actually used for this cell
    double coverage = 0.0;     // fraction of reps covered at all checkpoints
    double coverage_se = 0.0;  // binomial Monte Carlo standard error
    double goodevent_rate = 0.0;
    double median_loss = 0.0;
    double mean_loss = 0.0;  // +inf (with loss_se = +inf) if any rep diverged
    double loss_se = 0.0;
};

struct SlopeFit {
    double slope = 0.0;  // least squares on (log n, log median loss)
    double intercept = 0.0;
    double ci_lo = 0.0;  // bootstrap percentile interval for the slope
    double ci_hi = 0.0;
};

struct ExperimentReport {
    std::string kind;  // coverage | rates | goodevent | pointwise
    std::string model_name;
    std::map<std::string, double> model_params;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    std::string delta_policy;  // "fixed" | "1/n"
    double delta = 0.0;        // fixed-policy echo; 0 under 1/n
    std::size_t coverage_points = 0;
    double coverage_u_lo = 0.0;  // checkpoint range echo
    double coverage_u_hi = 0.0;
    std::size_t grid_levels = 0;  // grid override echoes; 0 means default
    double grid_h_max = 0.0;
    std::size_t grid_eval_count = 0;
    std::vector<CellSummary> cells;  // one per n, in config order
    std::vector<RepRecord> records;  // sorted by (n-cell order, rep)
    bool has_slope = false;
    SlopeFit slope;
    std::vector<double> xgrid;  // pointwise echo; empty otherwise
    std::vector<std::vector<double>> pointwise_median_err;  // [cell][site]
    double wall_seconds = 0.0;  // measured; excluded from the JSON encoding
};

// Per rep: draw n points, build the multiscale band, and record the l2 loss
// of the estimate, whether the true score lay inside the band at every
// checkpoint, and whether the empirical good event held. Coverage runs place
// the band's eval grid exactly at the model quantiles of the checkpoint u's;
// the other runs use the default equispaced grid and check coverage there.
ExperimentReport run_coverage(const ExperimentConfig& config);

// Adds a least-squares slope of log median loss against log n with a
// bootstrap percentile interval. Requires >= 4 sizes spanning >= 2 octaves
// and positive finite median losses.
ExperimentReport run_rates(const ExperimentConfig& config);

// Same records; the headline summary is the per-cell good-event rate.
ExperimentReport run_goodevent(const ExperimentConfig& config);

// Adds the per-site median of |estimate(x) - score(x)| over reps for each
// x in config.xgrid (required non-empty, finite, strictly increasing).
ExperimentReport run_pointwise(const ExperimentConfig& config);

// Deterministic JSON encoding: depends only on the config and seed
// (wall_seconds is omitted); non-finite values appear as "+inf" / "-inf"
// string sentinels.
std::string report_to_json(const ExperimentReport& report);

// CSV of the per-rep records: header rep,n,loss,covered,goodevent, booleans
// as 0/1, doubles in shortest round-trip form.
std::string records_to_csv(const std::vector<RepRecord>& records);

}  // namespace scoreband

#endif
