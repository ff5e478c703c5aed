#ifndef SCOREBAND_LOSS_HPP
#define SCOREBAND_LOSS_HPP

#include <functional>
#include <vector>

#include "scoreband/densities.hpp"

namespace scoreband {

// Scalar curve x -> psi_hat(x); must be finite on the evaluated range.
using ScoreCurve = std::function<double(double)>;

struct LossOptions {
    double tol = 1e-9;   // absolute quadrature target for the u-integral
    double u_lo = 1e-4;  // quadrature covers [u_lo, u_hi]; the remaining
    double u_hi = 1.0 - 1e-4;  // mass is handled analytically (see below)
    double tail_cut = 0.01;  // bulk/tail split point for the report
};

struct LossRow {
    double u;
    double x;          // F0^{-1}(u)
    double psi_hat;
    double psi_true;   // J'(u)
    double integrand;  // (psi_hat - psi_true)^2
};

struct LossReport {
    double total = 0.0;       // loss estimate including beyond-range terms
    double bulk = 0.0;        // integral over [tail_cut, 1 - tail_cut]
    double tail = 0.0;        // total - bulk (outside the cut)
    double beyond_range = 0.0;  // analytic part outside [u_lo, u_hi]
    double quad_error = 0.0;  // accumulated quadrature error estimate
    std::vector<LossRow> table;  // integrand samples at the panel knots
};

// Weighted squared score loss int_0^1 (psi_hat(F0^{-1}(u)) - J0'(u))^2 du.
// Quadrature runs over [u_lo, u_hi] with panels split at the model's knots,
// the report cut, and F0(x) for each supplied estimate knot. Outside u_range
// the estimate is extended as a constant at its edge values, making the
// beyond-range term exact for step curves (and for the zero estimator, where
// it reduces to the model's score_sq_tail). total is +inf when the model's
// tail integral diverges. Throws QuadratureNonconvergence on failure.
LossReport l2_loss(const ScoreCurve& psi_hat, const std::vector<double>& x_knots,
                   const DensityModel& model, const LossOptions& opts = {});

struct PointwiseRow {
    double x;
    double truth;     // score(x); may be +-inf at or beyond support ends
    double err;       // |psi_hat(x) - truth|; +inf when truth is infinite
    bool truth_infinite;
};

struct PointwiseTable {
    std::vector<PointwiseRow> rows;
    double max_finite = 0.0;   // aggregates over rows with finite truth
    double mean_finite = 0.0;
    std::size_t finite_count = 0;
};

// Absolute score error per grid point; infinite-truth points are flagged and
// excluded from the aggregates.
PointwiseTable pointwise_error(const ScoreCurve& psi_hat,
                               const DensityModel& model,
                               const std::vector<double>& xgrid);

}  // namespace scoreband

#endif
