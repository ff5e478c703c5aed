#ifndef SCOREBAND_BAND_HPP
#define SCOREBAND_BAND_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "scoreband/sample.hpp"

namespace scoreband {

// Band tolerance eps = 2 log(n^2/delta) / (9 n). Requires n >= 3 and
// delta in (0,1). The companion scale c = (1 + 4 eps)(1 - 2/n) lives in
// concentration.hpp as ci_scale.
double epsilon_band(std::size_t n, double delta);

struct ScaleBand {
    double lo;  // may be -inf
    double hi;  // may be +inf
};

// Minimum-magnitude element of [lo, hi]: lo when lo > 0, hi when hi < 0,
// else 0. A crossed pair (lo > hi) takes the endpoint of smaller magnitude,
// ties preferring hi; the result is always finite for lo < +inf, hi > -inf.
double project_zero(double lo, double hi);

// Per-bandwidth confidence interval for the smoothed score psi_h(z), from
// the triangular kde, its derivative, and the window mass at (z, h); lo <= hi
// always, and an empty data window yields (-inf, +inf).
ScaleBand band_at_scale(const Sample& sample, double delta, double h, double z);

struct GridSpec {
    std::vector<double> bandwidths;   // strictly decreasing, all > 0
    std::vector<double> locations;    // strictly increasing
    std::vector<double> eval_points;  // strictly increasing output grid
};

// Default grid: dyadic bandwidths h_max * 2^-j for j = 0..levels, truncated
// at h_min = max(range / 2^levels, smallest positive data gap); locations are
// the eval points shifted by each +-h, clipped to the data range extended by
// h_max and thinned evenly to at most 4096 points; eval grid is eval_count
// equispaced points spanning the data. Zero levels / h_max / eval_count pick
// the defaults (ceil(log2 n) + 4, the data range, 201).
GridSpec default_grid(const Sample& sample, std::size_t levels = 0,
                      double h_max = 0.0, std::size_t eval_count = 0);

// Same bandwidth ladder and location rule, but with caller-chosen eval
// points (finite, strictly increasing, non-empty); eval points may lie
// outside the data range, where the band degenerates to +-inf sides.
GridSpec custom_grid(const Sample& sample, std::vector<double> eval_points,
                     std::size_t levels = 0, double h_max = 0.0);

// Fully explicit variant: the caller supplies the bandwidth ladder (finite,
// strictly decreasing, positive) as well as the eval points; locations are
// derived by the same shift-clip-thin rule with h_max = bandwidths.front().
GridSpec explicit_grid(const Sample& sample, std::vector<double> eval_points,
                       std::vector<double> bandwidths);

struct BandCurve {
    std::vector<double> x;         // eval grid
    std::vector<double> lower;     // may contain -inf, never +inf
    std::vector<double> upper;     // may contain +inf, never -inf
    std::vector<double> estimate;  // always finite
    std::size_t n = 0;
    double delta = 0.0;
    std::uint64_t seed = 0;  // provenance when data was synthesized; else 0
    std::uint64_t data_fingerprint = 0;
    std::size_t levels = 0;  // J: bandwidths run h_max * 2^0 .. 2^-J
    double h_max = 0.0;
    double h_min = 0.0;
    std::size_t crossings = 0;  // eval points where lower > upper
};

// Aggregates band_at_scale over the grid: at each eval point x0 the upper
// bound is the minimum of per-scale uppers over {(z,h): x0 - z >= h} and the
// lower bound the maximum of per-scale lowers over {(z,h): z - x0 >= h}
// (empty sets give +inf / -inf). The estimate projects 0 onto [lower, upper];
// crossed intervals take the endpoint of smaller magnitude (ties pick upper)
// and are counted in crossings.
BandCurve multiscale_band(const Sample& sample, double delta,
                          const GridSpec& grid);

struct BandPoint {
    double lo;
    double hi;
    double est;
};

// Left-constant step interpolation on the eval grid, which preserves the
// monotone shape of all three curves. Throws OutOfGrid outside [x0, xN].
BandPoint band_eval(const BandCurve& curve, double x);

// The estimate as a total function: the band_eval step inside the grid,
// constant extension at the edge values outside it. This is the step curve
// the loss integral assumes beyond the data range.
double band_estimate_at(const BandCurve& curve, double x);

// CSV with header x,lower,upper,estimate; infinities as +inf / -inf; doubles
// in shortest round-trip form.
std::string band_to_csv(const BandCurve& curve);
BandCurve band_from_csv(const std::string& text);

// JSON mirror with metadata {n, delta, seed, grid: {J, h_max, h_min},
// crossings}; infinite entries are encoded as the same string literals.
std::string band_to_json(const BandCurve& curve);

}  // namespace scoreband

#endif
