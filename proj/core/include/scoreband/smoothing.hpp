#ifndef SCOREBAND_SMOOTHING_HPP
#define SCOREBAND_SMOOTHING_HPP

#include "scoreband/densities.hpp"

namespace scoreband {

// Population-level triangular smoothing of a model at bandwidth h.
struct SmoothedPoint {
    double density;  // f_h(x) = (1/h^2) int (h - |x-y|)_+ f0(y) dy
    double deriv;    // f_h'(x) = (F0(x+h) + F0(x-h) - 2 F0(x)) / h^2
    double score;    // deriv/density; +inf left of the smoothed support,
                     // -inf right of it (density = 0 there)
};

// Evaluates the smoothed density, its derivative, and their ratio. The
// derivative uses the exact cdf second difference (survival form on the
// right half for tail accuracy); the density integrates the kernel against
// the pdf with panels split at x and the model's kinks. The smoothed score
// at x-h and x+h brackets the true score at x for every log-concave model.
SmoothedPoint smoothed_oracle_eval(const DensityModel& model, double h, double x);

}  // namespace scoreband

#endif
