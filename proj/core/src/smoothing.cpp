#include "scoreband/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scoreband/errors.hpp"
#include "scoreband/quadrature.hpp"

namespace scoreband {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double smoothed_density(const DensityModel& model, double h, double x) {
    // Support never extends past the cdf mass, so clip the window first;
    // an empty window means the smoothed density is exactly zero.
    Support sup = model.support();
    double lo = std::max(x - h, sup.lo);
    double hi = std::min(x + h, sup.hi);
    if (!(lo < hi)) return 0.0;
    std::vector<double> knots{lo, hi};
    if (x > lo && x < hi) knots.push_back(x);
    for (double k : model.x_knots())
        if (k > lo && k < hi) knots.push_back(k);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    auto f = [&](double y) { return (h - std::fabs(y - x)) * model.pdf(y); };
    QuadResult r = integrate_panels(f, knots, 1e-14, false, false);
    return std::max(r.value, 0.0) / (h * h);
}

double smoothed_deriv(const DensityModel& model, double h, double x) {
    // Second difference of the cdf; switch to the survival form past the
    // median so both tails keep relative precision.
    if (model.cdf(x) <= 0.5) {
        return (model.cdf(x + h) + model.cdf(x - h) - 2.0 * model.cdf(x)) / (h * h);
    }
    return -(model.sf(x + h) + model.sf(x - h) - 2.0 * model.sf(x)) / (h * h);
}

}  // namespace

SmoothedPoint smoothed_oracle_eval(const DensityModel& model, double h, double x) {
    if (!std::isfinite(h) || h <= 0.0)
        throw NonPositiveBandwidth("bandwidth must be positive and finite");
    if (!std::isfinite(x)) throw NonFiniteInput("evaluation point is not finite");
    SmoothedPoint p{};
    p.density = smoothed_density(model, h, x);
    p.deriv = smoothed_deriv(model, h, x);
    if (p.density > 0.0) {
        p.score = p.deriv / p.density;
    } else {
        p.deriv = 0.0;
        p.score = x <= model.support().lo ? kInf : -kInf;
    }
    return p;
}

}  // namespace scoreband
