#include "scoreband/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scoreband/band.hpp"
#include "scoreband/errors.hpp"

namespace scoreband {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_unit(double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw DomainError(std::string(what) + " must lie in [0,1]");
}

void check_delta(double delta) {
    if (!std::isfinite(delta) || delta <= 0.0 || delta >= 1.0)
        throw DomainError("delta must lie in (0,1)");
}

// P0 of the closed interval [a, b]; evaluated from whichever tail keeps
// relative precision (the cdf difference cancels badly deep in the right tail).
double p0_closed(const DensityModel& model, double a, double b) {
    if (a > b) return 0.0;
    double v = model.cdf(a) > 0.5 ? model.sf(a) - model.sf(b)
                                  : model.cdf(b) - model.cdf(a);
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace

double kl(double p, double q) {
    check_unit(p, "kl argument p");
    check_unit(q, "kl argument q");
    if (p == q) return 0.0;
    if (p == 0.0) return -std::log1p(-q);  // +inf when q = 1
    if (p == 1.0) return -std::log(q);     // +inf when q = 0
    if (q == 0.0 || q == 1.0) return kInf;
    return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

double kl_plus(double p, double q) {
    check_unit(p, "kl argument p");
    check_unit(q, "kl argument q");
    return p > q ? kl(p, q) : 0.0;
}

double kl_budget(std::size_t n, double delta) {
    if (n < 1) throw SampleTooSmall("kl_budget requires n >= 1");
    check_delta(delta);
    double nn = static_cast<double>(n);
    return (2.0 * std::log(nn) - std::log(delta)) / nn;
}

double ci_scale(std::size_t n, double delta) {
    if (n < 3) throw SampleTooSmall("ci_scale requires n >= 3");
    double eps = epsilon_band(n, delta);
    return (1.0 + 4.0 * eps) * (1.0 - 2.0 / static_cast<double>(n));
}

ProbInterval interval_ci(double phat, std::size_t n, double delta) {
    if (n < 3) throw SampleTooSmall("interval_ci requires n >= 3");
    check_unit(phat, "phat");
    check_delta(delta);
    double eps = epsilon_band(n, delta);
    double c = ci_scale(n, delta);
    double root = std::sqrt(eps * phat * (1.0 - phat) + eps * eps);
    double base = (1.0 - 2.0 * eps) * phat + 3.0 * eps;
    double nm2 = static_cast<double>(n) - 2.0;
    double lo = (base - 3.0 * root) / c - 2.0 / nm2;
    double hi = (base + 3.0 * root) / c;
    return {std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0)};
}

ProbInterval kl_quadratic_bracket(double p, double eta) {
    check_unit(p, "bracket argument p");
    if (!std::isfinite(eta) || eta <= 0.0)
        throw DomainError("bracket width parameter eta must be > 0");
    double denom = 1.0 + 4.0 * eta;
    double center = ((1.0 - 2.0 * eta) * p + 3.0 * eta) / denom;
    double radius = 3.0 * std::sqrt(p * (1.0 - p) * eta + eta * eta) / denom;
    return {center - radius, center + radius};
}

GoodEventReport goodevent_stat(const Sample& sample, const DensityModel& model,
                               double delta) {
    check_delta(delta);
    std::size_t n = sample.size();
    GoodEventReport rep{0.0, 0.0, true, 0.0, 0.0, false};
    if (n <= 2) {
        // With two or fewer points the uniform-over-intervals event is
        // certain, so there is nothing to evaluate.
        rep.budget = kl_budget(std::max<std::size_t>(n, 1), delta);
        return rep;
    }
    rep.budget = kl_budget(n, delta);
    const auto& x = sample.sorted();
    double nn = static_cast<double>(n);
    double shrink = 1.0 - 2.0 / nn;
    double shift = 2.0 / nn;
    // One model evaluation per data point; the O(n^2) pair loop then works
    // off the cached tails (the cdf difference still switches to the survival
    // side deep in the right tail, matching p0_closed).
    std::vector<double> fx(n), sx(n);
    for (std::size_t i = 0; i < n; ++i) {
        fx[i] = model.cdf(x[i]);
        sx[i] = model.sf(x[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && x[i] == x[i - 1]) continue;  // duplicate left endpoint
        for (std::size_t j = i; j < n; ++j) {
            if (j > i && x[j] == x[j - 1]) continue;
            double pn = sample.interval_prob(x[i], x[j]);
            double p0 = std::clamp(
                fx[i] > 0.5 ? sx[i] - sx[j] : fx[j] - fx[i], 0.0, 1.0);
            double q = std::min(shrink * p0 + shift, 1.0);
            if (pn > q) {
                double stat = kl(pn, q);
                if (stat > rep.max_stat) {
                    rep.max_stat = stat;
                    rep.worst_x0 = x[i];
                    rep.worst_x1 = x[j];
                    rep.worst_is_complement = false;
                }
            }
            if (x[i] < x[j]) {
                double pnc = 1.0 - static_cast<double>(sample.count_open(x[i], x[j])) / nn;
                double p0c = std::clamp(fx[i] + sx[j], 0.0, 1.0);
                double qc = std::min(shrink * p0c + shift, 1.0);
                if (pnc > qc) {
                    double stat = kl(pnc, qc);
                    if (stat > rep.max_stat) {
                        rep.max_stat = stat;
                        rep.worst_x0 = x[i];
                        rep.worst_x1 = x[j];
                        rep.worst_is_complement = true;
                    }
                }
            }
        }
    }
    rep.holds = rep.max_stat < rep.budget;
    return rep;
}

double goodevent_interval_stat(const Sample& sample, const DensityModel& model,
                               double a, double b) {
    if (a > b) throw DomainError("interval endpoints out of order");
    std::size_t n = sample.size();
    if (n < 3) return 0.0;
    double nn = static_cast<double>(n);
    double pn = sample.interval_prob(a, b);
    double p0 = p0_closed(model, a, b);
    double base = (1.0 - 2.0 / nn) * p0;
    // kl(pn, .) is convex with minimum at pn, so the best t in [0,1] puts
    // base + 2t/n as close to pn as the range allows.
    double t = std::clamp(nn * (pn - base) / 2.0, 0.0, 1.0);
    double q = std::min(base + 2.0 * t / nn, 1.0);
    return kl_plus(pn, q);
}

}  // namespace scoreband
