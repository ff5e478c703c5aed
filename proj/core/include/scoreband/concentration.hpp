#ifndef SCOREBAND_CONCENTRATION_HPP
#define SCOREBAND_CONCENTRATION_HPP

#include <cstddef>

#include "scoreband/densities.hpp"
#include "scoreband/sample.hpp"

namespace scoreband {

// Bernoulli KL divergence kl(p, q) = p log(p/q) + (1-p) log((1-p)/(1-q))
// with exact boundary conventions: kl(0,q) = -log(1-q), kl(1,q) = -log q,
// kl(p,0) = +inf for p > 0, kl(p,1) = +inf for p < 1, kl(p,p) = 0.
// Throws DomainError outside [0,1]^2.
double kl(double p, double q);

// One-sided variant: kl(p, q) when p > q, else 0.
double kl_plus(double p, double q);

// Per-observation KL budget log(n^2/delta)/n; the good event compares the
// worst interval statistic against this. Requires n >= 1, delta in (0,1).
double kl_budget(std::size_t n, double delta);

// Scale factor c = (1 + 4*eps)(1 - 2/n) with eps the band epsilon; divides
// the interval CI numerator. Requires n >= 3.
double ci_scale(std::size_t n, double delta);

struct ProbInterval {
    double lo;
    double hi;
};

// Finite-sample confidence interval for P0(phi) given the empirical mean
// phat of the indicator phi, clipped to [0,1]; lo <= hi always.
// Throws SampleTooSmall for n < 3 and DomainError for bad phat or delta.
ProbInterval interval_ci(double phat, std::size_t n, double delta);

// q-interval containing every q with kl(p, q) < 9*eta/2:
// |q - ((1-2*eta)p + 3*eta)/(1+4*eta)| <= 3*sqrt(p(1-p)*eta + eta^2)/(1+4*eta).
// Not clipped to [0,1]. Requires p in [0,1] and eta > 0.
ProbInterval kl_quadratic_bracket(double p, double eta);

struct GoodEventReport {
    double max_stat;     // worst pair-interval statistic (0 for n <= 2)
    double budget;       // kl_budget(n, delta)
    bool holds;          // max_stat < budget (always true for n <= 2)
    double worst_x0;     // endpoints of the maximizing interval
    double worst_x1;
    bool worst_is_complement;  // true: R \ (x0, x1); false: [x0, x1]
};

// Evaluates, over all data-pair intervals [X_i, X_j] and complements
// R \ (X_i, X_j), the statistic kl_plus(Pn(I), (1 - 2/n) P0(I) + 2/n).
// The event holds when the maximum stays below kl_budget(n, delta); it
// certifies the uniform-over-intervals concentration event.
GoodEventReport goodevent_stat(const Sample& sample, const DensityModel& model,
                               double delta);

// Statistic for one arbitrary closed interval [a, b]: the inner minimum over
// t in [0,1] of kl_plus(Pn, (1-2/n) P0 + 2t/n), via the closed-form
// minimizer t* = clamp(n (Pn - (1-2/n) P0) / 2, 0, 1).
double goodevent_interval_stat(const Sample& sample, const DensityModel& model,
                               double a, double b);

}  // namespace scoreband

#endif
