#include "scoreband/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scoreband/errors.hpp"

namespace scoreband {

namespace {

void check_panel(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw NonFiniteInput("quadrature panel endpoint is not finite");
    if (!(a <= b)) throw DomainError("quadrature panel endpoints out of order");
}

void check_converged(const QuadResult& r, double tol, const char* rule) {
    // Error estimates are conservative; reject only a clear miss.
    double allowed = std::max(tol, 1e-12 * (1.0 + std::fabs(r.value)));
    if (!std::isfinite(r.value) || r.error > 100.0 * allowed)
        throw QuadratureNonconvergence(std::string(rule) +
                                       " quadrature failed to converge");
}

// Relative targets below ~1e-12 exceed what double-precision rules can
// certify; passing them through only drives adaptive refinement to max depth
// for no accuracy gain (callers that split a budget across many panels, such
// as loss evaluation on a dense estimate grid, hit this hard).
double floor_tol(double tol) { return std::max(tol, 1e-12); }

}  // namespace

QuadResult integrate_smooth(const std::function<double(double)>& f, double a,
                            double b, double tol) {
    check_panel(a, b);
    if (a == b) return {0.0, 0.0};
    tol = floor_tol(tol);
    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    QuadResult r{};
    r.value = gk::integrate(f, a, b, 14, tol, &r.error);
    check_converged(r, tol, "gauss-kronrod");
    return r;
}

QuadResult integrate_edge(const std::function<double(double)>& f, double a,
                          double b, double tol) {
    check_panel(a, b);
    if (a == b) return {0.0, 0.0};
    tol = floor_tol(tol);
    boost::math::quadrature::tanh_sinh<double> ts(12);
    QuadResult r{};
    double l1 = 0.0;
    try {
        r.value = ts.integrate(f, a, b, tol, &r.error, &l1);
    } catch (const std::exception& e) {
        throw QuadratureNonconvergence(std::string("tanh-sinh quadrature: ") +
                                       e.what());
    }
    // tanh_sinh reports relative error against the L1 norm.
    r.error = std::fabs(r.error) * std::max(l1, 1.0);
    check_converged(r, tol, "tanh-sinh");
    return r;
}

QuadResult integrate_panels(const std::function<double(double)>& f,
                            const std::vector<double>& knots, double tol,
                            bool singular_lo, bool singular_hi) {
    if (knots.size() < 2) throw DomainError("integrate_panels: need >= 2 knots");
    if (!std::is_sorted(knots.begin(), knots.end()))
        throw DomainError("integrate_panels: knots must be sorted");
    double per_panel = tol / static_cast<double>(knots.size() - 1);
    QuadResult total{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        bool edge = (i == 0 && singular_lo) ||
                    (i + 2 == knots.size() && singular_hi);
        QuadResult r = edge ? integrate_edge(f, knots[i], knots[i + 1], per_panel)
                            : integrate_smooth(f, knots[i], knots[i + 1], per_panel);
        total.value += r.value;
        total.error += r.error;
    }
    return total;
}

}  // namespace scoreband
