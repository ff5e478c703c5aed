#ifndef SCOREBAND_QUADRATURE_HPP
#define SCOREBAND_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace scoreband {

struct QuadResult {
    double value;
    double error;  // estimated absolute error
};

// Adaptive Gauss-Kronrod on a finite panel with a smooth integrand.
// Throws QuadratureNonconvergence if the error estimate misses tol badly.
QuadResult integrate_smooth(const std::function<double(double)>& f, double a,
                            double b, double tol);

// tanh-sinh on a finite panel; tolerates integrable endpoint singularities
// (the integrand is never evaluated exactly at a or b).
QuadResult integrate_edge(const std::function<double(double)>& f, double a,
                          double b, double tol);

// Piecewise integral over consecutive panels [knots[i], knots[i+1]].
// knots must be finite, sorted, with at least two entries; the first and
// last panels use the edge rule when the corresponding singular flag is set.
// tol is the absolute error target for the total.
QuadResult integrate_panels(const std::function<double(double)>& f,
                            const std::vector<double>& knots, double tol,
                            bool singular_lo, bool singular_hi);

}  // namespace scoreband

#endif
