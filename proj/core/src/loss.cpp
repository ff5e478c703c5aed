#include "scoreband/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scoreband/errors.hpp"
#include "scoreband/quadrature.hpp"

namespace scoreband {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact integral of (v - J')^2 over one tail under constant extension v:
// v^2 * mass -+ 2 v * J(edge) + score_sq_tail (J(0) = J(1) = 0 for every
// model with density vanishing at its support ends, which the zoo satisfies).
double beyond_range_term(const DensityModel& model, double v, double mass,
                         bool right_tail) {
    if (!std::isfinite(v))
        throw NonFiniteInput("estimate is not finite at the u-range edge");
    double edge_u = right_tail ? 1.0 - mass : mass;
    double sst = model.score_sq_tail(mass, right_tail);
    if (!std::isfinite(sst)) return kInf;
    double cross = 2.0 * v * model.dq(edge_u);
    return v * v * mass + (right_tail ? cross : -cross) + sst;
}

}  // namespace

LossReport l2_loss(const ScoreCurve& psi_hat, const std::vector<double>& x_knots,
                   const DensityModel& model, const LossOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("loss tolerance must be > 0");
    if (!(opts.u_lo > 0.0 && opts.u_lo < opts.u_hi && opts.u_hi < 1.0))
        throw DomainError("loss u-range must satisfy 0 < u_lo < u_hi < 1");
    double cut = std::clamp(opts.tail_cut, opts.u_lo, 0.5);

    // Panel knots: range ends, report cut, model kinks, estimate kinks.
    std::vector<double> knots{opts.u_lo, opts.u_hi};
    auto push = [&](double u) {
        if (u > opts.u_lo && u < opts.u_hi) knots.push_back(u);
    };
    push(cut);
    push(1.0 - cut);
    for (double u : model.u_knots()) push(u);
    for (double xk : x_knots) {
        if (!std::isfinite(xk)) throw NonFiniteInput("estimate knot is not finite");
        push(model.cdf(xk));
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    auto integrand = [&](double u) {
        double d = psi_hat(model.quantile(u)) - model.dq_slope(u);
        return d * d;
    };

    LossReport rep;
    double per_panel_tol = opts.tol / static_cast<double>(knots.size() - 1);
    auto integrate_panel = [&](double a, double b) {
        // The two rules fail in complementary ways.  Adaptive Gauss-Kronrod
        // isolates poles just outside the panel (score^2 ~ 1/u near a support
        // end) but its error estimate collapses when a score kink maps
        // through the quantile transform to a root-type endpoint cusp
        // (|x|^(beta-1) scores); tanh-sinh is built for endpoint cusps but
        // loses its analyticity strip to the nearby pole.  Try the first,
        // fall back to the second.
        try {
            return integrate_smooth(integrand, a, b, per_panel_tol);
        } catch (const QuadratureNonconvergence&) {
            return integrate_edge(integrand, a, b, per_panel_tol);
        }
    };
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        QuadResult r = integrate_panel(knots[i], knots[i + 1]);
        rep.quad_error += r.error;
        bool in_bulk = knots[i] >= cut && knots[i + 1] <= 1.0 - cut;
        if (in_bulk)
            rep.bulk += r.value;
        else
            rep.tail += r.value;
        rep.total += r.value;
    }

    double v_lo = psi_hat(model.quantile(opts.u_lo));
    double v_hi = psi_hat(model.quantile(opts.u_hi));
    double beyond = beyond_range_term(model, v_lo, opts.u_lo, false) +
                    beyond_range_term(model, v_hi, 1.0 - opts.u_hi, true);
    rep.beyond_range = beyond;
    rep.tail += beyond;
    rep.total += beyond;

    rep.table.reserve(knots.size());
    for (double u : knots) {
        LossRow row;
        row.u = u;
        row.x = model.quantile(u);
        row.psi_hat = psi_hat(row.x);
        row.psi_true = model.dq_slope(u);
        double d = row.psi_hat - row.psi_true;
        row.integrand = d * d;
        rep.table.push_back(row);
    }
    return rep;
}

PointwiseTable pointwise_error(const ScoreCurve& psi_hat,
                               const DensityModel& model,
                               const std::vector<double>& xgrid) {
    PointwiseTable out;
    out.rows.reserve(xgrid.size());
    double sum = 0.0;
    for (double x : xgrid) {
        if (!std::isfinite(x)) throw NonFiniteInput("grid point is not finite");
        PointwiseRow row;
        row.x = x;
        row.truth = model.score(x);
        row.truth_infinite = !std::isfinite(row.truth);
        row.err = row.truth_infinite ? kInf : std::fabs(psi_hat(x) - row.truth);
        if (!row.truth_infinite) {
            out.max_finite = std::max(out.max_finite, row.err);
            sum += row.err;
            ++out.finite_count;
        }
        out.rows.push_back(row);
    }
    if (out.finite_count > 0) out.mean_finite = sum / static_cast<double>(out.finite_count);
    return out;
}

}  // namespace scoreband
