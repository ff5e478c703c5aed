#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "scoreband/densities.hpp"
#include "scoreband/errors.hpp"
#include "scoreband/loss.hpp"
#include "scoreband/rng.hpp"

using namespace scoreband;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ScoreCurve truth_curve(const ModelPtr& m) {
    return [m](double x) { return m->score(x); };
}

ScoreCurve zero_curve() {
    return [](double) { return 0.0; };
}

}  // namespace

TEST_CASE("the loss of the truth vanishes when tails are score-flat") {
    // Laplace and flat-top scores are constant in both tails, so the
    // constant extension beyond the u-range is exact and the loss is zero.
    for (const ModelPtr& m :
         {make_laplace(1.0), make_laplace(2.0),
          make_flattened_laplace(std::sqrt(2.0), 0.0)}) {
        LossReport rep = l2_loss(truth_curve(m), {}, *m);
        // The three beyond-range terms cancel exactly up to rounding, so the
        // result may sit a few ulps on either side of zero.
        CHECK(std::fabs(rep.total) <= 1e-15);
    }
}

TEST_CASE("the loss of the truth is tiny for light gaussian tails") {
    auto g = make_gaussian();
    LossReport rep = l2_loss(truth_curve(g), {}, *g);
    // Only the constant-extension residual beyond u = 1e-4 remains.
    CHECK(rep.total > 0.0);
    CHECK(rep.total <= 1e-4);
    // Widening the quadrature range shrinks that residual.
    LossOptions wide;
    wide.u_lo = 1e-6;
    wide.u_hi = 1.0 - 1e-6;
    CHECK(l2_loss(truth_curve(g), {}, *g, wide).total < rep.total);
}

TEST_CASE("zero-estimator loss equals the fisher information") {
    struct Case {
        ModelPtr model;
        double expected;
    };
    const Case cases[] = {
        {make_laplace(1.0), 1.0},
        {make_laplace(2.0), 4.0},
        {make_flattened_laplace(std::sqrt(2.0), 0.0), 1.0},
        {make_flattened_laplace(2.0, 0.0), 1.0},
        {make_gaussian(), 1.0},
    };
    for (const Case& c : cases) {
        LossReport rep = l2_loss(zero_curve(), {}, *c.model);
        CHECK(std::fabs(rep.total - c.expected) <= 1e-6);
        CHECK(std::fabs(rep.total - fisher_information(*c.model)) <= 1e-6);
    }
    // Quadrature-only families agree with their independent fisher values.
    for (const ModelPtr& m : {make_gumbel(), make_subbotin(1.5), make_beta(3.0, 3.0)}) {
        CHECK(std::fabs(l2_loss(zero_curve(), {}, *m).total -
                        fisher_information(*m)) <= 1e-6);
    }
}

TEST_CASE("divergent score tails give an infinite loss") {
    CHECK(l2_loss(zero_curve(), {}, *make_beta(2.0, 2.0)).total == kInf);
}

TEST_CASE("loss report bookkeeping") {
    auto g = make_gaussian();
    ScoreCurve half = [](double x) { return -0.5 * x; };
    LossReport rep = l2_loss(half, {}, *g);
    CHECK(rep.total >= 0.0);
    CHECK(std::fabs(rep.bulk + rep.tail - rep.total) <=
          1e-12 * (1.0 + rep.total));
    CHECK(rep.quad_error <= 1e-6);
    CHECK(!rep.table.empty());
    for (const LossRow& row : rep.table) {
        CHECK(row.u >= 1e-4);
        CHECK(row.u <= 1.0 - 1e-4);
        CHECK(row.x == g->quantile(row.u));
        double d = row.psi_hat - row.psi_true;
        CHECK(row.integrand == d * d);
    }
    CHECK_THROWS_AS(l2_loss(half, {}, *g, LossOptions{0.0, 1e-4, 0.9999, 0.01}),
                    DomainError);
    CHECK_THROWS_AS(l2_loss(half, {}, *g, LossOptions{1e-9, 0.5, 0.4, 0.01}),
                    DomainError);
}

TEST_CASE("estimate knots join the quadrature panels") {
    auto lap = make_laplace(1.0);
    // A step at x = 0.3 integrates exactly once its knot splits the panels.
    ScoreCurve step = [](double x) { return x < 0.3 ? 0.7 : -1.3; };
    LossReport rep = l2_loss(step, {0.3}, *lap);
    double uk = lap->cdf(0.3);
    bool found = false;
    for (const LossRow& row : rep.table)
        if (row.u == uk) found = true;
    CHECK(found);
    // Piecewise-constant difference, integrable in closed form:
    // (0.7-1)^2 * u(0.3) on the positive-score side, (0.7+1)^2 and
    // (-1.3+1)^2 on the rest.
    double expected = 0.09 * 0.5 + 2.89 * (uk - 0.5) + 0.09 * (1.0 - uk);
    CHECK(std::fabs(rep.total - expected) <= 1e-8);
}

TEST_CASE("monte carlo draws reproduce the quadrature loss") {
    struct Arm {
        ModelPtr model;
        double knot, left, right;
    };
    const Arm arms[] = {
        {make_gaussian(), 0.0, 1.0, -1.0},
        {make_laplace(1.0), 0.0, 0.8, -0.8},
        {make_flattened_laplace(std::sqrt(2.0), 0.5), 0.2, 1.0, -1.0},
        {make_subbotin(1.5), -0.1, 0.9, -0.9},
        {make_gumbel(), 0.3, 0.5, -0.8},
        {make_beta(5.0, 5.0), 0.45, 3.0, -3.0},
    };
    const int reps = 1000000;
    Rng rng(20260817);
    for (const Arm& arm : arms) {
        const double knot = arm.knot, left = arm.left, right = arm.right;
        ScoreCurve psi = [knot, left, right](double x) {
            return x < knot ? left : right;
        };
        double total = l2_loss(psi, {knot}, *arm.model).total;
        double mean = 0.0, m2 = 0.0;
        for (int r = 0; r < reps; ++r) {
            double x = arm.model->quantile(rng.next_uniform());
            double d = psi(x) - arm.model->score(x);
            double y = d * d;
            mean += y;
            m2 += y * y;
        }
        mean /= reps;
        m2 /= reps;
        double se = std::sqrt(std::max(m2 - mean * mean, 0.0) / reps);
        CHECK(std::fabs(total - mean) <= 3.0 * se + 1e-9);
    }
}

TEST_CASE("loss scales by c^2 under matched rescaling") {
    // Laplace(1) with a step estimate, against the same problem shrunk by
    // c = 2: data scale 1/c, score scale c. Scaling by a power of two
    // commutes with rounding at every quadrature node, so the match is exact.
    auto base_model = make_laplace(1.0);
    auto scaled_model = make_laplace(2.0);
    ScoreCurve psi = [](double x) { return x < 0.3 ? 0.7 : -1.3; };
    ScoreCurve psi_scaled = [&psi](double y) { return 2.0 * psi(2.0 * y); };
    double base = l2_loss(psi, {0.3}, *base_model).total;
    double scaled = l2_loss(psi_scaled, {0.15}, *scaled_model).total;
    CHECK(scaled == 4.0 * base);
}

TEST_CASE("pointwise errors flag infinite truth and aggregate the rest") {
    auto lap = make_laplace(1.0);
    PointwiseTable zero_err =
        pointwise_error(truth_curve(lap), *lap, {-1.0, -0.3, 0.4, 2.0});
    CHECK(zero_err.finite_count == 4);
    CHECK(zero_err.max_finite == 0.0);
    CHECK(zero_err.mean_finite == 0.0);

    PointwiseTable unit =
        pointwise_error(zero_curve(), *lap, {0.1, 0.5, 1.0, 3.0});
    for (const PointwiseRow& row : unit.rows) CHECK(row.err == 1.0);
    CHECK(unit.max_finite == 1.0);
    CHECK(unit.mean_finite == 1.0);

    auto g = make_gaussian();
    ScoreCurve shifted = [](double x) { return -x + 0.1; };
    PointwiseTable off = pointwise_error(shifted, *g, {-2.0, 0.0, 1.5});
    for (const PointwiseRow& row : off.rows)
        CHECK(std::fabs(row.err - 0.1) <= 1e-15);

    auto b = make_beta(3.0, 3.0);
    PointwiseTable edge = pointwise_error(zero_curve(), *b, {0.0, 0.5, 1.0, 2.0});
    CHECK(edge.rows[0].truth_infinite);
    CHECK(edge.rows[0].err == kInf);
    CHECK(edge.rows[2].truth_infinite);
    CHECK(edge.rows[3].truth_infinite);
    CHECK(edge.finite_count == 1);
    CHECK(edge.max_finite == 0.0);  // score(0.5) = 0 and the estimate is 0
}
