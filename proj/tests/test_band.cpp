#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "scoreband/band.hpp"
#include "scoreband/densities.hpp"
#include "scoreband/errors.hpp"
#include "scoreband/rng.hpp"
#include "scoreband/sample.hpp"

using namespace scoreband;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

bool close_rel(double a, double b, double rel) {
    return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

TEST_CASE("band tolerance epsilon") {
    // oracle: tests/oracles/concentration_oracle.py -> concentration_oracle.out
    CHECK(close_rel(epsilon_band(100, 0.05), 0.027124605878955941621, 1e-14));
    CHECK(close_rel(epsilon_band(1000, 0.05), 0.0037358317403373922439, 1e-14));
    for (std::size_t n = 3; n < 4000; n = n * 2 + 1)
        CHECK(epsilon_band(n + 1, 0.1) < epsilon_band(n, 0.1));
    CHECK(epsilon_band(100, 0.1) < epsilon_band(100, 0.01));
    CHECK_THROWS_AS(epsilon_band(2, 0.1), SampleTooSmall);
    CHECK_THROWS_AS(epsilon_band(100, 0.0), DomainError);
    CHECK_THROWS_AS(epsilon_band(100, 1.0), DomainError);
}

TEST_CASE("projection of zero onto an interval") {
    CHECK(project_zero(2.0, 5.0) == 2.0);
    CHECK(project_zero(-5.0, -2.0) == -2.0);
    CHECK(project_zero(-1.0, 3.0) == 0.0);
    CHECK(project_zero(0.0, 3.0) == 0.0);
    CHECK(project_zero(-kInf, 5.0) == 0.0);
    CHECK(project_zero(-kInf, -3.0) == -3.0);
    CHECK(project_zero(4.0, kInf) == 4.0);
    CHECK(project_zero(-kInf, kInf) == 0.0);
    // Crossed pairs pick the endpoint of smaller magnitude, ties the upper.
    CHECK(project_zero(3.0, -2.0) == -2.0);
    CHECK(project_zero(2.0, -3.0) == 2.0);
    CHECK(project_zero(2.0, -2.0) == -2.0);
}

TEST_CASE("single-scale band anchor: sparse window turns uninformative") {
    // oracle: tests/oracles/band_oracle.py -> band_oracle.out (dataset A)
    Sample s = build_sample({-1.0, 0.0, 0.5, 2.0});
    ScaleBand b = band_at_scale(s, 0.1, 1.0, 0.0);
    CHECK(b.lo == -kInf);
    CHECK(b.hi == kInf);
}

TEST_CASE("single-scale band anchor: wide window with mixed slope sign") {
    // oracle: tests/oracles/band_oracle.py -> band_oracle.out (dataset B)
    std::vector<double> xs;
    for (int i = 0; i < 50; ++i) xs.push_back(-2.0 + 0.08 * i);
    ScaleBand b = band_at_scale(build_sample(xs), 0.05, 3.0, 0.0);
    CHECK(close_rel(b.lo, -18.617427673416816093, 5e-13));
    CHECK(close_rel(b.hi, 17.676621817487569351, 5e-13));
}

TEST_CASE("single-scale band anchor: informative sign-definite window") {
    // oracle: tests/oracles/band_oracle.py -> band_oracle.out (dataset C)
    std::vector<double> xs;
    for (int i = 0; i < 120; ++i) xs.push_back(-0.6 + 0.005 * i);
    for (int i = 0; i < 80; ++i) xs.push_back(5.0 + 0.05 * i);
    ScaleBand b = band_at_scale(build_sample(xs), 0.3, 1.0, 0.0);
    CHECK(close_rel(b.lo, -6.7685601644290770748, 5e-13));
    CHECK(close_rel(b.hi, -0.049981521532546923047, 5e-13));
}

TEST_CASE("single-scale band: empty window and input validation") {
    Sample s = build_sample({10.0, 20.0, 30.0});
    ScaleBand b = band_at_scale(s, 0.1, 1.0, 0.0);
    CHECK(b.lo == -kInf);
    CHECK(b.hi == kInf);
    CHECK_THROWS_AS(band_at_scale(s, 0.1, 0.0, 0.0), NonPositiveBandwidth);
    CHECK_THROWS_AS(band_at_scale(build_sample({1.0, 2.0}), 0.1, 1.0, 0.0),
                    SampleTooSmall);
}

TEST_CASE("single-scale band is ordered on random inputs") {
    Rng rng(17);
    std::vector<double> xs;
    for (int i = 0; i < 80; ++i) xs.push_back(4.0 * rng.next_uniform() - 2.0);
    Sample s = build_sample(xs);
    for (int t = 0; t < 200; ++t) {
        double h = 0.05 + 2.5 * rng.next_uniform();
        double z = 6.0 * rng.next_uniform() - 3.0;
        ScaleBand b = band_at_scale(s, 0.1, h, z);
        CHECK(b.lo <= b.hi);
    }
}

TEST_CASE("default grid shape") {
    auto g = make_gaussian();
    Sample s = build_sample(sample(*g, 200, 5));
    GridSpec grid = default_grid(s);
    REQUIRE(!grid.bandwidths.empty());
    CHECK(grid.bandwidths.front() == s.range());
    for (std::size_t j = 1; j < grid.bandwidths.size(); ++j)
        CHECK(grid.bandwidths[j] == 0.5 * grid.bandwidths[j - 1]);
    // Default level count is ceil(log2 n) + 4, unless the gap floor stops it.
    std::size_t max_levels =
        static_cast<std::size_t>(std::ceil(std::log2(200.0))) + 4;
    CHECK(grid.bandwidths.size() <= max_levels + 1);
    // The ladder stops at the first rung at or below the h_min floor, so the
    // last bandwidth sits within one halving of it.
    double h_min = std::max(s.range() / std::pow(2.0, (double)max_levels),
                            s.smallest_gap());
    CHECK(grid.bandwidths.back() > 0.5 * h_min * (1.0 - 1e-12));

    CHECK(grid.eval_points.size() == 201);
    CHECK(grid.eval_points.front() == s.min());
    CHECK(grid.eval_points.back() == s.max());
    CHECK(std::is_sorted(grid.eval_points.begin(), grid.eval_points.end()));

    CHECK(grid.locations.size() <= 4096);
    CHECK(std::is_sorted(grid.locations.begin(), grid.locations.end()));
    CHECK(grid.locations.front() >= s.min() - grid.bandwidths.front() - 1e-12);
    CHECK(grid.locations.back() <= s.max() + grid.bandwidths.front() + 1e-12);
}

TEST_CASE("grid builders validate their inputs") {
    Sample s = build_sample({0.0, 0.5, 1.0, 2.0});
    CHECK_THROWS_AS(custom_grid(s, {}), DomainError);
    CHECK_THROWS_AS(custom_grid(s, {0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(custom_grid(s, {1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(custom_grid(s, {0.0, std::nan("")}), DomainError);
    CHECK_THROWS_AS(explicit_grid(s, {0.0, 1.0}, {}), DomainError);
    CHECK_THROWS_AS(explicit_grid(s, {0.0, 1.0}, {0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(explicit_grid(s, {0.0, 1.0}, {1.0, -0.5}), DomainError);
    CHECK_NOTHROW(explicit_grid(s, {0.0, 1.0}, {1.0, 0.25}));
}

TEST_CASE("multiscale band curves are monotone with projected estimates") {
    auto g = make_gaussian();
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        Sample s = build_sample(sample(*g, 60, seed));
        BandCurve band = multiscale_band(s, 0.1, default_grid(s));
        REQUIRE(band.x.size() == band.lower.size());
        REQUIRE(band.x.size() == band.upper.size());
        REQUIRE(band.x.size() == band.estimate.size());
        std::size_t crossings = 0;
        for (std::size_t i = 0; i < band.x.size(); ++i) {
            CHECK(band.lower[i] < kInf);
            CHECK(band.upper[i] > -kInf);
            CHECK(std::isfinite(band.estimate[i]));
            CHECK(band.estimate[i] == project_zero(band.lower[i], band.upper[i]));
            if (band.lower[i] > band.upper[i]) ++crossings;
            if (i > 0) {
                CHECK(band.lower[i] <= band.lower[i - 1]);
                CHECK(band.upper[i] <= band.upper[i - 1]);
                CHECK(band.estimate[i] <= band.estimate[i - 1]);
            }
        }
        CHECK(band.crossings == crossings);
        CHECK(band.n == 60);
        CHECK(band.delta == 0.1);
        CHECK(band.data_fingerprint == s.fingerprint());
    }
}

TEST_CASE("refining the grid never widens the band") {
    auto g = make_gaussian();
    Rng extra_rng(777);
    for (std::uint64_t seed : {11ULL, 22ULL, 33ULL, 44ULL, 55ULL}) {
        Sample s = build_sample(sample(*g, 80, seed));
        GridSpec coarse = default_grid(s, 6);
        BandCurve base = multiscale_band(s, 0.1, coarse);

        GridSpec fine = coarse;
        fine.bandwidths.push_back(fine.bandwidths.back() * 0.5);
        for (int k = 0; k < 25; ++k) {
            double z = s.min() - 0.5 + (s.range() + 1.0) * extra_rng.next_uniform();
            fine.locations.push_back(z);
        }
        std::sort(fine.locations.begin(), fine.locations.end());
        fine.locations.erase(
            std::unique(fine.locations.begin(), fine.locations.end()),
            fine.locations.end());

        BandCurve refined = multiscale_band(s, 0.1, fine);
        REQUIRE(refined.x == base.x);
        for (std::size_t i = 0; i < base.x.size(); ++i) {
            CHECK(refined.upper[i] <= base.upper[i]);
            CHECK(refined.lower[i] >= base.lower[i]);
        }
    }
}

TEST_CASE("the construction is exactly scale equivariant") {
    auto g = make_gaussian();
    Sample s1 = build_sample(sample(*g, 70, 123));
    GridSpec g1 = default_grid(s1);
    BandCurve b1 = multiscale_band(s1, 0.1, g1);

    // Doubling data and grids halves every score bound, bit for bit: each
    // formula in the construction is scale covariant and scaling by a power
    // of two commutes with rounding.
    const double c = 2.0;
    std::vector<double> scaled;
    for (double x : s1.sorted()) scaled.push_back(c * x);
    Sample s2 = build_sample(scaled);
    GridSpec g2;
    for (double h : g1.bandwidths) g2.bandwidths.push_back(c * h);
    for (double z : g1.locations) g2.locations.push_back(c * z);
    for (double x : g1.eval_points) g2.eval_points.push_back(c * x);
    BandCurve b2 = multiscale_band(s2, 0.1, g2);

    REQUIRE(b2.x.size() == b1.x.size());
    for (std::size_t i = 0; i < b1.x.size(); ++i) {
        CHECK(b2.x[i] == c * b1.x[i]);
        CHECK(b2.estimate[i] == b1.estimate[i] / c);
        CHECK(b2.lower[i] == b1.lower[i] / c);
        CHECK(b2.upper[i] == b1.upper[i] / c);
    }
}

TEST_CASE("band evaluation follows the left-constant step rule") {
    auto g = make_gaussian();
    Sample s = build_sample(sample(*g, 90, 8));
    BandCurve band = multiscale_band(s, 0.1, default_grid(s));

    for (std::size_t i = 0; i < band.x.size(); i += 17) {
        BandPoint p = band_eval(band, band.x[i]);
        CHECK(p.lo == band.lower[i]);
        CHECK(p.hi == band.upper[i]);
        CHECK(p.est == band.estimate[i]);
    }
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        double x1 = band.x.front() + (band.x.back() - band.x.front()) * rng.next_uniform();
        double x2 = band.x.front() + (band.x.back() - band.x.front()) * rng.next_uniform();
        if (x1 > x2) std::swap(x1, x2);
        CHECK(band_eval(band, x1).est >= band_eval(band, x2).est);
    }
    // Between grid points the upper bound dominates its right neighbor.
    for (std::size_t i = 0; i + 1 < band.x.size(); i += 23) {
        double mid = 0.5 * (band.x[i] + band.x[i + 1]);
        if (mid <= band.x[i] || mid >= band.x[i + 1]) continue;
        CHECK(band_eval(band, mid).hi >= band.upper[i + 1]);
    }
    CHECK_THROWS_AS(band_eval(band, band.x.front() - 1.0), OutOfGrid);
    CHECK_THROWS_AS(band_eval(band, band.x.back() + 1.0), OutOfGrid);

    // The total-function spelling extends the edge values as constants.
    CHECK(band_estimate_at(band, band.x.front() - 5.0) == band.estimate.front());
    CHECK(band_estimate_at(band, band.x.back() + 5.0) == band.estimate.back());
    CHECK(band_estimate_at(band, band.x[4]) == band.estimate[4]);
}

TEST_CASE("eval points beyond both window reaches get an uninformative band") {
    Sample s = build_sample({0.0, 0.1, 0.4, 0.7, 1.0});
    double far = 50.0;
    GridSpec grid = custom_grid(s, {-far, 0.5, far});
    BandCurve band = multiscale_band(s, 0.2, grid);
    CHECK(band.upper[0] == kInf);    // nothing qualifies left of the data
    CHECK(band.lower[2] == -kInf);   // nothing qualifies right of the data
    CHECK(std::isfinite(band.estimate[1]));
}

TEST_CASE("band serialization round-trips bit-exactly") {
    auto g = make_gaussian();
    Sample s = build_sample(sample(*g, 20, 77));
    BandCurve band = multiscale_band(s, 0.1, default_grid(s, 0, 0.0, 41));
    band.seed = 77;

    std::string csv = band_to_csv(band);
    BandCurve back = band_from_csv(csv);
    REQUIRE(back.x.size() == band.x.size());
    bool has_inf = false;
    for (std::size_t i = 0; i < band.x.size(); ++i) {
        CHECK(back.x[i] == band.x[i]);
        CHECK(back.lower[i] == band.lower[i]);
        CHECK(back.upper[i] == band.upper[i]);
        CHECK(back.estimate[i] == band.estimate[i]);
        if (std::isinf(band.lower[i]) || std::isinf(band.upper[i])) has_inf = true;
    }
    CHECK(has_inf);  // a 20-point sample leaves uninformative stretches

    nlohmann::json j = nlohmann::json::parse(band_to_json(band));
    CHECK(j["n"] == 20);
    CHECK(j["delta"] == 0.1);
    CHECK(j["seed"] == 77);
    CHECK(j["crossings"].is_number());
    CHECK(j["grid"]["J"].is_number());
    CHECK(j["grid"]["h_max"].is_number());
    CHECK(j["grid"]["h_min"].is_number());
    CHECK(j["x"].size() == band.x.size());
    bool saw_sentinel = false;
    for (const auto& v : j["lower"])
        if (v.is_string() && v.get<std::string>() == "-inf") saw_sentinel = true;
    CHECK(saw_sentinel);
}

TEST_CASE("malformed band csv is rejected with a line number") {
    std::string text = "x,lower,upper,estimate\n0,-inf,+inf,0\n1,bogus,2,0\n";
    try {
        band_from_csv(text);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}
