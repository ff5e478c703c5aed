#include "scoreband/band.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "scoreband/errors.hpp"
#include "scoreband/format.hpp"
#include "scoreband/parallel.hpp"

namespace scoreband {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_delta(double delta) {
    if (!std::isfinite(delta) || delta <= 0.0 || delta >= 1.0)
        throw DomainError("delta must lie in (0,1)");
}

}  // namespace

double project_zero(double lo, double hi) {
    if (lo > hi) return std::fabs(lo) < std::fabs(hi) ? lo : hi;
    if (lo > 0.0) return lo;
    if (hi < 0.0) return hi;
    return 0.0;
}

double epsilon_band(std::size_t n, double delta) {
    if (n < 3) throw SampleTooSmall("band requires n >= 3");
    check_delta(delta);
    double nn = static_cast<double>(n);
    return 2.0 * (2.0 * std::log(nn) - std::log(delta)) / (9.0 * nn);
}

ScaleBand band_at_scale(const Sample& sample, double delta, double h, double z) {
    std::size_t n = sample.size();
    if (n < 3) throw SampleTooSmall("band requires n >= 3");
    if (!std::isfinite(h) || h <= 0.0)
        throw NonPositiveBandwidth("bandwidth must be positive and finite");
    if (!std::isfinite(z)) throw NonFiniteInput("band location is not finite");
    check_delta(delta);

    double nn = static_cast<double>(n);
    double eps = epsilon_band(n, delta);
    double fhat = sample.kde_tri(h, z);
    double fprime = sample.kde_tri_deriv(h, z);
    double pwin = sample.interval_prob(z - h, z + h);

    double V = 3.0 * std::sqrt(eps * pwin + eps * eps) + (1.0 + 4.0 * eps) / nn;
    auto M = [&](double w) {
        return (1.0 - 2.0 * eps) * h * h * std::fabs(fprime) + 2.0 * w * V;
    };
    auto D = [&](double w) {
        return h * ((1.0 - 2.0 * eps) * h * fhat + w * V +
                    (3.0 - 4.0 / nn) * eps - 1.0 / nn);
    };
    double tau = fprime >= 0.0 ? 1.0 : -1.0;

    double Dm = D(-1.0), Mm = M(-1.0);
    auto psi = [&](double w) {
        if (Dm > 0.0 && Mm > 0.0) return tau * M(w * tau) / D(-w * tau);
        if (Dm > 0.0) return tau * M(w * tau) / Dm;
        return w * kInf;
    };
    ScaleBand band{psi(-1.0), psi(1.0)};
    return band;
}

GridSpec default_grid(const Sample& sample, std::size_t levels, double h_max,
                      std::size_t eval_count) {
    if (eval_count == 0) eval_count = 201;
    if (eval_count < 2) throw DomainError("eval grid needs at least 2 points");

    double lo = sample.min(), hi = sample.max();
    std::vector<double> eval(eval_count);
    for (std::size_t i = 0; i < eval_count; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(eval_count - 1);
        eval[i] = lo + t * (hi - lo);
    }
    eval.back() = hi;
    return custom_grid(sample, std::move(eval), levels, h_max);
}

GridSpec custom_grid(const Sample& sample, std::vector<double> eval_points,
                     std::size_t levels, double h_max) {
    double range = sample.range();
    if (levels == 0) {
        double lg = std::ceil(std::log2(static_cast<double>(sample.size())));
        levels = static_cast<std::size_t>(lg) + 4;
    }
    if (h_max == 0.0) h_max = range;
    if (!std::isfinite(h_max) || h_max <= 0.0)
        throw DomainError("grid needs a positive bandwidth range; "
                          "degenerate samples have none");

    std::vector<double> ladder;
    double h_min = std::max(h_max / std::ldexp(1.0, static_cast<int>(levels)),
                            sample.smallest_gap());
    for (std::size_t j = 0; j <= levels; ++j) {
        double h = std::ldexp(h_max, -static_cast<int>(j));
        ladder.push_back(h);
        if (h <= h_min) break;
    }
    return explicit_grid(sample, std::move(eval_points), std::move(ladder));
}

GridSpec explicit_grid(const Sample& sample, std::vector<double> eval_points,
                       std::vector<double> bandwidths) {
    if (eval_points.empty()) throw DomainError("eval grid must be non-empty");
    for (std::size_t i = 0; i < eval_points.size(); ++i) {
        if (!std::isfinite(eval_points[i]))
            throw NonFiniteInput("eval grid point is not finite");
        if (i > 0 && eval_points[i] <= eval_points[i - 1])
            throw DomainError("eval grid must be strictly increasing");
    }
    if (bandwidths.empty())
        throw DomainError("bandwidth ladder must be non-empty");
    for (std::size_t i = 0; i < bandwidths.size(); ++i) {
        if (!std::isfinite(bandwidths[i]) || bandwidths[i] <= 0.0)
            throw NonPositiveBandwidth("bandwidths must be positive and finite");
        if (i > 0 && bandwidths[i] >= bandwidths[i - 1])
            throw DomainError("bandwidth ladder must be strictly decreasing");
    }

    GridSpec g;
    g.eval_points = std::move(eval_points);
    g.bandwidths = std::move(bandwidths);
    double h_max = g.bandwidths.front();

    double lo = sample.min(), hi = sample.max();
    std::vector<double> z;
    z.reserve(2 * g.eval_points.size() * g.bandwidths.size());
    double zlo = lo - h_max, zhi = hi + h_max;
    for (double h : g.bandwidths) {
        for (double x : g.eval_points) {
            double a = x - h, b = x + h;
            if (a >= zlo && a <= zhi) z.push_back(a);
            if (b >= zlo && b <= zhi) z.push_back(b);
        }
    }
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end()), z.end());
    const std::size_t cap = 4096;
    if (z.size() > cap) {
        // Even index thinning keeps the span while respecting the cap.
        std::vector<double> thin;
        thin.reserve(cap);
        for (std::size_t i = 0; i < cap; ++i) {
            std::size_t idx = (i * (z.size() - 1)) / (cap - 1);
            thin.push_back(z[idx]);
        }
        thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
        z = std::move(thin);
    }
    g.locations = std::move(z);
    return g;
}

namespace {

void check_grid(const GridSpec& grid) {
    if (grid.bandwidths.empty() || grid.locations.empty() ||
        grid.eval_points.empty())
        throw DomainError("grid must have bandwidths, locations, eval points");
    for (double h : grid.bandwidths)
        if (!std::isfinite(h) || h <= 0.0)
            throw NonPositiveBandwidth("grid bandwidths must be positive");
    if (!std::is_sorted(grid.locations.begin(), grid.locations.end()))
        throw DomainError("grid locations must be sorted");
    if (!std::is_sorted(grid.eval_points.begin(), grid.eval_points.end()))
        throw DomainError("grid eval points must be sorted");
}

}  // namespace

BandCurve multiscale_band(const Sample& sample, double delta,
                          const GridSpec& grid) {
    check_grid(grid);
    check_delta(delta);
    if (sample.size() < 3) throw SampleTooSmall("band requires n >= 3");

    const auto& Z = grid.locations;
    const auto& X = grid.eval_points;
    const std::size_t nz = Z.size(), nx = X.size(), nh = grid.bandwidths.size();

    std::vector<double> upper(nx, kInf), lower(nx, -kInf);
    // Per bandwidth: prefix-min of per-scale uppers and suffix-max of lowers
    // over Z, then a binary-searched lookup per eval point. Bandwidths are
    // independent, so the loop parallelizes with a final elementwise reduce.
    std::vector<std::vector<double>> up_h(nh), lo_h(nh);
    parallel_for(nh, [&](std::size_t hi_idx) {
        double h = grid.bandwidths[hi_idx];
        std::vector<double> prefix_min(nz), suffix_max(nz);
        for (std::size_t k = 0; k < nz; ++k) {
            ScaleBand b = band_at_scale(sample, delta, h, Z[k]);
            prefix_min[k] = k ? std::min(prefix_min[k - 1], b.hi) : b.hi;
            suffix_max[k] = b.lo;
        }
        for (std::size_t k = nz - 1; k-- > 0;)
            suffix_max[k] = std::max(suffix_max[k], suffix_max[k + 1]);

        std::vector<double> up(nx, kInf), lo(nx, -kInf);
        for (std::size_t i = 0; i < nx; ++i) {
            // Feasible uppers: z <= x - h.
            auto it = std::upper_bound(Z.begin(), Z.end(), X[i] - h);
            if (it != Z.begin())
                up[i] = prefix_min[static_cast<std::size_t>(it - Z.begin()) - 1];
            // Feasible lowers: z >= x + h.
            auto jt = std::lower_bound(Z.begin(), Z.end(), X[i] + h);
            if (jt != Z.end())
                lo[i] = suffix_max[static_cast<std::size_t>(jt - Z.begin())];
        }
        up_h[hi_idx] = std::move(up);
        lo_h[hi_idx] = std::move(lo);
    });
    for (std::size_t j = 0; j < nh; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            upper[i] = std::min(upper[i], up_h[j][i]);
            lower[i] = std::max(lower[i], lo_h[j][i]);
        }
    }

    BandCurve curve;
    curve.x = X;
    curve.lower = std::move(lower);
    curve.upper = std::move(upper);
    curve.estimate.resize(nx);
    curve.n = sample.size();
    curve.delta = delta;
    curve.data_fingerprint = sample.fingerprint();
    curve.levels = nh - 1;
    curve.h_max = grid.bandwidths.front();
    curve.h_min = grid.bandwidths.back();
    for (std::size_t i = 0; i < nx; ++i) {
        double lo = curve.lower[i], hi = curve.upper[i];
        // Off the good event the interval can cross; project_zero extends
        // the minimum-magnitude rule continuously across that case.
        if (lo > hi) ++curve.crossings;
        curve.estimate[i] = project_zero(lo, hi);
    }
    return curve;
}

BandPoint band_eval(const BandCurve& curve, double x) {
    if (curve.x.empty()) throw DomainError("band curve has no grid");
    if (!std::isfinite(x)) throw NonFiniteInput("evaluation point is not finite");
    if (x < curve.x.front() || x > curve.x.back())
        throw OutOfGrid("evaluation point outside the band grid");
    auto it = std::upper_bound(curve.x.begin(), curve.x.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - curve.x.begin());
    if (idx > 0) --idx;  // x == front() would otherwise underflow
    return {curve.lower[idx], curve.upper[idx], curve.estimate[idx]};
}

double band_estimate_at(const BandCurve& curve, double x) {
    if (curve.x.empty()) throw DomainError("band curve has no grid");
    if (!std::isfinite(x)) throw NonFiniteInput("evaluation point is not finite");
    if (x <= curve.x.front()) return curve.estimate.front();
    if (x >= curve.x.back()) return curve.estimate.back();
    return band_eval(curve, x).est;
}

std::string band_to_csv(const BandCurve& curve) {
    std::string out = "x,lower,upper,estimate\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        out += fmt_double(curve.x[i]);
        out += ',';
        out += fmt_double(curve.lower[i]);
        out += ',';
        out += fmt_double(curve.upper[i]);
        out += ',';
        out += fmt_double(curve.estimate[i]);
        out += '\n';
    }
    return out;
}

BandCurve band_from_csv(const std::string& text) {
    BandCurve curve;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != "x,lower,upper,estimate")
                throw ParseError("expected band CSV header x,lower,upper,estimate",
                                 lineno);
            continue;
        }
        std::array<double, 4> vals{};
        std::size_t pos = 0;
        for (int col = 0; col < 4; ++col) {
            std::size_t next = col < 3 ? line.find(',', pos) : line.size();
            if (next == std::string::npos)
                throw ParseError("band CSV row needs 4 comma-separated fields",
                                 lineno);
            vals[static_cast<std::size_t>(col)] =
                parse_double(line.substr(pos, next - pos), lineno);
            pos = next + 1;
        }
        curve.x.push_back(vals[0]);
        curve.lower.push_back(vals[1]);
        curve.upper.push_back(vals[2]);
        curve.estimate.push_back(vals[3]);
    }
    if (curve.x.empty()) throw ParseError("band CSV has no data rows", 0);
    return curve;
}

namespace {

nlohmann::json extended_array(const std::vector<double>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (double x : v) {
        if (std::isinf(x))
            arr.push_back(x > 0 ? "+inf" : "-inf");
        else
            arr.push_back(x);
    }
    return arr;
}

}  // namespace

std::string band_to_json(const BandCurve& curve) {
    nlohmann::json j;
    j["n"] = curve.n;
    j["delta"] = curve.delta;
    j["seed"] = curve.seed;
    j["grid"] = {{"J", curve.levels}, {"h_max", curve.h_max}, {"h_min", curve.h_min}};
    j["crossings"] = curve.crossings;
    j["data_fingerprint"] = curve.data_fingerprint;
    j["x"] = extended_array(curve.x);
    j["lower"] = extended_array(curve.lower);
    j["upper"] = extended_array(curve.upper);
    j["estimate"] = extended_array(curve.estimate);
    return j.dump(2) + "\n";
}

}  // namespace scoreband
