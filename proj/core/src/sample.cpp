#include "scoreband/sample.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "scoreband/errors.hpp"

namespace scoreband {

namespace {

void check_point(double v, const char* what) {
    if (!std::isfinite(v)) throw NonFiniteInput(std::string(what) + " is not finite");
}

void check_bandwidth(double h) {
    if (!std::isfinite(h) || h <= 0.0)
        throw NonPositiveBandwidth("bandwidth must be positive and finite");
}

}  // namespace

Sample::Sample(std::vector<double> draws) : x_(std::move(draws)) {
    if (x_.empty()) throw SampleTooSmall("sample must contain at least one point");
    for (double v : x_) check_point(v, "sample point");
    std::sort(x_.begin(), x_.end());
    prefix_.resize(x_.size() + 1);
    prefix_[0] = 0.0L;
    for (std::size_t i = 0; i < x_.size(); ++i)
        prefix_[i + 1] = prefix_[i] + static_cast<long double>(x_[i]);
}

double Sample::smallest_gap() const {
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        double gap = x_[i + 1] - x_[i];
        if (gap > 0.0 && (best == 0.0 || gap < best)) best = gap;
    }
    return best;
}

std::uint64_t Sample::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : x_) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (bits >> (8 * byte)) & 0xffULL;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::size_t Sample::count_closed(double a, double b) const {
    check_point(a, "interval endpoint");
    check_point(b, "interval endpoint");
    if (a > b) return 0;
    auto lo = std::lower_bound(x_.begin(), x_.end(), a);
    auto hi = std::upper_bound(x_.begin(), x_.end(), b);
    return static_cast<std::size_t>(hi - lo);
}

std::size_t Sample::count_left_open(double a, double b) const {
    check_point(a, "interval endpoint");
    check_point(b, "interval endpoint");
    if (a >= b) return 0;
    auto lo = std::upper_bound(x_.begin(), x_.end(), a);
    auto hi = std::upper_bound(x_.begin(), x_.end(), b);
    return static_cast<std::size_t>(hi - lo);
}

std::size_t Sample::count_open(double a, double b) const {
    check_point(a, "interval endpoint");
    check_point(b, "interval endpoint");
    if (a >= b) return 0;
    auto lo = std::upper_bound(x_.begin(), x_.end(), a);
    auto hi = std::lower_bound(x_.begin(), x_.end(), b);
    return lo < hi ? static_cast<std::size_t>(hi - lo) : 0;
}

double Sample::interval_prob(double a, double b) const {
    if (a > b) throw DomainError("interval_prob requires a <= b");
    return static_cast<double>(count_closed(a, b)) / static_cast<double>(size());
}

double Sample::kde_tri(double h, double x) const {
    check_bandwidth(h);
    check_point(x, "evaluation point");
    // Points with positive weight lie strictly inside (x-h, x+h); split at x
    // so each |x - X_i| is a signed difference and the prefix sums apply.
    std::size_t iL = static_cast<std::size_t>(
        std::upper_bound(x_.begin(), x_.end(), x - h) - x_.begin());
    std::size_t iM = static_cast<std::size_t>(
        std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
    std::size_t iR = static_cast<std::size_t>(
        std::lower_bound(x_.begin(), x_.end(), x + h) - x_.begin());
    if (iR <= iL) return 0.0;
    long double hx = h;
    long double xl = x;
    long double left_dist = xl * static_cast<long double>(iM - iL) -
                            (prefix_[iM] - prefix_[iL]);
    long double right_dist = (prefix_[iR] - prefix_[iM]) -
                             xl * static_cast<long double>(iR - iM);
    long double weight = static_cast<long double>(iR - iL) -
                         (left_dist + right_dist) / hx;
    long double val = weight / (static_cast<long double>(size()) * hx);
    return static_cast<double>(val);
}

double Sample::kde_tri_deriv(double h, double x) const {
    check_bandwidth(h);
    check_point(x, "evaluation point");
    auto above = count_open(x, x + h);
    auto below = count_left_open(x - h, x);
    double diff = static_cast<double>(above) - static_cast<double>(below);
    return diff / (static_cast<double>(size()) * h * h);
}

Sample build_sample(std::vector<double> draws) { return Sample(std::move(draws)); }

double interval_prob(const Sample& s, double a, double b) {
    return s.interval_prob(a, b);
}

double kde_tri(const Sample& s, double h, double x) { return s.kde_tri(h, x); }

double kde_tri_deriv(const Sample& s, double h, double x) {
    return s.kde_tri_deriv(h, x);
}

}  // namespace scoreband
