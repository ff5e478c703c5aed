#ifndef SCOREBAND_SAMPLE_HPP
#define SCOREBAND_SAMPLE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace scoreband {

// Sorted data with prefix sums; all queries are O(log n) after the O(n log n)
// build. Immutable after construction, safe for concurrent reads.
class Sample {
public:
    // Sorts the draws. Throws SampleTooSmall when empty and NonFiniteInput
    // on NaN or infinite entries.
    explicit Sample(std::vector<double> draws);

    std::size_t size() const { return x_.size(); }
    const std::vector<double>& sorted() const { return x_; }
    double min() const { return x_.front(); }
    double max() const { return x_.back(); }
    double range() const { return x_.back() - x_.front(); }
    // Smallest positive gap between consecutive order statistics; 0 when all
    // points coincide.
    double smallest_gap() const;

    // FNV-1a over the bit patterns of the sorted points; identifies the
    // dataset in reports.
    std::uint64_t fingerprint() const;

    std::size_t count_closed(double a, double b) const;     // # in [a, b]
    std::size_t count_left_open(double a, double b) const;  // # in (a, b]
    std::size_t count_open(double a, double b) const;       // # in (a, b)

    // Empirical probability of the closed interval [a, b]; requires a <= b.
    double interval_prob(double a, double b) const;

    // Triangular-kernel density estimate (1/nh) * sum (1 - |x - X_i|/h)_+
    // and its derivative, which reduces to the count difference
    // (#(x, x+h) - #(x-h, x]) / (n h^2). h must be positive and finite.
    double kde_tri(double h, double x) const;
    double kde_tri_deriv(double h, double x) const;

private:
    std::vector<double> x_;
    std::vector<long double> prefix_;  // prefix_[k] = sum of first k points
};

// Free-function spellings of the Sample queries.
Sample build_sample(std::vector<double> draws);
double interval_prob(const Sample& s, double a, double b);
double kde_tri(const Sample& s, double h, double x);
double kde_tri_deriv(const Sample& s, double h, double x);

}  // namespace scoreband

#endif
