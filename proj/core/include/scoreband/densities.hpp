#ifndef SCOREBAND_DENSITIES_HPP
#define SCOREBAND_DENSITIES_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace scoreband {

// Support interval; endpoints may be infinite.
struct Support {
    double lo;
    double hi;
};

enum class Family { gaussian, laplace, flattened_laplace, subbotin, gumbel, beta };

// A log-concave reference density with exact distribution functions.
//
// All members are pure and models are immutable after construction, so shared
// concurrent reads are safe. Scores follow the extended-real convention:
// +inf at or left of the lower support endpoint, -inf at or right of the
// upper one; values are otherwise finite doubles (never NaN).
class DensityModel {
public:
    virtual ~DensityModel() = default;

    virtual Family family() const = 0;
    virtual std::string name() const = 0;
    virtual std::map<std::string, double> params() const = 0;
    virtual Support support() const = 0;

    virtual double pdf(double x) const = 0;
    // cdf and sf (= 1 - cdf) are both exposed so each tail can be evaluated
    // with full relative precision.
    virtual double cdf(double x) const = 0;
    virtual double sf(double x) const = 0;
    // Inverse cdf on [0,1]; 0 and 1 map to the support endpoints.
    virtual double quantile(double u) const = 0;

    // Log-density derivative (score).
    virtual double score(double x) const = 0;

    // Density quantile function J(u) = pdf(quantile(u)) and its a.e. slope
    // J'(u) = score(quantile(u)). Families with closed forms override the
    // default compositions.
    virtual double dq(double u) const;
    virtual double dq_slope(double u) const;

    // Quantile-space points where J' has kinks or jumps; quadrature panels
    // split here so piecewise-smooth integrands are handled exactly.
    virtual std::vector<double> u_knots() const;

    // x-space points where the density is not smooth (kinks, support ends);
    // finite, sorted. Convolution integrals split their panels here.
    virtual std::vector<double> x_knots() const;

    // Integral of J'(u)^2 over the lower tail [0, mass] (right_tail = false)
    // or the upper tail [1-mass, 1] (right_tail = true); mass <= 1/2.
    // Closed form for all families except beta (evaluated by tail quadrature
    // there); +inf when the integral diverges.
    virtual double score_sq_tail(double mass, bool right_tail) const = 0;
};

using ModelPtr = std::shared_ptr<const DensityModel>;

ModelPtr make_gaussian();
ModelPtr make_laplace(double rate);
// Piecewise-log-affine family, uniform on [-(a - 1/a), a - 1/a] with
// exponential tails of rate a; hshift > 0 inserts a half-slope transition
// band of width 2*hshift around the tail junction (requires a >= sqrt(2)).
ModelPtr make_flattened_laplace(double a, double hshift);
ModelPtr make_subbotin(double beta);
ModelPtr make_gumbel();
ModelPtr make_beta(double a, double b);

// Factory keyed by family and named parameters (L; a, hshift; beta; a, b).
// Throws DomainError on unknown names, missing/extra parameters, or values
// outside the documented ranges.
ModelPtr make_model(Family family, const std::map<std::string, double>& params);
ModelPtr make_model(const std::string& family_name,
                    const std::map<std::string, double>& params);
Family family_from_name(const std::string& family_name);
std::string family_name(Family family);

// n i.i.d. draws by inverse-cdf sampling; deterministic given the seed.
std::vector<double> sample(const DensityModel& model, std::size_t n,
                           std::uint64_t seed);

// Integral of J'(u)^2 over (0,1): quadrature over [1e-4, 1-1e-4] plus the
// model's tail terms. Returns +inf when the integral diverges (beta with
// min(a,b) <= 2). Absolute quadrature error <= tol.
double fisher_information(const DensityModel& model, double tol = 1e-9);

// Shape classes for membership grid checks.
// TailGrowthClass: |J'(u)| <= L / (u ^ (1-u))^((1-gamma)/2), gamma in (0,1].
// HolderScoreClass: |score(x) - score(y)| <= L |x-y|^(beta-1), beta in [1,2].
struct TailGrowthClass {
    double gamma;
    double L;
};
struct HolderScoreClass {
    double beta;
    double L;
};
using ClassSpec = std::variant<TailGrowthClass, HolderScoreClass>;

struct MembershipReport {
    std::vector<double> u;      // the grid checked
    std::vector<double> ratio;  // per-point envelope ratio; <= 1 means inside
    double max_ratio;
    bool pass;
};

// Grid check only: verdict on the supplied u-grid, not a proof of membership.
MembershipReport class_membership(const DensityModel& model,
                                  const ClassSpec& spec,
                                  const std::vector<double>& ugrid);

}  // namespace scoreband

#endif
