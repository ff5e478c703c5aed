#include "scoreband/densities.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "scoreband/errors.hpp"
#include "scoreband/quadrature.hpp"
#include "scoreband/rng.hpp"

namespace scoreband {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2*pi)

// Sign with sgn(0) = +1, matching the score conventions used throughout.
double sgn(double x) { return x >= 0.0 ? 1.0 : -1.0; }

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw NonFiniteInput(std::string(what) + " must be finite");
}

void require_prob(double u) {
    require_finite(u, "probability level");
    if (u < 0.0 || u > 1.0)
        throw DomainError("probability level outside [0,1]");
}

void require_tail_mass(double mass) {
    require_prob(mass);
    if (mass > 0.5) throw DomainError("tail mass must be <= 1/2");
}

std::string fmt_param(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

double DensityModel::dq(double u) const {
    require_prob(u);
    if (u == 0.0 || u == 1.0) {
        double x = quantile(u);
        return std::isfinite(x) ? pdf(x) : 0.0;
    }
    return pdf(quantile(u));
}

double DensityModel::dq_slope(double u) const {
    require_prob(u);
    if (u == 0.0) return kInf;
    if (u == 1.0) return -kInf;
    return score(quantile(u));
}

std::vector<double> DensityModel::u_knots() const { return {0.5}; }

std::vector<double> DensityModel::x_knots() const { return {}; }

// ---------------------------------------------------------------------------
// Symmetric-about-zero helpers: one precise upper tail drives both sides.

namespace {

class SymmetricModel : public DensityModel {
public:
    Support support() const override { return {-kInf, kInf}; }

    double cdf(double x) const final {
        require_finite(x, "cdf argument");
        return x >= 0.0 ? 1.0 - tail(x) : tail(-x);
    }
    double sf(double x) const final {
        require_finite(x, "sf argument");
        return x >= 0.0 ? tail(x) : 1.0 - tail(-x);
    }
    double quantile(double u) const final {
        require_prob(u);
        if (u == 0.0) return -kInf;
        if (u == 1.0) return kInf;
        return u >= 0.5 ? upper_quantile(1.0 - u) : -upper_quantile(u);
    }
    double score_sq_tail(double mass, bool /*right_tail*/) const final {
        require_tail_mass(mass);
        return tail_score_sq(mass);
    }

protected:
    // P(X > t) for t >= 0, with full relative precision.
    virtual double tail(double t) const = 0;
    // t >= 0 with tail(t) = w, for w in (0, 1/2].
    virtual double upper_quantile(double w) const = 0;
    // Integral of J'(u)^2 over [0, mass] (= over [1-mass, 1] by symmetry).
    virtual double tail_score_sq(double mass) const = 0;
};

// ---------------------------------------------------------------------------

class GaussianModel final : public SymmetricModel {
public:
    Family family() const override { return Family::gaussian; }
    std::string name() const override { return "gaussian"; }
    std::map<std::string, double> params() const override { return {}; }

    double pdf(double x) const override {
        require_finite(x, "pdf argument");
        return kInvSqrt2Pi * std::exp(-0.5 * x * x);
    }
    double score(double x) const override {
        require_finite(x, "score argument");
        return -x;
    }

protected:
    double tail(double t) const override {
        return 0.5 * boost::math::erfc(t / std::sqrt(2.0));
    }
    double upper_quantile(double w) const override {
        return std::sqrt(2.0) * boost::math::erfc_inv(2.0 * w);
    }
    double tail_score_sq(double mass) const override {
        // d/du of u - z*pdf(z) with z = quantile(u) is z^2, so the tail
        // integral of J'^2 is mass - z0*pdf(z0) = mass + |z0|*pdf(z0).
        if (mass == 0.0) return 0.0;
        double z = quantile(mass);
        return mass - z * pdf(z);
    }
};

// ---------------------------------------------------------------------------

class LaplaceModel final : public SymmetricModel {
public:
    explicit LaplaceModel(double rate) : rate_(rate) {
        require_finite(rate, "laplace rate");
        if (rate <= 0.0) throw DomainError("laplace rate must be > 0");
    }

    Family family() const override { return Family::laplace; }
    std::string name() const override { return "laplace(L=" + fmt_param(rate_) + ")"; }
    std::map<std::string, double> params() const override { return {{"L", rate_}}; }

    double pdf(double x) const override {
        require_finite(x, "pdf argument");
        return 0.5 * rate_ * std::exp(-rate_ * std::fabs(x));
    }
    double score(double x) const override {
        require_finite(x, "score argument");
        return -rate_ * sgn(x);
    }
    double dq(double u) const override {
        require_prob(u);
        return rate_ * std::min(u, 1.0 - u);
    }
    double dq_slope(double u) const override {
        require_prob(u);
        if (u == 0.0) return kInf;
        if (u == 1.0) return -kInf;
        return rate_ * sgn(0.5 - u);
    }
    std::vector<double> x_knots() const override { return {0.0}; }

protected:
    double tail(double t) const override { return 0.5 * std::exp(-rate_ * t); }
    double upper_quantile(double w) const override {
        return -std::log(2.0 * w) / rate_;
    }
    double tail_score_sq(double mass) const override {
        return rate_ * rate_ * mass;
    }

private:
    double rate_;
};

// ---------------------------------------------------------------------------
// Flattened Laplace: log-density 0 on [0, p1], slope -a/2 on [p1, p2], slope
// -a beyond, mirrored about 0, where p1 = xa - hshift, p2 = xa + hshift and
// xa = a - 1/a. hshift = 0 recovers the uniform-center/exponential-tail case.

class FlattenedLaplaceModel final : public SymmetricModel {
public:
    FlattenedLaplaceModel(double a, double hshift) : a_(a), h_(hshift) {
        require_finite(a, "flattened_laplace a");
        require_finite(hshift, "flattened_laplace hshift");
        if (a < 1.0) throw DomainError("flattened_laplace needs a >= 1");
        if (hshift < 0.0 || hshift > 1.0 / a)
            throw DomainError("flattened_laplace needs 0 <= hshift <= 1/a");
        if (hshift > 0.0 && a < std::sqrt(2.0))
            throw DomainError("flattened_laplace with hshift > 0 needs a >= sqrt(2)");
        xa_ = a_ - 1.0 / a_;
        p1_ = xa_ - h_;
        p2_ = xa_ + h_;
        // Normalizer C = 2 * (p1 + (2/a)(1 - e^{-a h}) + e^{-a h}/a).
        eah_ = std::exp(-a_ * h_);
        seg2_ = (2.0 / a_) * -std::expm1(-a_ * h_);
        norm_ = 2.0 * (p1_ + seg2_ + eah_ / a_);
    }

    Family family() const override { return Family::flattened_laplace; }
    std::string name() const override {
        return "flattened_laplace(a=" + fmt_param(a_) + ",hshift=" + fmt_param(h_) + ")";
    }
    std::map<std::string, double> params() const override {
        return {{"a", a_}, {"hshift", h_}};
    }

    double pdf(double x) const override {
        require_finite(x, "pdf argument");
        return std::exp(log_shape(std::fabs(x))) / norm_;
    }
    double score(double x) const override {
        require_finite(x, "score argument");
        double t = std::fabs(x);
        double mag = 0.0;
        if (t >= p2_)
            mag = a_;
        else if (t > p1_)
            mag = 0.5 * a_;
        return -sgn(x) * mag;
    }
    double dq(double u) const override {
        if (h_ == 0.0) {
            require_prob(u);
            return a_ * std::min({u, 1.0 - u, 0.5 / (a_ * a_)});
        }
        return DensityModel::dq(u);
    }
    double dq_slope(double u) const override {
        if (h_ == 0.0) {
            require_prob(u);
            if (u == 0.0) return kInf;
            if (u == 1.0) return -kInf;
            return std::min(u, 1.0 - u) <= 0.5 / (a_ * a_) ? a_ * sgn(0.5 - u) : 0.0;
        }
        return DensityModel::dq_slope(u);
    }
    std::vector<double> u_knots() const override {
        double k2 = tail(p2_);
        double k1 = tail(p1_);
        std::vector<double> k{k2, k1, 0.5, 1.0 - k1, 1.0 - k2};
        std::sort(k.begin(), k.end());
        k.erase(std::unique(k.begin(), k.end()), k.end());
        return k;
    }
    std::vector<double> x_knots() const override {
        std::vector<double> k{-p2_, -p1_, 0.0, p1_, p2_};
        std::sort(k.begin(), k.end());
        k.erase(std::unique(k.begin(), k.end()), k.end());
        return k;
    }

protected:
    double tail(double t) const override {
        if (t >= p2_) return std::exp(-a_ * (t - xa_)) / (a_ * norm_);
        return 0.5 - half_mass(t);
    }
    double upper_quantile(double w) const override {
        double tail_p2 = eah_ / (a_ * norm_);
        if (w <= tail_p2) return xa_ - std::log(a_ * norm_ * w) / a_;
        double m = 0.5 - w;  // mass of (0, t]; t below p2 so no cancellation blowup
        double s = m * norm_ - p1_;
        if (s <= 0.0) return std::max(m * norm_, 0.0);
        return p1_ - (2.0 / a_) * std::log1p(-0.5 * a_ * s);
    }
    double tail_score_sq(double mass) const override {
        double k2 = tail(p2_);
        double k1 = tail(p1_);
        double in_full = std::min(mass, k2);
        double in_half = std::max(0.0, std::min(mass, k1) - k2);
        return a_ * a_ * in_full + 0.25 * a_ * a_ * in_half;
    }

private:
    // log density shape at |x| = t, relative to the center plateau.
    double log_shape(double t) const {
        if (t <= p1_) return 0.0;
        if (t <= p2_) return -0.5 * a_ * (t - p1_);
        return -a_ * (t - xa_);
    }
    // P(0 < X <= t) for t in [0, p2].
    double half_mass(double t) const {
        if (t <= p1_) return t / norm_;
        double mid = (2.0 / a_) * -std::expm1(-0.5 * a_ * (t - p1_));
        return (p1_ + mid) / norm_;
    }

    double a_, h_, xa_, p1_, p2_, eah_, seg2_, norm_;
};

// ---------------------------------------------------------------------------

class SubbotinModel final : public SymmetricModel {
public:
    explicit SubbotinModel(double beta) : beta_(beta) {
        require_finite(beta, "subbotin beta");
        if (beta < 1.0) throw DomainError("subbotin needs beta >= 1");
        inv_beta_ = 1.0 / beta_;
        // Normalizer: pdf = beta^((beta-1)/beta) / (2 Gamma(1/beta)) * e^{-|x|^beta/beta}.
        lead_ = std::pow(beta_, (beta_ - 1.0) * inv_beta_) /
                (2.0 * boost::math::tgamma(inv_beta_));
    }

    Family family() const override { return Family::subbotin; }
    std::string name() const override { return "subbotin(beta=" + fmt_param(beta_) + ")"; }
    std::map<std::string, double> params() const override { return {{"beta", beta_}}; }

    double pdf(double x) const override {
        require_finite(x, "pdf argument");
        return lead_ * std::exp(-std::pow(std::fabs(x), beta_) * inv_beta_);
    }
    double score(double x) const override {
        require_finite(x, "score argument");
        if (x == 0.0) return beta_ == 1.0 ? -1.0 : 0.0;
        return -sgn(x) * std::pow(std::fabs(x), beta_ - 1.0);
    }
    std::vector<double> x_knots() const override {
        return beta_ < 2.0 ? std::vector<double>{0.0} : std::vector<double>{};
    }

protected:
    double tail(double t) const override {
        return 0.5 * boost::math::gamma_q(inv_beta_, std::pow(t, beta_) * inv_beta_);
    }
    double upper_quantile(double w) const override {
        double y = boost::math::gamma_q_inv(inv_beta_, 2.0 * w);
        return std::pow(beta_ * y, inv_beta_);
    }
    double tail_score_sq(double mass) const override {
        // Substituting w = t^beta/beta turns the tail integral of t^(2beta-2)
        // times the density into an upper incomplete gamma with shape 2 - 1/beta.
        if (mass == 0.0) return 0.0;
        double t0 = -quantile(mass);
        double w0 = std::pow(t0, beta_) * inv_beta_;
        double scale = std::pow(beta_, 2.0 * (beta_ - 1.0) * inv_beta_) /
                       (2.0 * boost::math::tgamma(inv_beta_));
        return scale * boost::math::tgamma(2.0 - inv_beta_, w0);
    }

private:
    double beta_, inv_beta_, lead_;
};

// ---------------------------------------------------------------------------

class GumbelModel final : public DensityModel {
public:
    Family family() const override { return Family::gumbel; }
    std::string name() const override { return "gumbel"; }
    std::map<std::string, double> params() const override { return {}; }
    Support support() const override { return {-kInf, kInf}; }

    double pdf(double x) const override {
        require_finite(x, "pdf argument");
        double e = std::exp(-x);
        return std::exp(-x - e);
    }
    double cdf(double x) const override {
        require_finite(x, "cdf argument");
        return std::exp(-std::exp(-x));
    }
    double sf(double x) const override {
        require_finite(x, "sf argument");
        return -std::expm1(-std::exp(-x));
    }
    double quantile(double u) const override {
        require_prob(u);
        if (u == 0.0) return -kInf;
        if (u == 1.0) return kInf;
        return -std::log(-std::log(u));
    }
    double score(double x) const override {
        require_finite(x, "score argument");
        return std::expm1(-x);
    }
    double dq(double u) const override {
        require_prob(u);
        if (u == 0.0 || u == 1.0) return 0.0;
        return -u * std::log(u);
    }
    double dq_slope(double u) const override {
        require_prob(u);
        if (u == 0.0) return kInf;
        if (u == 1.0) return -kInf;
        return -1.0 - std::log(u);
    }
    double score_sq_tail(double mass, bool right_tail) const override {
        // Antiderivative of (1 + log u)^2 is u * ((1+log u)^2 - 2(1+log u) + 2),
        // i.e. G(u) = u (L^2 + 2L + 2) with L = -1 - log u; G(0+) = 0, G(1) = 1.
        require_tail_mass(mass);
        if (!right_tail) return antideriv(mass);
        return 1.0 - antideriv(1.0 - mass);
    }

private:
    static double antideriv(double u) {
        if (u == 0.0) return 0.0;
        double L = -1.0 - std::log(u);
        return u * (L * L + 2.0 * L + 2.0);
    }
};

// ---------------------------------------------------------------------------

class BetaModel final : public DensityModel {
public:
    BetaModel(double a, double b) : a_(a), b_(b) {
        require_finite(a, "beta shape a");
        require_finite(b, "beta shape b");
        if (a <= 1.0 || b <= 1.0)
            throw DomainError("beta needs a > 1 and b > 1");
    }

    Family family() const override { return Family::beta; }
    std::string name() const override {
        return "beta(a=" + fmt_param(a_) + ",b=" + fmt_param(b_) + ")";
    }
    std::map<std::string, double> params() const override {
        return {{"a", a_}, {"b", b_}};
    }
    Support support() const override { return {0.0, 1.0}; }

    double pdf(double x) const override {
        require_finite(x, "pdf argument");
        if (x <= 0.0 || x >= 1.0) return 0.0;
        return boost::math::ibeta_derivative(a_, b_, x);
    }
    double cdf(double x) const override {
        require_finite(x, "cdf argument");
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return boost::math::ibeta(a_, b_, x);
    }
    double sf(double x) const override {
        require_finite(x, "sf argument");
        if (x <= 0.0) return 1.0;
        if (x >= 1.0) return 0.0;
        return boost::math::ibetac(a_, b_, x);
    }
    double quantile(double u) const override {
        require_prob(u);
        if (u == 0.0) return 0.0;
        if (u == 1.0) return 1.0;
        try {
            return boost::math::ibeta_inv(a_, b_, u);
        } catch (const std::exception&) {
            // ibeta_inv's internal Newton occasionally reports a spurious
            // convergence failure (e.g. a = b = 5 at interior u); recover
            // with a safeguarded bisection-Newton on the cdf.
        }
        double lo = 0.0, hi = 1.0;
        double x = a_ / (a_ + b_), xp = -1.0;
        for (int it = 0; it < 120; ++it) {
            double r = cdf(x) - u;
            if (r == 0.0) break;
            if (r > 0.0)
                hi = x;
            else
                lo = x;
            double d = pdf(x);
            double xn = d > 0.0 ? x - r / d : 0.5 * (lo + hi);
            if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
            // Stop at a fixed point or a one-ulp oscillation around the root.
            if (xn == x || xn == xp) break;
            xp = x;
            x = xn;
        }
        return x;
    }
    double score(double x) const override {
        require_finite(x, "score argument");
        if (x <= 0.0) return kInf;
        if (x >= 1.0) return -kInf;
        return (a_ - 1.0) / x - (b_ - 1.0) / (1.0 - x);
    }
    std::vector<double> x_knots() const override { return {0.0, 1.0}; }
    double score_sq_tail(double mass, bool right_tail) const override {
        require_tail_mass(mass);
        if (mass == 0.0) return 0.0;
        // J'^2 integrates like score^2 * pdf in x; near x = 0 the integrand
        // grows as x^(a-3), so the lower tail is finite iff a > 2 (and the
        // upper iff b > 2). Finite tails are evaluated by edge quadrature.
        double side = right_tail ? b_ : a_;
        if (side <= 2.0) return kInf;
        double x0 = quantile(right_tail ? 1.0 - mass : mass);
        auto g = [this](double x) {
            // Edge quadrature probes within ~1e-308 of the endpoints, where
            // score overflows while the pdf underflows to 0 (0 * inf = nan).
            // Returning 0 once the pdf underflows is safe: the integrand is
            // x^(shape-3)-sized there and shape > 2, so the lost mass is
            // ~1e-80 or less.  Squaring score * sqrt(pdf) instead of
            // multiplying score^2 * pdf keeps the finite cases clear of
            // overflow.
            if (x <= 0.0 || x >= 1.0) return 0.0;
            double d = pdf(x);
            if (d <= 0.0) return 0.0;
            double t = score(x) * std::sqrt(d);
            return t * t;
        };
        QuadResult r = right_tail ? integrate_edge(g, x0, 1.0, 1e-12)
                                  : integrate_edge(g, 0.0, x0, 1e-12);
        return r.value;
    }

private:
    double a_, b_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Factories.

ModelPtr make_gaussian() { return std::make_shared<GaussianModel>(); }
ModelPtr make_laplace(double rate) { return std::make_shared<LaplaceModel>(rate); }
ModelPtr make_flattened_laplace(double a, double hshift) {
    return std::make_shared<FlattenedLaplaceModel>(a, hshift);
}
ModelPtr make_subbotin(double beta) { return std::make_shared<SubbotinModel>(beta); }
ModelPtr make_gumbel() { return std::make_shared<GumbelModel>(); }
ModelPtr make_beta(double a, double b) { return std::make_shared<BetaModel>(a, b); }

namespace {

double take_param(std::map<std::string, double> params, const std::string& key,
                  std::map<std::string, double>* rest) {
    auto it = params.find(key);
    if (it == params.end())
        throw DomainError("missing parameter '" + key + "'");
    double v = it->second;
    params.erase(it);
    *rest = std::move(params);
    return v;
}

void expect_empty(const std::map<std::string, double>& rest) {
    if (!rest.empty())
        throw DomainError("unknown parameter '" + rest.begin()->first + "'");
}

}  // namespace

std::string family_name(Family family) {
    switch (family) {
        case Family::gaussian: return "gaussian";
        case Family::laplace: return "laplace";
        case Family::flattened_laplace: return "flattened_laplace";
        case Family::subbotin: return "subbotin";
        case Family::gumbel: return "gumbel";
        case Family::beta: return "beta";
    }
    throw DomainError("unknown family enum value");
}

Family family_from_name(const std::string& family_name) {
    if (family_name == "gaussian") return Family::gaussian;
    if (family_name == "laplace") return Family::laplace;
    if (family_name == "flattened_laplace") return Family::flattened_laplace;
    if (family_name == "subbotin") return Family::subbotin;
    if (family_name == "gumbel") return Family::gumbel;
    if (family_name == "beta") return Family::beta;
    throw DomainError("unknown density family '" + family_name + "'");
}

ModelPtr make_model(Family family, const std::map<std::string, double>& params) {
    std::map<std::string, double> rest;
    switch (family) {
        case Family::gaussian:
            expect_empty(params);
            return make_gaussian();
        case Family::laplace: {
            double L = take_param(params, "L", &rest);
            expect_empty(rest);
            return make_laplace(L);
        }
        case Family::flattened_laplace: {
            double a = take_param(params, "a", &rest);
            auto rest2 = rest;
            double h = 0.0;
            if (rest.count("hshift")) {
                h = take_param(rest, "hshift", &rest2);
            }
            expect_empty(rest2);
            return make_flattened_laplace(a, h);
        }
        case Family::subbotin: {
            double beta = take_param(params, "beta", &rest);
            expect_empty(rest);
            return make_subbotin(beta);
        }
        case Family::gumbel:
            expect_empty(params);
            return make_gumbel();
        case Family::beta: {
            double a = take_param(params, "a", &rest);
            auto rest2 = rest;
            double b = take_param(rest, "b", &rest2);
            expect_empty(rest2);
            return make_beta(a, b);
        }
    }
    throw DomainError("unknown family enum value");
}

ModelPtr make_model(const std::string& family_name,
                    const std::map<std::string, double>& params) {
    return make_model(family_from_name(family_name), params);
}

// ---------------------------------------------------------------------------

std::vector<double> sample(const DensityModel& model, std::size_t n,
                           std::uint64_t seed) {
    std::vector<double> out(n);
    Rng rng = Rng::stream(seed, 0);
    for (std::size_t i = 0; i < n; ++i) out[i] = model.quantile(rng.next_uniform());
    std::sort(out.begin(), out.end());
    return out;
}

double fisher_information(const DensityModel& model, double tol) {
    const double u0 = 1e-4;
    double tails = model.score_sq_tail(u0, false) + model.score_sq_tail(u0, true);
    if (!std::isfinite(tails)) return kInf;
    std::vector<double> knots{u0};
    for (double k : model.u_knots())
        if (k > u0 && k < 1.0 - u0) knots.push_back(k);
    knots.push_back(1.0 - u0);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    auto g = [&model](double u) {
        double s = model.dq_slope(u);
        return s * s;
    };
    QuadResult body = integrate_panels(g, knots, tol, false, false);
    return tails + body.value;
}

MembershipReport class_membership(const DensityModel& model,
                                  const ClassSpec& spec,
                                  const std::vector<double>& ugrid) {
    MembershipReport rep;
    rep.u = ugrid;
    rep.ratio.reserve(ugrid.size());
    if (std::holds_alternative<TailGrowthClass>(spec)) {
        const auto& c = std::get<TailGrowthClass>(spec);
        if (!(c.gamma > 0.0 && c.gamma <= 1.0) || !(c.L > 0.0))
            throw DomainError("tail growth class needs gamma in (0,1] and L > 0");
        double expo = 0.5 * (1.0 - c.gamma);
        for (double u : ugrid) {
            require_prob(u);
            if (u == 0.0 || u == 1.0)
                throw DomainError("tail growth grid must lie strictly inside (0,1)");
            double envelope = c.L / std::pow(std::min(u, 1.0 - u), expo);
            rep.ratio.push_back(std::fabs(model.dq_slope(u)) / envelope);
        }
    } else {
        const auto& c = std::get<HolderScoreClass>(spec);
        if (!(c.beta >= 1.0 && c.beta <= 2.0) || !(c.L > 0.0))
            throw DomainError("holder score class needs beta in [1,2] and L > 0");
        std::vector<double> x(ugrid.size()), s(ugrid.size());
        for (std::size_t i = 0; i < ugrid.size(); ++i) {
            require_prob(ugrid[i]);
            x[i] = model.quantile(ugrid[i]);
            s[i] = model.score(x[i]);
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            double worst = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                if (j == i || x[i] == x[j]) continue;
                double envelope = c.L * std::pow(std::fabs(x[i] - x[j]), c.beta - 1.0);
                worst = std::max(worst, std::fabs(s[i] - s[j]) / envelope);
            }
            rep.ratio.push_back(worst);
        }
    }
    rep.max_ratio = 0.0;
    for (double r : rep.ratio) rep.max_ratio = std::max(rep.max_ratio, r);
    rep.pass = rep.max_ratio <= 1.0 + 1e-9;
    return rep;
}

}  // namespace scoreband
