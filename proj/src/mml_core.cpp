#include "countsel/mml_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "countsel/polynomial.hpp"

namespace countsel::mml {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kHalfLog12 = 0.5 * std::log(12.0);

double log_beta_fn(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

// Parameter point carrying the logs needed for stable evaluation near the
// boundaries. For Poisson only `value` and `log_value` are used; for the
// geometric model value = p, comp = 1 - p.
struct Point {
    double value;
    double log_value;
    double comp;
    double log_comp;

    static Point poisson(double lambda) { return {lambda, std::log(lambda), 0.0, 0.0}; }
    static Point poisson_from_log(double t) { return {std::exp(t), t, 0.0, 0.0}; }
    static Point geometric(double p) { return {p, std::log(p), 1.0 - p, std::log1p(-p)}; }
    // p = 1 / (1 + e^{-t})
    static Point geometric_from_logit(double t) {
        if (t >= 0.0) {
            const double e = std::exp(-t);
            const double l = std::log1p(e);
            return {1.0 / (1.0 + e), -l, e / (1.0 + e), -t - l};
        }
        const double e = std::exp(t);
        const double l = std::log1p(e);
        return {e / (1.0 + e), t - l, 1.0 / (1.0 + e), -l};
    }
};

void require_applicable(ModelClass m, const PriorSpec& prior) {
    if (prior.applies_to != m) throw std::invalid_argument("prior does not apply to model");
}

// -ln pi(theta) + 1/2 ln F(theta) - 1/2 ln 12 with shared singular terms cancelled.
double assertion_at(ModelClass m, const PriorSpec& prior, const Point& x, std::int64_t n) {
    const double half_log_n = 0.5 * std::log(static_cast<double>(n));
    if (m == ModelClass::Poisson) {
        if (prior.family == PriorSpec::Family::ConjugateExp ||
            prior.family == PriorSpec::Family::CalibratedConjugate) {
            if (x.value == 0.0) return kInf;
            return std::log(prior.A) + x.value / prior.A + half_log_n - 0.5 * x.log_value - kHalfLog12;
        }
        // half-Cauchy: -ln pi(l) = ln pi + 1/2 ln l + ln(1+l); 1/2 ln F = 1/2 ln n - 1/2 ln l
        return std::log(std::numbers::pi) + std::log1p(x.value) + half_log_n - kHalfLog12;
    }
    if (prior.is_beta_kernel()) {
        const double a = prior.beta_alpha();
        const double b = prior.beta_beta();
        // ln B - (a-1) ln p - (b-1) ln q + 1/2 ln n - ln p - 1/2 ln q
        double v = log_beta_fn(a, b) - a * x.log_value + half_log_n - kHalfLog12;
        const double cq = b - 0.5;
        if (cq != 0.0) v -= cq * x.log_comp;
        return v;
    }
    // half-Cauchy on the s.d.: pi(p) = (2-p) / (pi sqrt(q) (1 - p q)), F = n / (p^2 q)
    return std::log(std::numbers::pi) - std::log1p(x.comp) + std::log1p(-x.value * x.comp) - x.log_value +
           half_log_n - kHalfLog12;
}

double detail_at(ModelClass m, const Point& x, const SuffStats& st) {
    const double s = static_cast<double>(st.s);
    const double n = static_cast<double>(st.n);
    if (m == ModelClass::Poisson) {
        const double sl = st.s == 0 ? 0.0 : s * x.log_value;
        return 0.5 - sl + n * x.value + st.log_gamma_sum;
    }
    const double sq = st.s == 0 ? 0.0 : s * x.log_comp;
    return 0.5 - sq - n * x.log_value;
}

double derivative_at(ModelClass m, const PriorSpec& prior, const Point& x, const SuffStats& st) {
    const double s = static_cast<double>(st.s);
    const double n = static_cast<double>(st.n);
    if (m == ModelClass::Poisson) {
        const double l = x.value;
        double d = n - s / l;
        if (prior.family == PriorSpec::Family::ConjugateExp || prior.family == PriorSpec::Family::CalibratedConjugate)
            d += 1.0 / prior.A - 0.5 / l;
        else
            d += 1.0 / (1.0 + l);
        return d;
    }
    const double p = x.value;
    const double q = x.comp;
    double d = s / q - n / p;
    if (prior.is_beta_kernel()) {
        d += -prior.beta_alpha() / p + (prior.beta_beta() - 0.5) / q;
    } else {
        d += 1.0 / (1.0 + q) + (2.0 * p - 1.0) / (1.0 - p * q) - 1.0 / p;
    }
    return d;
}

double total_at(ModelClass m, const PriorSpec& prior, const Point& x, const SuffStats& st) {
    const double a = assertion_at(m, prior, x, st.n);
    const double d = detail_at(m, x, st);
    if (std::isnan(a + d)) return kInf;
    return a + d;
}

Point boundary_point(ModelClass m) {
    return m == ModelClass::Poisson ? Point{0.0, -kInf, 1.0, 0.0} : Point{1.0, 0.0, 0.0, -kInf};
}

// sqrt(12 / F): sqrt(12 lambda / n) or sqrt(12 p^2 q / n).
double uncertainty_width(ModelClass m, const Point& x, std::int64_t n) {
    const double nn = static_cast<double>(n);
    if (m == ModelClass::Poisson) return std::sqrt(12.0 * x.value / nn);
    return x.value * std::sqrt(12.0 * x.comp / nn);
}

MmlFit make_fit(ModelClass m, const PriorSpec& prior, const Point& x, const SuffStats& st, bool boundary) {
    MmlFit fit;
    fit.estimate = x.value;
    fit.assertion_length = assertion_at(m, prior, x, st.n);
    fit.detail_length = detail_at(m, x, st);
    fit.message_length = fit.assertion_length + fit.detail_length;
    fit.boundary = boundary;
    fit.uncertainty_width = boundary ? 0.0 : uncertainty_width(m, x, st.n);
    return fit;
}

}  // namespace

PriorSpec PriorSpec::conjugate_exp(double A) {
    if (!(A > 0.0) || !std::isfinite(A)) throw std::invalid_argument("exponential prior requires A > 0");
    return {Family::ConjugateExp, ModelClass::Poisson, A, 0.0, 0.0};
}

PriorSpec PriorSpec::conjugate_beta(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("beta prior requires alpha, beta > 0");
    return {Family::ConjugateBeta, ModelClass::Geometric, 0.0, alpha, beta};
}

PriorSpec PriorSpec::calibrated(ModelClass m, double A) {
    const auto shape = calibrate_beta(A);
    return {Family::CalibratedConjugate, m, A, shape.alpha, shape.beta};
}

PriorSpec PriorSpec::half_cauchy_sd(ModelClass m) { return {Family::HalfCauchySD, m, 0.0, 0.0, 0.0}; }

PriorSpec PriorSpec::half_cauchy_mean(ModelClass m) {
    if (m == ModelClass::Poisson) return {Family::HalfCauchyMean, m, 0.0, 0.0, 0.0};
    return {Family::HalfCauchyMean, m, 0.0, 0.5, 0.5};
}

bool PriorSpec::is_beta_kernel() const {
    return applies_to == ModelClass::Geometric &&
           (family == Family::ConjugateBeta || family == Family::CalibratedConjugate ||
            family == Family::HalfCauchyMean);
}

double PriorSpec::beta_alpha() const { return alpha; }
double PriorSpec::beta_beta() const { return beta; }

std::string PriorSpec::describe() const {
    std::ostringstream os;
    switch (family) {
        case Family::ConjugateExp: os << "Exp(A=" << A << ")"; break;
        case Family::ConjugateBeta: os << "Beta(" << alpha << "," << beta << ")"; break;
        case Family::CalibratedConjugate:
            if (applies_to == ModelClass::Poisson) os << "Exp(A=" << A << ")";
            else os << "Beta(" << alpha << "," << beta << ")";
            break;
        case Family::HalfCauchySD: os << "HalfCauchy(sd)"; break;
        case Family::HalfCauchyMean: os << "HalfCauchy(sqrt mean)"; break;
    }
    return os.str();
}

BetaShape calibrate_beta(double A) {
    if (!(A > 1.0) || !std::isfinite(A)) throw std::domain_error("calibration undefined");
    const double v = A / (A - 1.0);
    return {v, v};
}

double prior_density(const PriorSpec& prior, double param) {
    if (prior.applies_to == ModelClass::Poisson) {
        if (!(param > 0.0) || !std::isfinite(param)) throw std::domain_error("parameter outside prior support");
        if (prior.family == PriorSpec::Family::ConjugateExp || prior.family == PriorSpec::Family::CalibratedConjugate)
            return std::exp(-param / prior.A) / prior.A;
        return 1.0 / (std::numbers::pi * std::sqrt(param) * (1.0 + param));
    }
    if (!(param > 0.0 && param < 1.0)) throw std::domain_error("parameter outside prior support");
    if (prior.is_beta_kernel()) {
        const double a = prior.beta_alpha();
        const double b = prior.beta_beta();
        return std::exp((a - 1.0) * std::log(param) + (b - 1.0) * std::log1p(-param) - log_beta_fn(a, b));
    }
    const double p = param;
    return (2.0 - p) / (std::numbers::pi * std::sqrt(1.0 - p) * (p * p - p + 1.0));
}

double mml87_total(ModelClass m, const PriorSpec& prior, double param, const SuffStats& st) {
    require_applicable(m, prior);
    if (m == ModelClass::Poisson) {
        if (!(param >= 0.0)) throw std::invalid_argument("parameter out of range");
        return total_at(m, prior, param == 0.0 ? boundary_point(m) : Point::poisson(param), st);
    }
    if (!(param > 0.0 && param <= 1.0)) throw std::invalid_argument("parameter out of range");
    return total_at(m, prior, param == 1.0 ? boundary_point(m) : Point::geometric(param), st);
}

double mml87_derivative(ModelClass m, const PriorSpec& prior, double param, const SuffStats& st) {
    require_applicable(m, prior);
    return derivative_at(m, prior, m == ModelClass::Poisson ? Point::poisson(param) : Point::geometric(param), st);
}

MmlFit mml87_message_length(ModelClass m, const PriorSpec& prior, double param, const SuffStats& st) {
    require_applicable(m, prior);
    bool boundary = false;
    Point x{};
    if (m == ModelClass::Poisson) {
        if (!(param >= 0.0) || !std::isfinite(param)) throw std::invalid_argument("parameter out of range");
        boundary = param == 0.0;
        x = boundary ? boundary_point(m) : Point::poisson(param);
    } else {
        if (!(param > 0.0 && param <= 1.0)) throw std::invalid_argument("parameter out of range");
        boundary = param == 1.0;
        x = boundary ? boundary_point(m) : Point::geometric(param);
    }
    MmlFit fit = make_fit(m, prior, x, st, boundary);
    if (!std::isfinite(fit.message_length)) throw std::domain_error("infinite codelength");
    return fit;
}

MmlFit mml87_message_length(ModelClass m, const PriorSpec& prior, double param, const CountData& d) {
    return mml87_message_length(m, prior, param, SuffStats::of(d));
}

MmlFit mml_estimate(ModelClass m, const PriorSpec& prior, const SuffStats& st) {
    require_applicable(m, prior);
    const bool poisson = m == ModelClass::Poisson;
    auto point = [&](double t) { return poisson ? Point::poisson_from_log(t) : Point::geometric_from_logit(t); };
    auto f = [&](double t) { return total_at(m, prior, point(t), st); };

    // Coarse scan on the unbounded scale, centred near the data.
    const double n = static_cast<double>(st.n);
    const double s = static_cast<double>(st.s);
    const double centre = poisson ? std::log((s + 0.5) / n) : std::log((n + 0.5) / (s + 0.5));
    constexpr int kGrid = 241;
    constexpr double kHalfWidth = 36.0;
    const double step = 2.0 * kHalfWidth / (kGrid - 1);
    int best = 0;
    double best_val = kInf;
    for (int i = 0; i < kGrid; ++i) {
        const double v = f(centre - kHalfWidth + step * i);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }

    // Infimum at lambda = 0 or p = 1 (only possible when s = 0).
    const Point edge = boundary_point(m);
    const double edge_val = st.s == 0 ? total_at(m, prior, edge, st) : kInf;
    if (edge_val == -kInf) throw std::domain_error("message length unbounded below");
    const int edge_index = poisson ? 0 : kGrid - 1;
    if (st.s == 0 && best == edge_index && edge_val <= best_val + 1e-12 * std::max(1.0, std::fabs(best_val)))
        return make_fit(m, prior, edge, st, true);
    if (!std::isfinite(best_val)) throw std::domain_error("infinite codelength");

    double lo = centre - kHalfWidth + step * std::max(best - 1, 0);
    double hi = centre - kHalfWidth + step * std::min(best + 1, kGrid - 1);
    const auto [t_brent, v_brent] = boost::math::tools::brent_find_minima(f, lo, hi, 52);
    (void)v_brent;

    // Polish: bisection on the sign of dI/dtheta (same sign on the t scale).
    auto slope = [&](double t) { return derivative_at(m, prior, point(t), st); };
    double a = t_brent - 1e-6 * std::max(1.0, std::fabs(t_brent));
    double b = t_brent + 1e-6 * std::max(1.0, std::fabs(t_brent));
    if (!(slope(a) < 0.0 && slope(b) > 0.0)) {
        a = lo;
        b = hi;
    }
    double t_star = t_brent;
    if (slope(a) < 0.0 && slope(b) > 0.0) {
        for (int it = 0; it < 200 && b - a > 0.0; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            if (slope(mid) < 0.0) a = mid; else b = mid;
        }
        t_star = 0.5 * (a + b);
        if (f(t_star) > f(t_brent) + 1e-9 * std::max(1.0, std::fabs(f(t_brent)))) t_star = t_brent;
    }
    MmlFit fit = make_fit(m, prior, point(t_star), st, false);
    if (st.s == 0 && edge_val < fit.message_length) return make_fit(m, prior, edge, st, true);
    return fit;
}

MmlFit mml_estimate(ModelClass m, const PriorSpec& prior, const CountData& d) {
    return mml_estimate(m, prior, SuffStats::of(d));
}

double poisson_exp_estimate(std::int64_t n, std::int64_t s, double A) {
    return (static_cast<double>(s) + 0.5) / (static_cast<double>(n) + 1.0 / A);
}

double poisson_half_cauchy_estimate(std::int64_t n, std::int64_t s) {
    const double nn = static_cast<double>(n);
    const double ss = static_cast<double>(s);
    return (std::sqrt(ss * ss + 2.0 * ss * (nn - 1.0) + (nn + 1.0) * (nn + 1.0)) + ss - nn - 1.0) / (2.0 * nn);
}

double geometric_beta_estimate_plugin(std::int64_t n, std::int64_t s, double alpha, double beta) {
    const double nn = static_cast<double>(n);
    return (nn + alpha) / (nn + alpha + beta + static_cast<double>(s) - 1.5);
}

double geometric_beta_estimate_stationary(std::int64_t n, std::int64_t s, double alpha, double beta) {
    const double nn = static_cast<double>(n);
    return (nn + alpha) / (nn + alpha + beta + static_cast<double>(s) - 0.5);
}

double geometric_half_cauchy_asymptote(std::int64_t n, std::int64_t s) {
    const double nn = static_cast<double>(n);
    return (nn + 1.0) / (2.5 * nn + static_cast<double>(s) + 2.0);
}

std::vector<double> quartic_geometric_coefficients(std::int64_t n, std::int64_t s) {
    const double nn = static_cast<double>(n);
    const double ss = static_cast<double>(s);
    return {-2.0 * nn - 2.0, 2.0 * ss + 5.0 * nn + 4.0, -(3.0 * ss + 6.0 * nn + 1.0), 3.0 * ss + 4.0 * nn - 1.0,
            -(ss + nn)};
}

std::vector<double> quartic_geometric_roots(std::int64_t n, std::int64_t s) {
    if (n < 1 || s < 0) throw std::invalid_argument("quartic requires n >= 1, s >= 0");
    return poly::real_roots(poly::Polynomial(quartic_geometric_coefficients(n, s)), 0.0, 1.0);
}

double bernoulli_message_length(std::int64_t n, std::int64_t n1, double p) {
    const double nn = static_cast<double>(n);
    const double k = static_cast<double>(n1);
    return -k * std::log(p) - (nn - k) * std::log1p(-p) + 0.5 * std::log(nn / (p * (1.0 - p))) - kHalfLog12 + 0.5;
}

double bernoulli_uncertainty_width(std::int64_t n, double p) {
    return std::sqrt(12.0 * p * (1.0 - p) / static_cast<double>(n));
}

BernoulliFit bernoulli_mml(std::int64_t n, std::int64_t n1) {
    if (n < 1 || n1 < 0 || n1 > n) throw std::invalid_argument("bernoulli requires 0 <= n1 <= n, n >= 1");
    const double p = (static_cast<double>(n1) + 0.5) / (static_cast<double>(n) + 1.0);
    return {p, bernoulli_message_length(n, n1, p), bernoulli_uncertainty_width(n, p)};
}

double log_kappa_approx(int k) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    const double kk = static_cast<double>(k);
    const double psi1 = -std::numbers::egamma;
    const double rhs = -0.5 * kk * std::log(2.0 * std::numbers::pi) + 0.5 * std::log(kk * std::numbers::pi) + psi1;
    return 2.0 * rhs / kk - 1.0;
}

double mml87_general(int k, double neg_log_prior, double log_det_fisher, double log_kappa, double negloglik) {
    const double kk = static_cast<double>(k);
    return neg_log_prior + 0.5 * log_det_fisher + 0.5 * kk * log_kappa + 0.5 * kk + negloglik;
}

double jeffreys_mml87_length(int k, std::int64_t n, double log_fisher_integral, double negloglik) {
    const double kk = static_cast<double>(k);
    return negloglik + log_fisher_integral + 0.5 * kk * std::log(static_cast<double>(n) / (2.0 * std::numbers::pi)) +
           0.5 * std::log(kk * std::numbers::pi) - std::numbers::egamma;
}

}  // namespace countsel::mml
