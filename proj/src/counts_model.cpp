#include "countsel/counts_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace countsel {

namespace {

// a * ln(b) with 0 ln 0 = 0.
double xlogy(double a, double b) {
    if (a == 0.0) return 0.0;
    return a * std::log(b);
}

}  // namespace

std::string_view to_string(ModelClass m) {
    return m == ModelClass::Poisson ? "poisson" : "geometric";
}

double log_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

CountData::CountData(std::vector<std::int64_t> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("empty sample");
    for (std::int64_t v : values_) {
        if (v < 0) throw std::invalid_argument("invalid count");
        s_ += v;
        log_gamma_sum_ += log_gamma(static_cast<double>(v) + 1.0);
    }
}

CountData suff_stats(std::vector<std::int64_t> values) { return CountData(std::move(values)); }

GeomParam GeomParam::success_prob(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("parameter out of range");
    return {Kind::SuccessProb, p};
}

GeomParam GeomParam::mean(double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("parameter out of range");
    return {Kind::Mean, mu};
}

double GeomParam::p() const { return kind_ == Kind::SuccessProb ? value_ : 1.0 / (1.0 + value_); }
double GeomParam::mu() const { return kind_ == Kind::Mean ? value_ : (1.0 - value_) / value_; }

double negloglik_poisson(double lambda, const SuffStats& st) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("parameter out of range");
    if (lambda == 0.0 && st.s > 0) throw std::domain_error("degenerate parameter");
    const double n = static_cast<double>(st.n);
    return -xlogy(static_cast<double>(st.s), lambda) + lambda * n + st.log_gamma_sum;
}

double negloglik_geometric(GeomParam param, const SuffStats& st) {
    const double s = static_cast<double>(st.s);
    const double n = static_cast<double>(st.n);
    if (param.kind() == GeomParam::Kind::SuccessProb) {
        const double p = param.value();
        if (p == 1.0 && st.s > 0) throw std::domain_error("degenerate parameter");
        return -xlogy(s, 1.0 - p) - n * std::log(p);
    }
    const double mu = param.value();
    if (mu == 0.0 && st.s > 0) throw std::domain_error("degenerate parameter");
    return -xlogy(s, mu) + (s + n) * std::log1p(mu);
}

double negloglik_poisson(double lambda, const CountData& d) {
    return negloglik_poisson(lambda, SuffStats::of(d));
}

double negloglik_geometric(GeomParam param, const CountData& d) {
    return negloglik_geometric(param, SuffStats::of(d));
}

double negloglik(ModelClass m, double mean_param, const SuffStats& st) {
    return m == ModelClass::Poisson ? negloglik_poisson(mean_param, st)
                                    : negloglik_geometric(GeomParam::mean(mean_param), st);
}

double mle_mean(const SuffStats& st) { return st.mean(); }

double mle_geometric_p(const SuffStats& st) {
    return static_cast<double>(st.n) / static_cast<double>(st.n + st.s);
}

double mle(ModelClass m, const CountData& d) {
    const auto st = SuffStats::of(d);
    return m == ModelClass::Poisson ? mle_mean(st) : mle_geometric_p(st);
}

double fisher_poisson(double lambda, std::int64_t n) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::domain_error("Fisher information undefined at boundary");
    return static_cast<double>(n) / lambda;
}

double fisher_geometric(GeomParam param, std::int64_t n) {
    const double nn = static_cast<double>(n);
    if (param.kind() == GeomParam::Kind::SuccessProb) {
        const double p = param.value();
        if (!(p > 0.0 && p < 1.0)) throw std::domain_error("Fisher information undefined at boundary");
        return nn / (p * p * (1.0 - p));
    }
    const double mu = param.value();
    if (!(mu > 0.0)) throw std::domain_error("Fisher information undefined at boundary");
    return nn / (mu * (1.0 + mu));
}

namespace {

// Sequential-search inversion; exact, cost O(mean) uniforms-free steps.
std::int64_t poisson_inversion(double mean, Stream& rng) {
    double u = rng.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::int64_t k = 0;
    while (u > cdf) {
        ++k;
        p *= mean / static_cast<double>(k);
        const double next = cdf + p;
        if (next == cdf) break;  // tail exhausted in double precision
        cdf = next;
    }
    return k;
}

// Hormann's transformed rejection with squeeze (PTRS), exact for mean >= 10.
std::int64_t poisson_ptrs(double mean, Stream& rng) {
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - log_gamma(k + 1.0))
            return static_cast<std::int64_t>(k);
    }
}

}  // namespace

std::int64_t draw_poisson(double mean, Stream& rng) {
    if (!(mean > 0.0) || !std::isfinite(mean)) throw std::invalid_argument("mean must be positive");
    return mean <= 30.0 ? poisson_inversion(mean, rng) : poisson_ptrs(mean, rng);
}

std::int64_t draw_geometric(double mean, Stream& rng) {
    if (!(mean > 0.0) || !std::isfinite(mean)) throw std::invalid_argument("mean must be positive");
    // ln(1 - p) with p = 1/(1+mean)
    const double log_q = std::log(mean / (1.0 + mean));
    return static_cast<std::int64_t>(std::floor(std::log(rng.uniform()) / log_q));
}

void sample_into(ModelClass m, double mean, std::span<std::int64_t> out, Stream& rng) {
    if (!(mean > 0.0) || !std::isfinite(mean)) throw std::invalid_argument("mean must be positive");
    for (auto& x : out) x = m == ModelClass::Poisson ? draw_poisson(mean, rng) : draw_geometric(mean, rng);
}

CountData sample(ModelClass m, double mean, std::int64_t n, Stream& rng) {
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    std::vector<std::int64_t> v(static_cast<std::size_t>(n));
    sample_into(m, mean, v, rng);
    return CountData(std::move(v));
}

}  // namespace countsel
