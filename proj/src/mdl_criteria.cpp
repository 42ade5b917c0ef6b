#include "countsel/mdl_criteria.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace countsel::mdl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogStarConstant = std::log2(2.865604);

double half_log_n_over_2pi(std::int64_t n) {
    return 0.5 * std::log(static_cast<double>(n) / (2.0 * std::numbers::pi));
}

double negloglik_at_mle(ModelClass m, const SuffStats& st) { return negloglik(m, st.mean(), st); }

// Antiderivative of sqrt(F_1(u)).
double fisher_root_antiderivative(ModelClass m, double u) {
    return m == ModelClass::Poisson ? 2.0 * std::sqrt(u) : 2.0 * std::asinh(std::sqrt(u));
}

}  // namespace

double bic(ModelClass m, const SuffStats& st) {
    return negloglik_at_mle(m, st) + 0.5 * std::log(static_cast<double>(st.n));
}

double ranml_integral(ModelClass m, double mu_star) {
    if (!(mu_star > 0.0)) throw std::invalid_argument("mu* must be positive");
    return fisher_root_antiderivative(m, mu_star);
}

double ranml(ModelClass m, const SuffStats& st, double mu_star, RanmlRegion region) {
    const double integral = ranml_integral(m, mu_star);
    if (region == RanmlRegion::Strict && st.mean() > mu_star) return kInf;
    return negloglik_at_mle(m, st) + half_log_n_over_2pi(st.n) + std::log(integral);
}

double log2_star(std::int64_t b) {
    if (b < 1) throw std::invalid_argument("log-star undefined");
    double sum = 0.0;
    double term = std::log2(static_cast<double>(b));
    while (term > 0.0) {
        sum += term;
        term = std::log2(term);
    }
    return sum;
}

double log_star_codelength(std::int64_t b) {
    return (log2_star(b) + kLogStarConstant) * std::numbers::ln2;
}

std::int64_t two_part_index(double mu_hat) {
    if (!(mu_hat >= 0.0) || !std::isfinite(mu_hat)) throw std::invalid_argument("invalid mean estimate");
    if (mu_hat == 0.0) return 1;
    auto b = static_cast<std::int64_t>(std::ceil(std::log2(mu_hat)));
    while (std::ldexp(1.0, static_cast<int>(b - 1)) >= mu_hat) --b;
    while (std::ldexp(1.0, static_cast<int>(b)) < mu_hat) ++b;
    return b;
}

double two_part_region_integral(ModelClass m, std::int64_t b) {
    const double hi = std::ldexp(1.0, static_cast<int>(b));
    const double lo = std::ldexp(1.0, static_cast<int>(b - 1));
    return fisher_root_antiderivative(m, hi) - fisher_root_antiderivative(m, lo);
}

double two_part_index_codelength(std::int64_t b) { return log_star_codelength(b >= 1 ? b : 2 - b); }

double anml_two_part(ModelClass m, const SuffStats& st) {
    const std::int64_t b = two_part_index(st.mean());
    return negloglik_at_mle(m, st) + half_log_n_over_2pi(st.n) + std::log(two_part_region_integral(m, b)) +
           two_part_index_codelength(b);
}

double objective_bayes(ModelClass m, const CountData& d) {
    if (d.n() < 2) throw std::invalid_argument("objective Bayes requires at least two observations");
    const double x1 = static_cast<double>(d.values()[0]);
    const double s = static_cast<double>(d.s());
    const double n = static_cast<double>(d.n());
    if (m == ModelClass::Poisson) {
        const double tail_lg = d.log_gamma_sum() - log_gamma(x1 + 1.0);
        return log_gamma(x1 + 0.5) - log_gamma(s + 0.5) + (s + 0.5) * std::log(n) + tail_lg;
    }
    return -std::log(x1 + 0.5) - log_gamma(s + 0.5) - log_gamma(n) + log_gamma(n + s + 0.5);
}

double approx_objective_bayes_tail_mean(const CountData& d) {
    if (d.n() < 2) throw std::invalid_argument("objective Bayes requires at least two observations");
    return static_cast<double>(d.s() - d.values()[0]) / static_cast<double>(d.n() - 1);
}

double approx_objective_bayes(ModelClass m, const CountData& d) {
    const double tail_mean = approx_objective_bayes_tail_mean(d);
    if (tail_mean == 0.0) return kInf;
    const double x1 = static_cast<double>(d.values()[0]);
    const SuffStats tail{d.n() - 1, d.s() - d.values()[0], d.log_gamma_sum() - log_gamma(x1 + 1.0)};
    const double base = negloglik(m, tail_mean, tail) + half_log_n_over_2pi(d.n());
    if (m == ModelClass::Poisson)
        return base + tail_mean - x1 * std::log(tail_mean) + log_gamma(x1 + 0.5);
    return base + x1 * std::log1p(1.0 / tail_mean) + 0.5 * std::log(tail_mean) - std::log(x1 + 0.5);
}

double known_mu(ModelClass m, const SuffStats& st, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("known mu must be positive");
    return negloglik(m, mu, st);
}

}  // namespace countsel::mdl
