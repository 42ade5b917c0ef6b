#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "countsel/random.hpp"

namespace countsel {

enum class ModelClass { Poisson, Geometric };

std::string_view to_string(ModelClass m);

// ln Gamma(x), thread-safe (does not touch signgam).
double log_gamma(double x);

// Immutable sample of non-negative counts with cached sufficient statistics.
class CountData {
public:
    // Throws std::invalid_argument("empty sample") or ("invalid count").
    explicit CountData(std::vector<std::int64_t> values);

    std::span<const std::int64_t> values() const { return values_; }
    std::int64_t n() const { return static_cast<std::int64_t>(values_.size()); }
    std::int64_t s() const { return s_; }
    double log_gamma_sum() const { return log_gamma_sum_; }
    double mean() const { return static_cast<double>(s_) / static_cast<double>(n()); }

private:
    std::vector<std::int64_t> values_;
    std::int64_t s_ = 0;
    double log_gamma_sum_ = 0.0;
};

CountData suff_stats(std::vector<std::int64_t> values);

// Sufficient-statistic view used by criteria whose codelength depends on the
// data only through (n, s) plus the data-only sum of ln Gamma(x_i + 1).
struct SuffStats {
    std::int64_t n = 0;
    std::int64_t s = 0;
    double log_gamma_sum = 0.0;

    static SuffStats of(const CountData& d) { return {d.n(), d.s(), d.log_gamma_sum()}; }
    double mean() const { return static_cast<double>(s) / static_cast<double>(n); }
};

// Geometric parameter in either success-probability or mean form.
class GeomParam {
public:
    enum class Kind { SuccessProb, Mean };

    static GeomParam success_prob(double p);
    static GeomParam mean(double mu);

    Kind kind() const { return kind_; }
    double value() const { return value_; }
    double p() const;
    double mu() const;

private:
    GeomParam(Kind k, double v) : kind_(k), value_(v) {}
    Kind kind_;
    double value_;
};

// Negative log-likelihoods in nits. The geometric form follows whichever
// parameterization is given; boundary parameters use 0 ln 0 = 0.
double negloglik_poisson(double lambda, const SuffStats& st);
double negloglik_geometric(GeomParam param, const SuffStats& st);
double negloglik_poisson(double lambda, const CountData& d);
double negloglik_geometric(GeomParam param, const CountData& d);
// Model-generic entry: Poisson rate, or the geometric mean parameter.
double negloglik(ModelClass m, double mean_param, const SuffStats& st);

// MLEs. Both rate and mean estimates are s/n; p_hat = n/(n+s).
double mle_mean(const SuffStats& st);
double mle_geometric_p(const SuffStats& st);
double mle(ModelClass m, const CountData& d);  // lambda_hat or p_hat

// Fisher information for n observations. Throws std::domain_error at the boundary.
double fisher_poisson(double lambda, std::int64_t n);
double fisher_geometric(GeomParam param, std::int64_t n);

// Exact samplers.
std::int64_t draw_poisson(double mean, Stream& rng);
std::int64_t draw_geometric(double mean, Stream& rng);
CountData sample(ModelClass m, double mean, std::int64_t n, Stream& rng);
// Fills out with n draws without building a CountData; used on hot paths.
void sample_into(ModelClass m, double mean, std::span<std::int64_t> out, Stream& rng);

}  // namespace countsel
