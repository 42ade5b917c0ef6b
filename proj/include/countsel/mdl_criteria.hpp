#pragma once

#include <cstdint>

#include "countsel/counts_model.hpp"
#include "countsel/criterion.hpp"

namespace countsel::mdl {

// Codelengths in nits. Both models are compared through the mean
// parameterization; at s = 0 the MLE sits on the boundary and the
// negative log-likelihood uses its 0 ln 0 = 0 limit.

// l(x | mu_hat) + 1/2 ln n
double bic(ModelClass m, const SuffStats& st);

// Integral of sqrt(F_1(u)) over (0, mu*]: 2 sqrt(mu*) for Poisson,
// 2 ln(sqrt(mu*) + sqrt(mu* + 1)) for geometric.
double ranml_integral(ModelClass m, double mu_star);
// l(x | mu_hat) + 1/2 ln(n / 2 pi) + ln(integral). Strict region returns +inf
// when mu_hat > mu*.
double ranml(ModelClass m, const SuffStats& st, double mu_star, RanmlRegion region = RanmlRegion::Strict);

// log2*(b) = log2 b + log2 log2 b + ..., positive terms only; log2*(1) = 0.
double log2_star(std::int64_t b);
// [log2*(b) + log2(2.865604)] ln 2. Throws std::invalid_argument("log-star undefined") for b < 1.
double log_star_codelength(std::int64_t b);

// Smallest integer b with mu_hat <= 2^b (b = ceil(log2 mu_hat)); b = 1 for mu_hat = 0.
std::int64_t two_part_index(double mu_hat);
// Integral of sqrt(F_1) over the dyadic region (2^(b-1), 2^b].
double two_part_region_integral(ModelClass m, std::int64_t b);
// Codelength of the region index: l*(b) for b >= 1, l*(2 - b) for b <= 0.
double two_part_index_codelength(std::int64_t b);
double anml_two_part(ModelClass m, const SuffStats& st);

// Jeffreys posterior on x_1 used as the prior for x_2..x_n. x_1 is the first
// value in sample order. Throws std::invalid_argument for n < 2.
double objective_bayes(ModelClass m, const CountData& d);
// Asymptotic form of the above; +inf when the MLE on x_2..x_n is zero.
double approx_objective_bayes(ModelClass m, const CountData& d);
// Mean estimate on x_2..x_n.
double approx_objective_bayes_tail_mean(const CountData& d);

// l(x | mu) at the true mean.
double known_mu(ModelClass m, const SuffStats& st, double mu);

}  // namespace countsel::mdl
