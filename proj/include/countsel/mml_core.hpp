#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "countsel/counts_model.hpp"

namespace countsel::mml {

// Prior families for the one-parameter MML87 codes. Poisson priors act on the
// rate lambda, geometric priors on the success probability p.
struct PriorSpec {
    enum class Family { ConjugateExp, ConjugateBeta, CalibratedConjugate, HalfCauchySD, HalfCauchyMean };

    Family family;
    ModelClass applies_to;
    double A = 0.0;      // exponential scale (prior mean of lambda)
    double alpha = 0.0;  // Beta shape on p
    double beta = 0.0;

    static PriorSpec conjugate_exp(double A);
    static PriorSpec conjugate_beta(double alpha, double beta);
    // Exp(A) for Poisson; Beta(A/(A-1), A/(A-1)) for geometric. Requires A > 1.
    static PriorSpec calibrated(ModelClass m, double A);
    // Half-Cauchy on the standard deviation.
    static PriorSpec half_cauchy_sd(ModelClass m);
    // Half-Cauchy on sqrt(mean): identical to half_cauchy_sd for Poisson and
    // to Beta(1/2, 1/2) for geometric.
    static PriorSpec half_cauchy_mean(ModelClass m);

    bool is_beta_kernel() const;  // geometric prior with a Beta(alpha, beta) density
    double beta_alpha() const;
    double beta_beta() const;
    std::string describe() const;
};

// alpha = beta = A / (A - 1); throws std::domain_error("calibration undefined") for A <= 1.
struct BetaShape {
    double alpha;
    double beta;
};
BetaShape calibrate_beta(double A);

double prior_density(const PriorSpec& prior, double param);

struct MmlFit {
    double estimate = 0.0;  // lambda for Poisson, p for geometric
    double message_length = 0.0;
    double assertion_length = 0.0;
    double detail_length = 0.0;
    double uncertainty_width = 0.0;  // sqrt(12 / F(estimate)); 0 at a boundary
    bool boundary = false;
};

// I(x, theta) split into assertion (-ln pi + 1/2 ln F - 1/2 ln 12) and detail
// (1/2 + negloglik). The singular log terms shared by prior and Fisher
// information are cancelled analytically, so boundary limits are evaluated
// exactly (lambda = 0, p = 1). Throws std::domain_error("infinite codelength")
// when the total diverges at the requested parameter.
MmlFit mml87_message_length(ModelClass m, const PriorSpec& prior, double param, const SuffStats& st);
MmlFit mml87_message_length(ModelClass m, const PriorSpec& prior, double param, const CountData& d);

// Raw total I(theta); +inf where divergent instead of throwing.
double mml87_total(ModelClass m, const PriorSpec& prior, double param, const SuffStats& st);

// dI/dtheta in the native parameterization.
double mml87_derivative(ModelClass m, const PriorSpec& prior, double param, const SuffStats& st);

// Global minimizer of I(x, theta) over the closed parameter space. Bracketed
// golden-section/parabolic search on log(lambda) or logit(p), polished by
// bisection on dI/dtheta. A boundary infimum is returned with boundary = true.
MmlFit mml_estimate(ModelClass m, const PriorSpec& prior, const SuffStats& st);
MmlFit mml_estimate(ModelClass m, const PriorSpec& prior, const CountData& d);

// Closed-form estimators.
double poisson_exp_estimate(std::int64_t n, std::int64_t s, double A);             // (s+1/2)/(n+1/A)
double poisson_half_cauchy_estimate(std::int64_t n, std::int64_t s);               // quadratic root
double geometric_beta_estimate_plugin(std::int64_t n, std::int64_t s, double alpha,
                                         double beta);                             // (n+a)/(n+a+b+s-3/2)
double geometric_beta_estimate_stationary(std::int64_t n, std::int64_t s, double alpha,
                                          double beta);                            // (n+a)/(n+a+b+s-1/2)
// Large-s approximation (n+1)/((5/2)n+s+2) of the half-Cauchy geometric estimate.
double geometric_half_cauchy_asymptote(std::int64_t n, std::int64_t s);

// q_G(p) = -(s+n)p^4 + (3s+4n-1)p^3 - (3s+6n+1)p^2 + (2s+5n+4)p - 2n - 2
std::vector<double> quartic_geometric_coefficients(std::int64_t n, std::int64_t s);
// Real roots of q_G in (0, 1], ascending.
std::vector<double> quartic_geometric_roots(std::int64_t n, std::int64_t s);

// Bernoulli trials under a uniform prior.
struct BernoulliFit {
    double estimate;
    double message_length;
    double uncertainty_width;
};
double bernoulli_message_length(std::int64_t n, std::int64_t n1, double p);
BernoulliFit bernoulli_mml(std::int64_t n, std::int64_t n1);
double bernoulli_uncertainty_width(std::int64_t n, double p);

// ln kappa_k from the asymptotic lattice-constant approximation
// (k/2)(ln kappa_k + 1) ~ -(k/2) ln(2 pi) + 1/2 ln(k pi) + psi(1).
double log_kappa_approx(int k);
// General k-parameter MML87 length given its ingredients.
double mml87_general(int k, double neg_log_prior, double log_det_fisher, double log_kappa, double negloglik);
// MML87 under the Jeffreys prior with the approximated kappa_k:
// negloglik + ln(int sqrt|F1|) + (k/2) ln(n / 2 pi) + 1/2 ln(k pi) + psi(1).
double jeffreys_mml87_length(int k, std::int64_t n, double log_fisher_integral, double negloglik);

}  // namespace countsel::mml
