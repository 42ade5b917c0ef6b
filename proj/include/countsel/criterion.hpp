#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "countsel/counts_model.hpp"
#include "countsel/mml_core.hpp"

namespace countsel {

// How restricted ANML treats a sample whose mean estimate lies beyond mu*.
enum class RanmlRegion {
    Strict,       // +inf codelength (infinite regret)
    Extrapolate,  // evaluate the fixed-region formula anyway
};

// Estimator used by MML criteria whose geometric prior is a Beta density.
enum class BetaEstimator {
    Argmin,     // numeric minimizer of the MML87 length
    Plugin,     // (n+a)/(n+a+b+s-3/2) plugged into the MML87 length, clamped to p <= 1
};

struct Criterion {
    enum class Kind {
        Bic,
        Ranml,
        AnmlTwoPart,
        ObjBayes,
        ApproxObjBayes,
        MmlConjugate,
        MmlCalibrated,
        MmlHalfCauchySD,
        MmlHalfCauchyMean,
        KnownMu,
    };

    Kind kind = Kind::Bic;
    double mu_star = 0.0;                    // Ranml
    RanmlRegion region = RanmlRegion::Strict;
    double mu = 0.0;                         // KnownMu; 0 = bind to the generating mean
    double A = 5.0;                          // MmlConjugate / MmlCalibrated
    double alpha = 1.0;                      // MmlConjugate
    double beta = 1.0;
    BetaEstimator beta_estimator = BetaEstimator::Argmin;

    static Criterion bic() { return {}; }
    static Criterion ranml(double mu_star, RanmlRegion region = RanmlRegion::Strict);
    static Criterion anml_two_part();
    static Criterion objective_bayes();
    static Criterion approx_objective_bayes();
    static Criterion mml_conjugate(double A, double alpha, double beta,
                                   BetaEstimator est = BetaEstimator::Argmin);
    static Criterion mml_calibrated(double A, BetaEstimator est = BetaEstimator::Argmin);
    static Criterion mml_half_cauchy_sd();
    static Criterion mml_half_cauchy_mean(BetaEstimator est = BetaEstimator::Argmin);
    static Criterion known_mu(double mu);

    // Flag name, e.g. "bic", "ranml10", "mml-conj", "known-mu".
    std::string name() const;
    // Row label as used in result tables, e.g. "RANML 100".
    std::string label() const;

    bool is_mml() const;
    // Codelength depends on data only through (n, s) and the ln Gamma sum.
    bool depends_on_sufficient_stats_only() const;
    // MML prior for the given model class; only valid when is_mml().
    mml::PriorSpec prior(ModelClass m) const;

    // Throws std::invalid_argument on invalid hyperparameters.
    void validate() const;

    bool operator==(const Criterion&) const = default;
};

// Parses a flag name. `mu_star` / `mu` fill in parameterized criteria when the
// name does not carry the value ("ranml" and "known-mu").
std::optional<Criterion> parse_criterion(std::string_view name, std::optional<double> mu_star = {},
                                         std::optional<double> mu = {});

// The twelve criteria of the comparison tables, with their reference settings:
// RANML mu* in {10, 100, 1000} (formula evaluated outside the region), A = 5,
// alpha = beta = 1 for the conjugate prior, Beta-kernel MML using the
// closed-form plug-in estimator, and known-mu bound to the generating mean.
std::vector<Criterion> reference_roster();

}  // namespace countsel
