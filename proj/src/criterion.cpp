#include "countsel/criterion.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace countsel {

namespace {

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

Criterion Criterion::ranml(double mu_star, RanmlRegion region) {
    Criterion c;
    c.kind = Kind::Ranml;
    c.mu_star = mu_star;
    c.region = region;
    return c;
}

Criterion Criterion::anml_two_part() {
    Criterion c;
    c.kind = Kind::AnmlTwoPart;
    return c;
}

Criterion Criterion::objective_bayes() {
    Criterion c;
    c.kind = Kind::ObjBayes;
    return c;
}

Criterion Criterion::approx_objective_bayes() {
    Criterion c;
    c.kind = Kind::ApproxObjBayes;
    return c;
}

Criterion Criterion::mml_conjugate(double A, double alpha, double beta, BetaEstimator est) {
    Criterion c;
    c.kind = Kind::MmlConjugate;
    c.A = A;
    c.alpha = alpha;
    c.beta = beta;
    c.beta_estimator = est;
    return c;
}

Criterion Criterion::mml_calibrated(double A, BetaEstimator est) {
    Criterion c;
    c.kind = Kind::MmlCalibrated;
    c.A = A;
    c.beta_estimator = est;
    return c;
}

Criterion Criterion::mml_half_cauchy_sd() {
    Criterion c;
    c.kind = Kind::MmlHalfCauchySD;
    return c;
}

Criterion Criterion::mml_half_cauchy_mean(BetaEstimator est) {
    Criterion c;
    c.kind = Kind::MmlHalfCauchyMean;
    c.beta_estimator = est;
    return c;
}

Criterion Criterion::known_mu(double mu) {
    Criterion c;
    c.kind = Kind::KnownMu;
    c.mu = mu;
    return c;
}

std::string Criterion::name() const {
    switch (kind) {
        case Kind::Bic: return "bic";
        case Kind::Ranml: return "ranml" + format_number(mu_star);
        case Kind::AnmlTwoPart: return "anml2";
        case Kind::ObjBayes: return "obj-bayes";
        case Kind::ApproxObjBayes: return "approx-bayes";
        case Kind::MmlConjugate: return "mml-conj";
        case Kind::MmlCalibrated: return "mml-calib";
        case Kind::MmlHalfCauchySD: return "mml-hc-sd";
        case Kind::MmlHalfCauchyMean: return "mml-hc-mean";
        case Kind::KnownMu: return "known-mu";
    }
    return "unknown";
}

std::string Criterion::label() const {
    switch (kind) {
        case Kind::Bic: return "BIC";
        case Kind::Ranml: return "RANML " + format_number(mu_star);
        case Kind::AnmlTwoPart: return "ANML two-part";
        case Kind::ObjBayes: return "Objective Bayes";
        case Kind::ApproxObjBayes: return "Approx Bayes";
        case Kind::MmlConjugate: return "MML conjugate priors";
        case Kind::MmlCalibrated: return "MML calibrated conjugate";
        case Kind::MmlHalfCauchySD: return "MML half-Cauchy (s.d.)";
        case Kind::MmlHalfCauchyMean: return "MML half-Cauchy (mean)";
        case Kind::KnownMu: return "Known mu";
    }
    return "unknown";
}

bool Criterion::is_mml() const {
    return kind == Kind::MmlConjugate || kind == Kind::MmlCalibrated || kind == Kind::MmlHalfCauchySD ||
           kind == Kind::MmlHalfCauchyMean;
}

bool Criterion::depends_on_sufficient_stats_only() const {
    return kind != Kind::ObjBayes && kind != Kind::ApproxObjBayes;
}

mml::PriorSpec Criterion::prior(ModelClass m) const {
    using mml::PriorSpec;
    switch (kind) {
        case Kind::MmlConjugate:
            return m == ModelClass::Poisson ? PriorSpec::conjugate_exp(A) : PriorSpec::conjugate_beta(alpha, beta);
        case Kind::MmlCalibrated: return PriorSpec::calibrated(m, A);
        case Kind::MmlHalfCauchySD: return PriorSpec::half_cauchy_sd(m);
        case Kind::MmlHalfCauchyMean: return PriorSpec::half_cauchy_mean(m);
        default: throw std::logic_error("criterion has no MML prior");
    }
}

void Criterion::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    switch (kind) {
        case Kind::Ranml:
            if (!positive(mu_star)) throw std::invalid_argument("mu* must be positive");
            break;
        case Kind::KnownMu:
            if (!positive(mu)) throw std::invalid_argument("known mu must be positive");
            break;
        case Kind::MmlConjugate:
            if (!positive(A) || !positive(alpha) || !positive(beta))
                throw std::invalid_argument("conjugate prior hyperparameters must be positive");
            break;
        case Kind::MmlCalibrated:
            if (!(A > 1.0) || !std::isfinite(A)) throw std::invalid_argument("calibrated prior requires A > 1");
            break;
        default: break;
    }
}

std::optional<Criterion> parse_criterion(std::string_view name, std::optional<double> mu_star,
                                         std::optional<double> mu) {
    if (name == "bic") return Criterion::bic();
    if (name == "anml2") return Criterion::anml_two_part();
    if (name == "obj-bayes") return Criterion::objective_bayes();
    if (name == "approx-bayes") return Criterion::approx_objective_bayes();
    if (name == "mml-conj") return Criterion::mml_conjugate(5.0, 1.0, 1.0);
    if (name == "mml-calib") return Criterion::mml_calibrated(5.0);
    if (name == "mml-hc-sd") return Criterion::mml_half_cauchy_sd();
    if (name == "mml-hc-mean") return Criterion::mml_half_cauchy_mean();
    if (name == "known-mu") return Criterion::known_mu(mu.value_or(0.0));
    if (name.starts_with("ranml")) {
        const auto rest = name.substr(5);
        if (rest.empty()) {
            if (!mu_star) return std::nullopt;
            return Criterion::ranml(*mu_star);
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
        if (ec != std::errc() || ptr != rest.data() + rest.size() || !(v > 0.0)) return std::nullopt;
        return Criterion::ranml(v);
    }
    return std::nullopt;
}

std::vector<Criterion> reference_roster() {
    return {
        Criterion::bic(),
        Criterion::ranml(10.0, RanmlRegion::Extrapolate),
        Criterion::ranml(100.0, RanmlRegion::Extrapolate),
        Criterion::ranml(1000.0, RanmlRegion::Extrapolate),
        Criterion::anml_two_part(),
        Criterion::objective_bayes(),
        Criterion::approx_objective_bayes(),
        Criterion::mml_conjugate(5.0, 1.0, 1.0, BetaEstimator::Plugin),
        Criterion::mml_calibrated(5.0, BetaEstimator::Plugin),
        Criterion::mml_half_cauchy_sd(),
        Criterion::mml_half_cauchy_mean(BetaEstimator::Plugin),
        Criterion::known_mu(0.0),
    };
}

}  // namespace countsel
