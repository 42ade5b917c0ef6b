#include "countsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "countsel/mdl_criteria.hpp"
#include "countsel/mml_core.hpp"

namespace countsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// MML length (without the ln Gamma sum) under the plug-in Beta estimator;
// estimates beyond p = 1 are clamped to the boundary.
double plugin_beta_length(const mml::PriorSpec& prior, const SuffStats& st) {
    double p = mml::geometric_beta_estimate_plugin(st.n, st.s, prior.beta_alpha(), prior.beta_beta());
    if (!(p > 0.0) || p > 1.0) p = 1.0;
    return mml::mml87_total(ModelClass::Geometric, prior, p, st);
}

}  // namespace

std::size_t Evaluator::KeyHash::operator()(const Key& k) const noexcept {
    std::size_t h = std::hash<std::int64_t>{}(k.s);
    h ^= std::hash<std::int64_t>{}(k.n) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= (k.criterion * 2 + static_cast<std::size_t>(k.model)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

double Evaluator::mml_codelength(const Criterion& c, ModelClass m, const SuffStats& st) {
    const SuffStats reduced{st.n, st.s, 0.0};
    auto compute = [&] {
        const auto prior = c.prior(m);
        if (m == ModelClass::Geometric && prior.is_beta_kernel() && c.beta_estimator == BetaEstimator::Plugin)
            return plugin_beta_length(prior, reduced);
        return mml::mml_estimate(m, prior, reduced).message_length;
    };
    const double lgs = m == ModelClass::Poisson ? st.log_gamma_sum : 0.0;
    if (!cache_mml_) return compute() + lgs;

    std::size_t idx = 0;
    while (idx < known_.size() && !(known_[idx] == c)) ++idx;
    if (idx == known_.size()) known_.push_back(c);
    const Key key{idx, static_cast<int>(m), st.n, st.s};
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, compute()).first;
    return it->second + lgs;
}

double Evaluator::codelength(const Criterion& c, ModelClass m, const SuffStats& st) {
    c.validate();
    switch (c.kind) {
        case Criterion::Kind::Bic: return mdl::bic(m, st);
        case Criterion::Kind::Ranml: return mdl::ranml(m, st, c.mu_star, c.region);
        case Criterion::Kind::AnmlTwoPart: return mdl::anml_two_part(m, st);
        case Criterion::Kind::KnownMu: return mdl::known_mu(m, st, c.mu);
        case Criterion::Kind::MmlConjugate:
        case Criterion::Kind::MmlCalibrated:
        case Criterion::Kind::MmlHalfCauchySD:
        case Criterion::Kind::MmlHalfCauchyMean: return mml_codelength(c, m, st);
        case Criterion::Kind::ObjBayes:
        case Criterion::Kind::ApproxObjBayes: throw RegretUnsupported();
    }
    throw std::logic_error("unhandled criterion");
}

double Evaluator::codelength(const Criterion& c, ModelClass m, const CountData& d) {
    if (c.kind == Criterion::Kind::ObjBayes) return mdl::objective_bayes(m, d);
    if (c.kind == Criterion::Kind::ApproxObjBayes) return mdl::approx_objective_bayes(m, d);
    return codelength(c, m, SuffStats::of(d));
}

SelectionResult decide(const Criterion& c, double codelength_poisson, double codelength_geometric) {
    SelectionResult r;
    r.criterion = c;
    r.codelength_poisson = codelength_poisson;
    r.codelength_geometric = codelength_geometric;
    r.infinite = std::isinf(codelength_poisson) || std::isinf(codelength_geometric);
    if (std::isinf(codelength_poisson) && std::isinf(codelength_geometric)) throw UndefinedCriterion();
    if (codelength_poisson < codelength_geometric) {
        r.chosen = ModelClass::Poisson;
    } else {
        r.chosen = ModelClass::Geometric;
        r.tie = codelength_poisson == codelength_geometric;
    }
    r.margin = std::fabs(codelength_poisson - codelength_geometric);
    return r;
}

SelectionResult Evaluator::evaluate(const Criterion& c, const CountData& d) {
    const double lp = codelength(c, ModelClass::Poisson, d);
    const double lg = codelength(c, ModelClass::Geometric, d);
    SelectionResult r;
    if (c.kind == Criterion::Kind::ApproxObjBayes && mdl::approx_objective_bayes_tail_mean(d) == 0.0) {
        // As the tail mean m -> 0 the geometric length minus the Poisson
        // length behaves like 1/2 ln m, so geometric wins in the limit.
        r.criterion = c;
        r.codelength_poisson = lp;
        r.codelength_geometric = lg;
        r.chosen = ModelClass::Geometric;
        r.margin = kInf;
        r.infinite = true;
        r.limit_decision = true;
    } else {
        r = decide(c, lp, lg);
    }
    r.boundary_mle = d.s() == 0;
    return r;
}

SelectionResult evaluate(const Criterion& c, const CountData& d) {
    Evaluator ev(false);
    return ev.evaluate(c, d);
}

double regret(const Criterion& c, ModelClass m, std::int64_t n, std::int64_t s) {
    if (!c.depends_on_sufficient_stats_only()) throw RegretUnsupported();
    if (n < 1 || s < 0) throw std::invalid_argument("regret requires n >= 1 and s >= 0");
    const SuffStats st{n, s, 0.0};
    Evaluator ev(false);
    return ev.codelength(c, m, st) - negloglik(m, st.mean(), st);
}

std::vector<std::pair<std::int64_t, double>> regret_curve(const Criterion& c, ModelClass m, std::int64_t n,
                                                          std::span<const std::int64_t> s_values) {
    if (!c.depends_on_sufficient_stats_only()) throw RegretUnsupported();
    if (!std::is_sorted(s_values.begin(), s_values.end())) throw std::invalid_argument("s values must be ascending");
    std::vector<std::pair<std::int64_t, double>> out;
    out.reserve(s_values.size());
    for (std::int64_t s : s_values) out.emplace_back(s, regret(c, m, n, s));
    return out;
}

}  // namespace countsel
