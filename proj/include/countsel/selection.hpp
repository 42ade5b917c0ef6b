#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "countsel/counts_model.hpp"
#include "countsel/criterion.hpp"

namespace countsel {

// Raised when both codelengths are +inf and no limiting comparison exists.
class UndefinedCriterion : public std::domain_error {
public:
    UndefinedCriterion() : std::domain_error("criterion undefined on sample") {}
};

// Raised for criteria whose codelength is not a function of (n, s).
class RegretUnsupported : public std::invalid_argument {
public:
    RegretUnsupported() : std::invalid_argument("regret not a function of (n,s) for this criterion") {}
};

struct SelectionResult {
    Criterion criterion;
    double codelength_poisson = 0.0;
    double codelength_geometric = 0.0;
    ModelClass chosen = ModelClass::Geometric;
    double margin = 0.0;  // |L_P - L_G|; +inf when exactly one side is infinite

    bool tie = false;             // equal codelengths; geometric chosen
    bool boundary_mle = false;    // s = 0
    bool infinite = false;        // at least one codelength is +inf
    bool limit_decision = false;  // both infinite, decided by their divergence rates
};

// Codelength of one model under one criterion. Stateless apart from an
// optional cache of MML fits keyed by (criterion, model, n, s), which holds
// the parts of the codelength that do not depend on sum ln Gamma(x_i + 1).
class Evaluator {
public:
    explicit Evaluator(bool cache_mml = true) : cache_mml_(cache_mml) {}

    // Criteria that depend on the data only through (n, s, ln Gamma sum).
    double codelength(const Criterion& c, ModelClass m, const SuffStats& st);
    double codelength(const Criterion& c, ModelClass m, const CountData& d);

    SelectionResult evaluate(const Criterion& c, const CountData& d);

    std::size_t cache_size() const { return cache_.size(); }

private:
    double mml_codelength(const Criterion& c, ModelClass m, const SuffStats& st);

    struct Key {
        std::size_t criterion;
        int model;
        std::int64_t n;
        std::int64_t s;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };

    bool cache_mml_;
    std::vector<Criterion> known_;
    std::unordered_map<Key, double, KeyHash> cache_;
};

// Uncached convenience entry points.
SelectionResult evaluate(const Criterion& c, const CountData& d);

// Decision rule: strictly smaller codelength wins; exact ties go to geometric.
SelectionResult decide(const Criterion& c, double codelength_poisson, double codelength_geometric);

// Coding regret: codelength minus the negative log-likelihood at the MLE, as a
// function of (n, s). Throws RegretUnsupported for the objective Bayes codes.
double regret(const Criterion& c, ModelClass m, std::int64_t n, std::int64_t s);

// Pointwise regret for ascending s values.
std::vector<std::pair<std::int64_t, double>> regret_curve(const Criterion& c, ModelClass m, std::int64_t n,
                                                          std::span<const std::int64_t> s_values);

}  // namespace countsel
