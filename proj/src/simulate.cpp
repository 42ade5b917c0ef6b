#include "countsel/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "countsel/counts_model.hpp"
#include "countsel/random.hpp"
#include "countsel/selection.hpp"

namespace countsel::sim {

namespace {

constexpr std::uint64_t kDetectionTag = 1;
constexpr std::uint64_t kBiasTag = 2;

std::vector<Criterion> bind_known_mu(const std::vector<Criterion>& criteria, double mean) {
    std::vector<Criterion> out = criteria;
    for (auto& c : out)
        if (c.kind == Criterion::Kind::KnownMu && c.mu == 0.0) c.mu = mean;
    return out;
}

void record(Tally& t, const Criterion& c, Evaluator& ev, const CountData& d, ModelClass truth) {
    const bool geometric_truth = truth == ModelClass::Geometric;
    (geometric_truth ? t.trials_geometric : t.trials_poisson)++;
    if (d.s() == 0) ++t.boundary;
    ModelClass chosen;
    try {
        const auto r = ev.evaluate(c, d);
        chosen = r.chosen;
        if (r.tie) ++t.ties;
        if (r.limit_decision) ++t.limit_decisions;
        else if (r.infinite) ++t.infinite;
    } catch (const UndefinedCriterion&) {
        ++t.undefined;
        chosen = geometric_truth ? ModelClass::Poisson : ModelClass::Geometric;
    }
    if (chosen == ModelClass::Geometric) ++t.selected_geometric;
    if (chosen == truth) (geometric_truth ? t.correct_geometric : t.correct_poisson)++;
}

std::int64_t shard_begin(std::int64_t reps, int shards, int k) {
    return (reps / shards) * k + (reps % shards) * k / shards;
}

// Runs `work(shard)` for every shard, at most hardware_concurrency at a time,
// and merges the per-shard tallies in shard order.
template <typename Work>
std::vector<Tally> run_shards(int shards, std::size_t cells, Work work) {
    std::vector<Tally> total(cells);
    const int width = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    for (int start = 0; start < shards; start += width) {
        std::vector<std::future<std::vector<Tally>>> jobs;
        const int stop = std::min(shards, start + width);
        for (int k = start; k < stop; ++k) jobs.push_back(std::async(std::launch::async, work, k));
        for (auto& j : jobs) {
            const auto part = j.get();
            for (std::size_t i = 0; i < cells; ++i) total[i] += part[i];
        }
    }
    return total;
}

void finalize(ExperimentReport& report) {
    for (auto& cell : report.cells) {
        const Tally& t = cell.tally;
        if (report.kind == ExperimentKind::Detection) {
            cell.pct_geometric = t.trials_geometric ? 100.0 * t.correct_geometric / t.trials_geometric : 0.0;
            cell.pct_poisson = t.trials_poisson ? 100.0 * t.correct_poisson / t.trials_poisson : 0.0;
            cell.score = 0.5 * (cell.pct_geometric + cell.pct_poisson);
        } else {
            const auto trials = t.trials_geometric + t.trials_poisson;
            cell.pct_geometric = trials ? 100.0 * t.selected_geometric / trials : 0.0;
            cell.pct_poisson = trials ? 100.0 - cell.pct_geometric : 0.0;
            cell.score = 2.0 * std::fabs(cell.pct_geometric - 50.0);
        }
    }
    assign_ranks(report);
}

}  // namespace

void ExperimentConfig::validate() const {
    if (means.empty()) throw std::invalid_argument("at least one mean is required");
    for (double m : means)
        if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("means must be positive");
    if (sample_size < 1) throw std::invalid_argument("sample size must be positive");
    if (replications < 1) throw std::invalid_argument("replications must be positive");
    if (criteria.empty()) throw std::invalid_argument("at least one criterion is required");
    if (shards < 1) throw std::invalid_argument("shards must be positive");
    for (const auto& c : criteria) {
        if (c.kind == Criterion::Kind::KnownMu && c.mu == 0.0) continue;
        c.validate();
    }
}

Tally& Tally::operator+=(const Tally& o) {
    trials_geometric += o.trials_geometric;
    trials_poisson += o.trials_poisson;
    correct_geometric += o.correct_geometric;
    correct_poisson += o.correct_poisson;
    selected_geometric += o.selected_geometric;
    undefined += o.undefined;
    infinite += o.infinite;
    limit_decisions += o.limit_decisions;
    ties += o.ties;
    boundary += o.boundary;
    return *this;
}

const CellReport& ExperimentReport::cell(double mean, const std::string& criterion_name) const {
    for (const auto& c : cells)
        if (c.mean == mean && c.criterion.name() == criterion_name) return c;
    throw std::out_of_range("no such cell: " + criterion_name);
}

Tally ExperimentReport::degenerate_totals() const {
    Tally t;
    for (const auto& c : cells) t += c.tally;
    return t;
}

void assign_ranks(ExperimentReport& report) {
    const bool descending = report.kind == ExperimentKind::Detection;
    for (std::size_t begin = 0; begin < report.cells.size();) {
        std::size_t end = begin;
        while (end < report.cells.size() && report.cells[end].mean == report.cells[begin].mean) ++end;
        std::vector<std::pair<long long, std::size_t>> keyed;
        for (std::size_t i = begin; i < end; ++i) {
            const auto key = std::llround(report.cells[i].score * 100.0);
            keyed.emplace_back(descending ? -key : key, i);
        }
        std::sort(keyed.begin(), keyed.end());
        for (std::size_t a = 0; a < keyed.size();) {
            std::size_t b = a;
            while (b < keyed.size() && keyed[b].first == keyed[a].first) ++b;
            const double shared = 0.5 * static_cast<double>(a + 1 + b);  // mean of ranks a+1..b
            for (std::size_t j = a; j < b; ++j) report.cells[keyed[j].second].rank = shared;
            a = b;
        }
        begin = end;
    }
}

ExperimentReport run_detection_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentReport report;
    report.kind = ExperimentKind::Detection;
    report.config = config;
    const std::size_t nc = config.criteria.size();
    for (std::size_t mi = 0; mi < config.means.size(); ++mi) {
        const double mean = config.means[mi];
        const auto criteria = bind_known_mu(config.criteria, mean);
        auto work = [&, mi, mean](int shard) {
            std::vector<Tally> tallies(nc);
            Evaluator ev;
            const auto first = shard_begin(config.replications, config.shards, shard);
            const auto last = shard_begin(config.replications, config.shards, shard + 1);
            std::vector<std::int64_t> draws(static_cast<std::size_t>(config.sample_size));
            for (ModelClass truth : {ModelClass::Poisson, ModelClass::Geometric}) {
                Stream rng = Stream::derive(config.seed, {kDetectionTag, mi, static_cast<std::uint64_t>(truth),
                                                          static_cast<std::uint64_t>(shard)});
                for (auto r = first; r < last; ++r) {
                    sample_into(truth, mean, draws, rng);
                    const CountData d(draws);
                    for (std::size_t ci = 0; ci < nc; ++ci) record(tallies[ci], criteria[ci], ev, d, truth);
                }
            }
            return tallies;
        };
        const auto totals = run_shards(config.shards, nc, work);
        for (std::size_t ci = 0; ci < nc; ++ci) report.cells.push_back({mean, criteria[ci], totals[ci]});
    }
    finalize(report);
    return report;
}

ExperimentReport run_bias_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentReport report;
    report.kind = ExperimentKind::Bias;
    report.config = config;
    const std::size_t nc = config.criteria.size();
    for (std::size_t mi = 0; mi < config.means.size(); ++mi) {
        const double mean = config.means[mi];
        const auto criteria = bind_known_mu(config.criteria, mean);
        auto work = [&, mi, mean](int shard) {
            std::vector<Tally> tallies(nc);
            Evaluator ev;
            const auto first = shard_begin(config.replications, config.shards, shard);
            const auto last = shard_begin(config.replications, config.shards, shard + 1);
            std::vector<std::int64_t> draws(static_cast<std::size_t>(config.sample_size));
            Stream rng = Stream::derive(config.seed, {kBiasTag, mi, static_cast<std::uint64_t>(shard)});
            for (auto r = first; r < last; ++r) {
                const ModelClass truth = rng.uniform() < 0.5 ? ModelClass::Poisson : ModelClass::Geometric;
                sample_into(truth, mean, draws, rng);
                const CountData d(draws);
                for (std::size_t ci = 0; ci < nc; ++ci) record(tallies[ci], criteria[ci], ev, d, truth);
            }
            return tallies;
        };
        const auto totals = run_shards(config.shards, nc, work);
        for (std::size_t ci = 0; ci < nc; ++ci) report.cells.push_back({mean, criteria[ci], totals[ci]});
    }
    finalize(report);
    return report;
}

ExperimentReport mean_sweep(ExperimentConfig config) {
    if (config.means.empty()) config.means = {2, 4, 6, 8, 10, 12, 14, 16};
    return run_detection_experiment(config);
}

}  // namespace countsel::sim
