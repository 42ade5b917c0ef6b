#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "countsel/criterion.hpp"

namespace countsel::sim {

struct ExperimentConfig {
    std::vector<double> means;
    std::int64_t sample_size = 5;
    std::int64_t replications = 100000;
    std::vector<Criterion> criteria = reference_roster();
    std::uint64_t seed = 42;
    int shards = 1;

    // Throws std::invalid_argument on empty means/criteria, non-positive
    // means, sample_size < 1, replications < 1 or shards < 1.
    void validate() const;
};

enum class ExperimentKind { Detection, Bias };

// Integer tallies for one (mean, criterion) cell. Merging is associative and
// commutative, so shard order never affects the result.
struct Tally {
    std::int64_t trials_geometric = 0;    // samples generated by the geometric model
    std::int64_t trials_poisson = 0;      // samples generated by the Poisson model
    std::int64_t correct_geometric = 0;
    std::int64_t correct_poisson = 0;
    std::int64_t selected_geometric = 0;  // over all trials
    std::int64_t undefined = 0;           // both codelengths infinite; counted as a wrong choice
    std::int64_t infinite = 0;            // one codelength infinite
    std::int64_t limit_decisions = 0;     // decided by the divergence-rate rule
    std::int64_t ties = 0;
    std::int64_t boundary = 0;            // samples with s = 0

    Tally& operator+=(const Tally& o);
    bool operator==(const Tally&) const = default;
};

struct CellReport {
    double mean = 0.0;
    Criterion criterion;
    Tally tally;
    // Detection: percent correct per generating model. Bias: percent of all
    // samples on which each model was selected.
    double pct_geometric = 0.0;
    double pct_poisson = 0.0;
    double score = 0.0;  // average (detection) or bias = 2 |pct_geometric - 50|
    double rank = 0.0;   // 1 = best; ties share the mean rank

    bool operator==(const CellReport&) const = default;
};

struct ExperimentReport {
    ExperimentKind kind = ExperimentKind::Detection;
    ExperimentConfig config;
    std::vector<CellReport> cells;  // mean-major, criteria in config order

    const CellReport& cell(double mean, const std::string& criterion_name) const;
    Tally degenerate_totals() const;
    bool operator==(const ExperimentReport& o) const { return kind == o.kind && cells == o.cells; }
};

// For each mean and generating model, draws `replications` samples of size
// `sample_size` and tallies how often each criterion picks the generating model.
ExperimentReport run_detection_experiment(const ExperimentConfig& config);

// For each replication a fair coin picks the generating model (coin drawn
// before the counts from the same stream), then every criterion selects.
ExperimentReport run_bias_experiment(const ExperimentConfig& config);

// Detection experiment over a mean grid; defaults to 2, 4, ..., 16 when no
// means are given.
ExperimentReport mean_sweep(ExperimentConfig config);

// Ranks per mean: by descending average (detection) or ascending bias, with
// ties at the reported precision (0.01 pp) sharing the mean rank.
void assign_ranks(ExperimentReport& report);

}  // namespace countsel::sim
