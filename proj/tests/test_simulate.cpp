#include <cmath>

#include "countsel/mdl_criteria.hpp"
#include "countsel/selection.hpp"
#include "countsel/simulate.hpp"
#include "doctest.h"

using namespace countsel;
using namespace countsel::sim;
using doctest::Approx;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.means = {2.0, 8.0};
    c.replications = 3000;
    c.seed = 123;
    return c;
}

// Probability that `c` picks `truth` on n = 2 samples drawn from `truth`,
// by enumerating both counts up to a negligible tail.
double exact_detection(const Criterion& c, ModelClass truth, double mean) {
    const int max_x = 400;
    std::vector<double> pmf(max_x + 1);
    for (int x = 0; x <= max_x; ++x) {
        pmf[x] = truth == ModelClass::Poisson
                     ? std::exp(-mean + x * std::log(mean) - log_gamma(x + 1.0))
                     : std::exp(x * std::log(mean / (1.0 + mean)) - std::log1p(mean));
    }
    Evaluator ev;
    double prob = 0.0;
    for (int a = 0; a <= max_x; ++a) {
        if (pmf[a] < 1e-18) continue;
        for (int b = 0; b <= max_x; ++b) {
            const double w = pmf[a] * pmf[b];
            if (w < 1e-18) continue;
            const auto r = ev.evaluate(c, CountData({a, b}));
            if (r.chosen == truth) prob += w;
        }
    }
    return prob;
}

}  // namespace

TEST_CASE("configuration validation") {
    auto c = small_config();
    CHECK_NOTHROW(c.validate());
    c.replications = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small_config();
    c.means.clear();
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small_config();
    c.means = {-1.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small_config();
    c.shards = 0;
    CHECK_THROWS_AS(run_detection_experiment(c), std::invalid_argument);
}

TEST_CASE("detection experiment is deterministic and well formed") {
    const auto cfg = small_config();
    const auto a = run_detection_experiment(cfg);
    const auto b = run_detection_experiment(cfg);
    CHECK(a == b);
    CHECK(a.cells.size() == cfg.means.size() * cfg.criteria.size());
    for (const auto& cell : a.cells) {
        CHECK(cell.tally.trials_geometric == cfg.replications);
        CHECK(cell.tally.trials_poisson == cfg.replications);
        CHECK(cell.tally.correct_geometric <= cell.tally.trials_geometric);
        CHECK(cell.score == Approx(0.5 * (cell.pct_geometric + cell.pct_poisson)));
        CHECK(cell.rank >= 1.0);
        CHECK(cell.rank <= static_cast<double>(cfg.criteria.size()));
    }
    // known-mu is bound to the generating mean.
    CHECK(a.cell(8.0, "known-mu").criterion.mu == 8.0);

    auto other = cfg;
    other.seed = 124;
    CHECK_FALSE(run_detection_experiment(other) == a);
}

TEST_CASE("sharding changes streams but not bookkeeping") {
    auto cfg = small_config();
    cfg.shards = 4;
    const auto a = run_detection_experiment(cfg);
    const auto b = run_detection_experiment(cfg);
    CHECK(a == b);
    for (const auto& cell : a.cells) CHECK(cell.tally.trials_poisson == cfg.replications);
    cfg.replications = 3;
    cfg.shards = 8;  // more shards than replications
    const auto tiny = run_detection_experiment(cfg);
    for (const auto& cell : tiny.cells) CHECK(cell.tally.trials_geometric == 3);
}

TEST_CASE("bias experiment") {
    const auto cfg = small_config();
    const auto r = run_bias_experiment(cfg);
    CHECK(r == run_bias_experiment(cfg));
    for (const auto& cell : r.cells) {
        CHECK(cell.tally.trials_geometric + cell.tally.trials_poisson == cfg.replications);
        CHECK(cell.pct_geometric + cell.pct_poisson == Approx(100.0));
        CHECK(cell.score == Approx(2.0 * std::fabs(cell.pct_geometric - 50.0)));
    }
    // The coin is shared by every criterion in a replication.
    const auto& first = r.cells.front().tally;
    for (std::size_t i = 1; i < cfg.criteria.size(); ++i)
        CHECK(r.cells[i].tally.trials_geometric == first.trials_geometric);
}

TEST_CASE("rank ties share the mean rank") {
    ExperimentReport r;
    r.kind = ExperimentKind::Detection;
    for (double score : {90.0, 95.004, 95.0, 80.0}) {
        CellReport c;
        c.mean = 2.0;
        c.score = score;
        r.cells.push_back(c);
    }
    assign_ranks(r);
    CHECK(r.cells[0].rank == 3.0);
    CHECK(r.cells[1].rank == 1.5);
    CHECK(r.cells[2].rank == 1.5);
    CHECK(r.cells[3].rank == 4.0);
    r.kind = ExperimentKind::Bias;
    assign_ranks(r);
    CHECK(r.cells[3].rank == 1.0);
    CHECK(r.cells[1].rank == 3.5);
}

TEST_CASE("Monte Carlo rates match exact enumeration") {
    ExperimentConfig cfg;
    cfg.sample_size = 2;
    cfg.replications = 40000;
    cfg.seed = 9;
    cfg.means = {2.0, 8.0};
    cfg.criteria = {Criterion::bic(), Criterion::mml_half_cauchy_sd(), Criterion::known_mu(0.0)};
    const auto report = run_detection_experiment(cfg);
    for (double mean : cfg.means) {
        for (const auto& c : cfg.criteria) {
            Criterion bound = c;
            if (bound.kind == Criterion::Kind::KnownMu) bound.mu = mean;
            const auto& cell = report.cell(mean, c.name());
            for (ModelClass truth : {ModelClass::Poisson, ModelClass::Geometric}) {
                const double p = exact_detection(bound, truth, mean);
                const double se = std::sqrt(p * (1.0 - p) / cfg.replications);
                const double observed =
                    (truth == ModelClass::Poisson ? cell.pct_poisson : cell.pct_geometric) / 100.0;
                CAPTURE(mean);
                CAPTURE(c.name());
                CHECK(std::fabs(observed - p) < 4.5 * se + 1e-9);
            }
        }
    }
}

TEST_CASE("detection improves with the mean") {
    ExperimentConfig cfg;
    cfg.replications = 20000;
    cfg.criteria = {Criterion::mml_half_cauchy_sd(), Criterion::anml_two_part(), Criterion::bic(),
                    Criterion::known_mu(0.0)};
    const auto report = mean_sweep(cfg);
    REQUIRE(report.config.means.size() == 8);
    for (const auto& c : cfg.criteria) {
        double prev = 0.0;
        for (double mean : report.config.means) {
            const double avg = report.cell(mean, c.name()).score;
            CAPTURE(c.name());
            CAPTURE(mean);
            CHECK(avg > prev);
            prev = avg;
        }
    }
}
