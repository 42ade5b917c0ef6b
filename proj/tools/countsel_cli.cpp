// countsel: Poisson vs geometric model selection from the command line.
//
//   countsel select   [--input FILE] [--criterion NAME]... [--json FILE]
//   countsel simulate --table {1|2} --means 2,4,8,80 --reps N --n 5 --seed S [--shards K] [--out PREFIX]
//   countsel sweep    [--means 2,4,...,16] --reps N ...
//   countsel regret   --criterion NAME --model {poisson|geometric} --n N --s-max S [--out PREFIX]
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric failure.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "countsel/report_io.hpp"
#include "countsel/selection.hpp"
#include "countsel/simulate.hpp"

namespace {

using namespace countsel;

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CriterionFlags {
    std::vector<std::string> names;
    std::optional<double> mu_star;
    std::optional<double> mu;
    double A = 5.0;
    double alpha = 1.0;
    double beta = 1.0;
    std::string ranml_region;       // "", "strict" or "extrapolate"
    std::string beta_estimator;     // "", "argmin" or "plugin"

    void add_to(CLI::App& app, bool multiple) {
        if (multiple)
            app.add_option("--criterion,-c", names, "Criterion name (repeatable)")->delimiter(',');
        else
            app.add_option("--criterion,-c", names, "Criterion name")->required()->expected(1);
        app.add_option("--mu-star", mu_star, "mu* for the 'ranml' criterion");
        app.add_option("--mu", mu, "True mean for the 'known-mu' criterion");
        app.add_option("--A", A, "Exponential prior mean for mml-conj / mml-calib");
        app.add_option("--alpha", alpha, "Beta prior alpha for mml-conj");
        app.add_option("--beta", beta, "Beta prior beta for mml-conj");
        app.add_option("--ranml-region", ranml_region, "strict | extrapolate")
            ->check(CLI::IsMember({"strict", "extrapolate"}));
        app.add_option("--beta-estimator", beta_estimator, "argmin | plugin")
            ->check(CLI::IsMember({"argmin", "plugin"}));
    }

    Criterion apply(Criterion c) const {
        if (c.kind == Criterion::Kind::MmlConjugate) {
            c.A = A;
            c.alpha = alpha;
            c.beta = beta;
        }
        if (c.kind == Criterion::Kind::MmlCalibrated) c.A = A;
        if (!ranml_region.empty() && c.kind == Criterion::Kind::Ranml)
            c.region = ranml_region == "strict" ? RanmlRegion::Strict : RanmlRegion::Extrapolate;
        if (!beta_estimator.empty())
            c.beta_estimator = beta_estimator == "argmin" ? BetaEstimator::Argmin : BetaEstimator::Plugin;
        return c;
    }

    Criterion parse_one(const std::string& name) const {
        auto c = parse_criterion(name, mu_star, mu);
        if (!c) throw UsageError("unknown or incomplete criterion '" + name + "'");
        return apply(*c);
    }

    // Explicit names, or the full roster (known-mu only when --mu is given).
    std::vector<Criterion> resolve_for_select() const {
        std::vector<Criterion> out;
        if (!names.empty()) {
            for (const auto& n : names) out.push_back(parse_one(n));
        } else {
            for (auto c : reference_roster()) {
                if (c.kind == Criterion::Kind::KnownMu) {
                    if (!mu) continue;
                    c.mu = *mu;
                }
                if (c.kind == Criterion::Kind::Ranml) c.region = RanmlRegion::Strict;
                c.beta_estimator = BetaEstimator::Argmin;
                out.push_back(apply(c));
            }
        }
        for (const auto& c : out) {
            try {
                c.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(c.name() + ": " + e.what());
            }
        }
        return out;
    }

    // Roster defaults for simulation; known-mu binds to each generating mean.
    std::vector<Criterion> resolve_for_simulation() const {
        std::vector<Criterion> out;
        if (names.empty()) {
            for (const auto& c : reference_roster()) out.push_back(apply(c));
            return out;
        }
        for (const auto& n : names) {
            auto c = parse_one(n);
            if (c.kind == Criterion::Kind::Ranml && ranml_region.empty()) c.region = RanmlRegion::Extrapolate;
            if (c.is_mml() && beta_estimator.empty()) c.beta_estimator = BetaEstimator::Plugin;
            out.push_back(c);
        }
        return out;
    }
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("COUNTSEL_SEED")) return std::strtoull(env, nullptr, 10);
    return 42;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

int cmd_select(const std::string& input, const CriterionFlags& flags, const std::string& json_path) {
    const auto criteria = flags.resolve_for_select();
    std::vector<CountData> samples;
    if (input.empty() || input == "-") {
        samples = io::parse_samples(std::cin);
    } else {
        std::ifstream in(input);
        if (!in) throw io::DataError("cannot open " + input);
        samples = io::parse_samples(in);
    }

    nlohmann::json results = nlohmann::json::array();
    Evaluator ev;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& d = samples[i];
        std::cout << "sample " << i + 1 << " (n=" << d.n() << ", s=" << d.s() << ")\n";
        for (const auto& c : criteria) {
            nlohmann::json row;
            try {
                const auto r = ev.evaluate(c, d);
                row = io::to_json(r);
                std::cout << "  " << std::left << std::setw(14) << c.name() << " poisson=" << std::setw(14)
                          << io::format_real(r.codelength_poisson) << " geometric=" << std::setw(14)
                          << io::format_real(r.codelength_geometric) << " chosen=" << to_string(r.chosen)
                          << " margin=" << io::format_real(r.margin) << (r.tie ? " (tie)" : "")
                          << (r.limit_decision ? " (limit)" : "") << '\n';
            } catch (const std::exception& e) {
                row = {{"criterion", c.name()}, {"error", e.what()}};
                std::cout << "  " << std::left << std::setw(14) << c.name() << " undefined: " << e.what() << '\n';
            }
            row["sample"] = i + 1;
            results.push_back(row);
        }
    }
    if (!json_path.empty()) {
        const auto text = results.dump(2) + "\n";
        if (json_path == "-") std::cout << text; else write_file(json_path, text);
    }
    return kOk;
}

std::vector<double> parse_means(const std::vector<std::string>& raw) {
    std::vector<double> out;
    for (const auto& m : raw) {
        char* end = nullptr;
        const double v = std::strtod(m.c_str(), &end);
        if (end == m.c_str() || *end != '\0' || !(v > 0.0)) throw UsageError("invalid mean '" + m + "'");
        out.push_back(v);
    }
    return out;
}

int run_experiment(const std::string& command, sim::ExperimentKind kind, sim::ExperimentConfig config,
                   const std::string& out_prefix) {
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = kind == sim::ExperimentKind::Detection ? sim::run_detection_experiment(config)
                                                               : sim::run_bias_experiment(config);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto csv = io::report_csv(report);
    if (out_prefix.empty()) {
        std::cout << csv;
        return kOk;
    }
    const auto deg = report.degenerate_totals();
    io::RunManifest manifest{command, io::to_json(config), config.seed, io::kVersion, secs, io::utc_timestamp(),
                             {{"undefined", deg.undefined},
                              {"infinite", deg.infinite},
                              {"limit_decisions", deg.limit_decisions},
                              {"ties", deg.ties},
                              {"boundary", deg.boundary}}};
    write_file(out_prefix + ".csv", csv);
    write_file(out_prefix + ".json",
               nlohmann::json{{"manifest", manifest.to_json()}, {"report", io::to_json(report)}}.dump(2) + "\n");
    std::cerr << "wrote " << out_prefix << ".csv and " << out_prefix << ".json (" << secs << " s)\n";
    return kOk;
}

int cmd_regret(const CriterionFlags& flags, const std::string& model_name, std::int64_t n, std::int64_t s_min,
               std::int64_t s_max, const std::string& out_prefix) {
    const auto c = flags.parse_one(flags.names.at(0));
    if (!c.depends_on_sufficient_stats_only()) throw UsageError(RegretUnsupported().what());
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(c.name() + ": " + e.what());
    }
    if (n < 1 || s_min < 0 || s_max < s_min) throw UsageError("require n >= 1 and 0 <= s-min <= s-max");
    const ModelClass m = model_name == "poisson" ? ModelClass::Poisson : ModelClass::Geometric;
    std::vector<std::int64_t> s_values;
    for (auto s = s_min; s <= s_max; ++s) s_values.push_back(s);
    const auto t0 = std::chrono::steady_clock::now();
    const auto series = regret_curve(c, m, n, s_values);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto csv = io::regret_csv(series);
    if (out_prefix.empty()) {
        std::cout << csv;
        return kOk;
    }
    io::RunManifest manifest{"regret",
                             {{"criterion", io::to_json(c)}, {"model", model_name}, {"n", n},
                              {"s_min", s_min}, {"s_max", s_max}},
                             0, io::kVersion, secs, io::utc_timestamp(), nlohmann::json::object()};
    write_file(out_prefix + ".csv", csv);
    write_file(out_prefix + ".json", nlohmann::json{{"manifest", manifest.to_json()}}.dump(2) + "\n");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poisson vs geometric model selection by codelength"};
    app.require_subcommand(1);

    auto* select = app.add_subcommand("select", "Classify samples (one per line) read from a file or stdin");
    std::string input;
    std::string json_path;
    CriterionFlags select_flags;
    select->add_option("--input,-i", input, "Input file (default stdin)");
    select->add_option("--json", json_path, "Write the JSON result list here ('-' for stdout)");
    select_flags.add_to(*select, true);

    auto add_sim_options = [](CLI::App* cmd, sim::ExperimentConfig& cfg, std::vector<std::string>& means,
                              std::string& out) {
        cmd->add_option("--means", means, "Generating means")->delimiter(',');
        cmd->add_option("--reps", cfg.replications, "Replications per mean (and model)");
        cmd->add_option("--n", cfg.sample_size, "Sample size");
        cmd->add_option("--seed", cfg.seed, "Master seed (default $COUNTSEL_SEED or 42)");
        cmd->add_option("--shards", cfg.shards, "Independent RNG shards / worker threads");
        cmd->add_option("--out", out, "Write PREFIX.csv and PREFIX.json instead of CSV on stdout");
    };

    auto* simulate = app.add_subcommand("simulate", "Detection-rate (--table 1) or selection-bias (--table 2) experiment");
    sim::ExperimentConfig sim_cfg;
    sim_cfg.seed = default_seed();
    int table = 1;
    std::vector<std::string> sim_means{"2", "4", "8", "80"};
    std::string sim_out;
    CriterionFlags sim_flags;
    simulate->add_option("--table", table, "1 = detection rates, 2 = selection bias")
        ->check(CLI::IsMember({1, 2}));
    add_sim_options(simulate, sim_cfg, sim_means, sim_out);
    sim_flags.add_to(*simulate, true);

    auto* sweep = app.add_subcommand("sweep", "Detection rates over a grid of means (default 2..16)");
    sim::ExperimentConfig sweep_cfg;
    sweep_cfg.seed = default_seed();
    std::vector<std::string> sweep_means{"2", "4", "6", "8", "10", "12", "14", "16"};
    std::string sweep_out;
    CriterionFlags sweep_flags;
    add_sim_options(sweep, sweep_cfg, sweep_means, sweep_out);
    sweep_flags.add_to(*sweep, true);

    auto* regret_cmd = app.add_subcommand("regret", "Coding regret as a function of s");
    CriterionFlags regret_flags;
    std::string model = "poisson";
    std::int64_t rn = 5;
    std::int64_t s_min = 1;
    std::int64_t s_max = 1000;
    std::string regret_out;
    regret_flags.add_to(*regret_cmd, false);
    regret_cmd->add_option("--model", model, "poisson | geometric")
        ->check(CLI::IsMember({"poisson", "geometric"}));
    regret_cmd->add_option("--n", rn, "Sample size");
    regret_cmd->add_option("--s-min", s_min, "First s (default 1)");
    regret_cmd->add_option("--s-max", s_max, "Last s");
    regret_cmd->add_option("--out", regret_out, "Write PREFIX.csv and PREFIX.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*select) return cmd_select(input, select_flags, json_path);
        if (*simulate) {
            sim_cfg.means = parse_means(sim_means);
            sim_cfg.criteria = sim_flags.resolve_for_simulation();
            const auto kind = table == 1 ? sim::ExperimentKind::Detection : sim::ExperimentKind::Bias;
            return run_experiment("simulate --table " + std::to_string(table), kind, sim_cfg, sim_out);
        }
        if (*sweep) {
            sweep_cfg.means = parse_means(sweep_means);
            sweep_cfg.criteria = sweep_flags.resolve_for_simulation();
            return run_experiment("sweep", sim::ExperimentKind::Detection, sweep_cfg, sweep_out);
        }
        if (*regret_cmd) return cmd_regret(regret_flags, model, rn, s_min, s_max, regret_out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const io::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    }
    return kUsage;
}
