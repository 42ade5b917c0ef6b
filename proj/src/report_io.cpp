#include "countsel/report_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <sstream>

namespace countsel::io {

using nlohmann::json;

std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    // Shortest of %.9g .. %.17g that parses back exactly.
    for (int prec = 9; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string report_csv(const sim::ExperimentReport& report) {
    std::ostringstream os;
    const bool detection = report.kind == sim::ExperimentKind::Detection;
    os << "mean,criterion,pct_geometric,pct_poisson," << (detection ? "average" : "bias") << ",rank\n";
    for (const auto& c : report.cells) {
        os << format_real(c.mean) << ',' << c.criterion.name() << ',' << format_real(c.pct_geometric) << ','
           << format_real(c.pct_poisson) << ',' << format_real(c.score) << ',' << format_real(c.rank) << '\n';
    }
    return os.str();
}

std::string regret_csv(const std::vector<std::pair<std::int64_t, double>>& series) {
    std::ostringstream os;
    os << "s,regret_nits\n";
    for (const auto& [s, r] : series) os << s << ',' << format_real(r) << '\n';
    return os.str();
}

std::string selection_csv(const std::vector<std::pair<std::size_t, SelectionResult>>& rows) {
    std::ostringstream os;
    os << "sample,criterion,codelength_poisson,codelength_geometric,chosen,margin\n";
    for (const auto& [line, r] : rows) {
        os << line << ',' << r.criterion.name() << ',' << format_real(r.codelength_poisson) << ','
           << format_real(r.codelength_geometric) << ',' << to_string(r.chosen) << ',' << format_real(r.margin)
           << '\n';
    }
    return os.str();
}

namespace {

json real(double v) {
    if (std::isfinite(v)) return v;
    return format_real(v);
}

const char* kind_name(Criterion::Kind k) {
    switch (k) {
        case Criterion::Kind::Bic: return "bic";
        case Criterion::Kind::Ranml: return "ranml";
        case Criterion::Kind::AnmlTwoPart: return "anml2";
        case Criterion::Kind::ObjBayes: return "obj-bayes";
        case Criterion::Kind::ApproxObjBayes: return "approx-bayes";
        case Criterion::Kind::MmlConjugate: return "mml-conj";
        case Criterion::Kind::MmlCalibrated: return "mml-calib";
        case Criterion::Kind::MmlHalfCauchySD: return "mml-hc-sd";
        case Criterion::Kind::MmlHalfCauchyMean: return "mml-hc-mean";
        case Criterion::Kind::KnownMu: return "known-mu";
    }
    return "unknown";
}

Criterion::Kind kind_from(const std::string& s) {
    for (int k = 0; k <= static_cast<int>(Criterion::Kind::KnownMu); ++k) {
        const auto kind = static_cast<Criterion::Kind>(k);
        if (s == kind_name(kind)) return kind;
    }
    throw std::invalid_argument("unknown criterion kind: " + s);
}

json tally_json(const sim::Tally& t) {
    return {{"trials_geometric", t.trials_geometric}, {"trials_poisson", t.trials_poisson},
            {"correct_geometric", t.correct_geometric}, {"correct_poisson", t.correct_poisson},
            {"selected_geometric", t.selected_geometric}, {"undefined", t.undefined},
            {"infinite", t.infinite}, {"limit_decisions", t.limit_decisions},
            {"ties", t.ties}, {"boundary", t.boundary}};
}

sim::Tally tally_from(const json& j) {
    sim::Tally t;
    t.trials_geometric = j.at("trials_geometric");
    t.trials_poisson = j.at("trials_poisson");
    t.correct_geometric = j.at("correct_geometric");
    t.correct_poisson = j.at("correct_poisson");
    t.selected_geometric = j.at("selected_geometric");
    t.undefined = j.at("undefined");
    t.infinite = j.at("infinite");
    t.limit_decisions = j.at("limit_decisions");
    t.ties = j.at("ties");
    t.boundary = j.at("boundary");
    return t;
}

}  // namespace

json to_json(const Criterion& c) {
    return {{"kind", kind_name(c.kind)},
            {"name", c.name()},
            {"mu_star", c.mu_star},
            {"region", c.region == RanmlRegion::Strict ? "strict" : "extrapolate"},
            {"mu", c.mu},
            {"A", c.A},
            {"alpha", c.alpha},
            {"beta", c.beta},
            {"beta_estimator", c.beta_estimator == BetaEstimator::Argmin ? "argmin" : "plugin"}};
}

Criterion criterion_from_json(const json& j) {
    Criterion c;
    c.kind = kind_from(j.at("kind").get<std::string>());
    c.mu_star = j.at("mu_star");
    c.region = j.at("region") == "strict" ? RanmlRegion::Strict : RanmlRegion::Extrapolate;
    c.mu = j.at("mu");
    c.A = j.at("A");
    c.alpha = j.at("alpha");
    c.beta = j.at("beta");
    c.beta_estimator = j.at("beta_estimator") == "argmin" ? BetaEstimator::Argmin : BetaEstimator::Plugin;
    return c;
}

json to_json(const sim::ExperimentConfig& c) {
    json crit = json::array();
    for (const auto& x : c.criteria) crit.push_back(to_json(x));
    return {{"means", c.means},       {"sample_size", c.sample_size}, {"replications", c.replications},
            {"criteria", crit},       {"seed", c.seed},               {"shards", c.shards}};
}

sim::ExperimentConfig config_from_json(const json& j) {
    sim::ExperimentConfig c;
    c.means = j.at("means").get<std::vector<double>>();
    c.sample_size = j.at("sample_size");
    c.replications = j.at("replications");
    c.criteria.clear();
    for (const auto& x : j.at("criteria")) c.criteria.push_back(criterion_from_json(x));
    c.seed = j.at("seed");
    c.shards = j.at("shards");
    return c;
}

json to_json(const sim::ExperimentReport& r) {
    json cells = json::array();
    for (const auto& c : r.cells) {
        cells.push_back({{"mean", c.mean},
                         {"criterion", to_json(c.criterion)},
                         {"tally", tally_json(c.tally)},
                         {"pct_geometric", c.pct_geometric},
                         {"pct_poisson", c.pct_poisson},
                         {r.kind == sim::ExperimentKind::Detection ? "average" : "bias", c.score},
                         {"rank", c.rank}});
    }
    return {{"kind", r.kind == sim::ExperimentKind::Detection ? "detection" : "bias"},
            {"config", to_json(r.config)},
            {"cells", cells}};
}

sim::ExperimentReport report_from_json(const json& j) {
    sim::ExperimentReport r;
    r.kind = j.at("kind") == "detection" ? sim::ExperimentKind::Detection : sim::ExperimentKind::Bias;
    r.config = config_from_json(j.at("config"));
    const char* score_key = r.kind == sim::ExperimentKind::Detection ? "average" : "bias";
    for (const auto& c : j.at("cells")) {
        sim::CellReport cell;
        cell.mean = c.at("mean");
        cell.criterion = criterion_from_json(c.at("criterion"));
        cell.tally = tally_from(c.at("tally"));
        cell.pct_geometric = c.at("pct_geometric");
        cell.pct_poisson = c.at("pct_poisson");
        cell.score = c.at(score_key);
        cell.rank = c.at("rank");
        r.cells.push_back(cell);
    }
    return r;
}

json to_json(const SelectionResult& r) {
    return {{"criterion", r.criterion.name()},
            {"codelength_poisson", real(r.codelength_poisson)},
            {"codelength_geometric", real(r.codelength_geometric)},
            {"chosen", std::string(to_string(r.chosen))},
            {"margin", real(r.margin)},
            {"tie", r.tie},
            {"boundary_mle", r.boundary_mle},
            {"infinite", r.infinite},
            {"limit_decision", r.limit_decision}};
}

json RunManifest::to_json() const {
    return {{"command", command},
            {"config", config},
            {"seed", seed},
            {"version", version},
            {"runtime_seconds", runtime_seconds},
            {"timestamp", timestamp},
            {"degenerate", degenerate}};
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<CountData> parse_samples(std::istream& in) {
    std::vector<CountData> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::int64_t> values;
        std::size_t i = 0;
        while (i < line.size()) {
            const char ch = line[i];
            if (ch == ' ' || ch == '\t' || ch == ',') {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != ',') ++j;
            std::int64_t v = 0;
            const auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j, v);
            if (ec != std::errc() || ptr != line.data() + j || v < 0)
                throw DataError("invalid count '" + line.substr(i, j - i) + "' at line " + std::to_string(lineno));
            values.push_back(v);
            i = j;
        }
        if (values.empty()) throw DataError("empty sample at line " + std::to_string(lineno));
        out.emplace_back(std::move(values));
    }
    return out;
}

}  // namespace countsel::io
