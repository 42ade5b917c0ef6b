#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/geometric.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "countsel/counts_model.hpp"
#include "countsel/random.hpp"
#include "doctest.h"

using namespace countsel;
using doctest::Approx;

TEST_CASE("CountData caches sufficient statistics") {
    const CountData d({1, 2, 3, 4, 5});
    CHECK(d.n() == 5);
    CHECK(d.s() == 15);
    CHECK(d.mean() == 3.0);
    CHECK(d.log_gamma_sum() == Approx(10.450452222917992).epsilon(1e-12));
    CHECK(CountData({7}).log_gamma_sum() == Approx(std::log(5040.0)).epsilon(1e-13));
    CHECK(CountData({0, 0, 0}).log_gamma_sum() == 0.0);
}

TEST_CASE("CountData rejects empty and negative samples") {
    CHECK_THROWS_WITH_AS(CountData(std::vector<std::int64_t>{}), "empty sample", std::invalid_argument);
    CHECK_THROWS_WITH_AS(CountData({1, -1}), "invalid count", std::invalid_argument);
}

TEST_CASE("negative log-likelihood oracle values") {
    const auto st = SuffStats::of(CountData({1, 2, 3, 4, 5}));
    CHECK(negloglik_poisson(3.0, st) == Approx(8.971268).epsilon(1e-7));
    CHECK(negloglik_geometric(GeomParam::success_prob(0.25), st) == Approx(11.246703).epsilon(1e-7));
    CHECK(negloglik_geometric(GeomParam::mean(3.0), st) == Approx(11.246703).epsilon(1e-7));
    CHECK(negloglik(ModelClass::Geometric, 3.0, st) == Approx(11.246703).epsilon(1e-7));
    CHECK(negloglik(ModelClass::Poisson, 3.0, st) == Approx(8.971268).epsilon(1e-7));
}

TEST_CASE("boundary likelihoods use 0 ln 0 = 0") {
    const auto zeros = SuffStats::of(CountData({0, 0, 0}));
    CHECK(negloglik_poisson(0.0, zeros) == 0.0);
    CHECK(negloglik_geometric(GeomParam::success_prob(1.0), zeros) == 0.0);
    CHECK(negloglik_geometric(GeomParam::mean(0.0), zeros) == 0.0);
    const auto st = SuffStats::of(CountData({0, 1}));
    CHECK_THROWS_WITH(negloglik_poisson(0.0, st), "degenerate parameter");
}

TEST_CASE("geometric parameterizations agree") {
    for (double mu : {0.01, 0.5, 1.0, 3.0, 17.5, 1e4}) {
        const auto a = GeomParam::mean(mu);
        const auto b = GeomParam::success_prob(1.0 / (1.0 + mu));
        CHECK(a.p() == Approx(b.p()).epsilon(1e-14));
        CHECK(b.mu() == Approx(mu).epsilon(1e-12));
        for (std::int64_t s : {0, 1, 9, 250}) {
            const SuffStats st{4, s, 0.0};
            CHECK(negloglik_geometric(a, st) == Approx(negloglik_geometric(b, st)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_WITH(GeomParam::success_prob(0.0), "parameter out of range");
    CHECK_THROWS_WITH(GeomParam::mean(-1.0), "parameter out of range");
}

TEST_CASE("MLEs minimise the negative log-likelihood") {
    for (std::int64_t s : {1, 4, 15, 400}) {
        const SuffStats st{5, s, 0.0};
        const double lam = mle_mean(st);
        const double p = mle_geometric_p(st);
        CHECK(lam == Approx(s / 5.0));
        CHECK(p == Approx(5.0 / (5.0 + s)));
        for (double f : {0.999, 1.001, 0.9, 1.1}) {
            CHECK(negloglik_poisson(lam, st) < negloglik_poisson(lam * f, st));
            const double pf = std::min(p * f, 0.999999);
            CHECK(negloglik_geometric(GeomParam::success_prob(p), st) <
                  negloglik_geometric(GeomParam::success_prob(pf), st));
        }
    }
    CHECK(mle(ModelClass::Geometric, CountData({1, 2, 3, 4, 5})) == Approx(0.25));
}

TEST_CASE("Fisher information") {
    CHECK(fisher_poisson(3.0, 5) == Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(fisher_geometric(GeomParam::success_prob(0.25), 5) == Approx(106.666666666667).epsilon(1e-12));
    CHECK(fisher_geometric(GeomParam::mean(3.0), 5) == Approx(5.0 / 12.0).epsilon(1e-14));
    CHECK_THROWS_AS(fisher_poisson(0.0, 5), std::domain_error);
    CHECK_THROWS_AS(fisher_geometric(GeomParam::success_prob(1.0), 5), std::domain_error);
}

TEST_CASE("Fisher information equals the score variance") {
    Stream rng(11);
    const int reps = 200000;
    const std::int64_t n = 5;
    double sum_p = 0, sum2_p = 0, sum_g = 0, sum2_g = 0;
    const double lam = 2.5, mu = 2.5, p = 1.0 / (1.0 + mu);
    std::vector<std::int64_t> buf(n);
    for (int r = 0; r < reps; ++r) {
        sample_into(ModelClass::Poisson, lam, buf, rng);
        double s = 0;
        for (auto x : buf) s += static_cast<double>(x);
        const double score_p = s / lam - n;
        sum_p += score_p;
        sum2_p += score_p * score_p;
        sample_into(ModelClass::Geometric, mu, buf, rng);
        s = 0;
        for (auto x : buf) s += static_cast<double>(x);
        const double score_g = n / p - s / (1.0 - p);
        sum_g += score_g;
        sum2_g += score_g * score_g;
    }
    const double var_p = sum2_p / reps - (sum_p / reps) * (sum_p / reps);
    const double var_g = sum2_g / reps - (sum_g / reps) * (sum_g / reps);
    CHECK(var_p == Approx(fisher_poisson(lam, n)).epsilon(0.02));
    CHECK(var_g == Approx(fisher_geometric(GeomParam::success_prob(p), n)).epsilon(0.03));
}

namespace {

// Pearson chi-square statistic against `pmf`, pooling the upper tail and any
// cell with expected count below 5 into its neighbour.
template <typename Pmf>
std::pair<double, int> chi_square(const std::vector<std::int64_t>& draws, Pmf pmf) {
    const double total = static_cast<double>(draws.size());
    std::int64_t max_x = 0;
    for (auto x : draws) max_x = std::max(max_x, x);
    std::vector<double> observed(static_cast<std::size_t>(max_x) + 1, 0.0);
    for (auto x : draws) observed[static_cast<std::size_t>(x)] += 1.0;
    double stat = 0.0;
    int cells = 0;
    double obs = 0.0, expct = 0.0, cum = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        obs += observed[k];
        const double pk = pmf(static_cast<double>(k));
        expct += pk * total;
        cum += pk;
        if (expct >= 5.0 && (1.0 - cum) * total >= 5.0) {
            stat += (obs - expct) * (obs - expct) / expct;
            ++cells;
            obs = expct = 0.0;
        }
    }
    const double tail_obs = obs;
    const double tail_exp = (1.0 - cum) * total + expct;
    stat += (tail_obs - tail_exp) * (tail_obs - tail_exp) / tail_exp;
    ++cells;
    return {stat, cells - 1};
}

double critical(int dof) {
    return boost::math::quantile(boost::math::complement(boost::math::chi_squared(dof), 1e-6));
}

}  // namespace

TEST_CASE("samplers match their distributions (chi-square)") {
    const std::size_t reps = 200000;
    for (double mean : {0.3, 2.0, 29.0, 31.0, 80.0, 1500.0}) {
        CAPTURE(mean);
        Stream rng = Stream::derive(5, {static_cast<std::uint64_t>(mean * 10)});
        std::vector<std::int64_t> draws(reps);
        for (auto& x : draws) x = draw_poisson(mean, rng);
        const boost::math::poisson_distribution<> pois(mean);
        const auto [stat, dof] = chi_square(draws, [&](double k) { return boost::math::pdf(pois, k); });
        CHECK(stat < critical(dof));
    }
    for (double mean : {0.3, 2.0, 80.0}) {
        CAPTURE(mean);
        Stream rng = Stream::derive(6, {static_cast<std::uint64_t>(mean * 10)});
        std::vector<std::int64_t> draws(reps);
        for (auto& x : draws) x = draw_geometric(mean, rng);
        const boost::math::geometric_distribution<> geo(1.0 / (1.0 + mean));
        const auto [stat, dof] = chi_square(draws, [&](double k) { return boost::math::pdf(geo, k); });
        CHECK(stat < critical(dof));
    }
}

TEST_CASE("sample means obey the central limit theorem") {
    const int reps = 100000;
    for (ModelClass m : {ModelClass::Poisson, ModelClass::Geometric}) {
        for (double mean : {1.0, 8.0, 200.0}) {
            Stream rng(1234);
            double sum = 0.0;
            for (int r = 0; r < reps; ++r)
                sum += static_cast<double>(m == ModelClass::Poisson ? draw_poisson(mean, rng)
                                                                    : draw_geometric(mean, rng));
            const double var = m == ModelClass::Poisson ? mean : mean * (1.0 + mean);
            const double z = (sum / reps - mean) / std::sqrt(var / reps);
            CAPTURE(mean);
            CHECK(std::fabs(z) < 5.0);
        }
    }
}

TEST_CASE("seeded sampling is reproducible") {
    Stream a = Stream::derive(42, {1, 2, 3});
    Stream b = Stream::derive(42, {1, 2, 3});
    Stream c = Stream::derive(42, {1, 2, 4});
    const auto x = sample(ModelClass::Poisson, 4.0, 50, a);
    const auto y = sample(ModelClass::Poisson, 4.0, 50, b);
    const auto z = sample(ModelClass::Poisson, 4.0, 50, c);
    CHECK(std::equal(x.values().begin(), x.values().end(), y.values().begin()));
    CHECK_FALSE(std::equal(x.values().begin(), x.values().end(), z.values().begin()));
}
