#include "doctest.h"

#include "rare/expfit.hpp"
#include "rare/gof.hpp"
#include "test_support.hpp"

#include <json.hpp>

#include <cmath>

using namespace rare;
using doctest::Approx;

namespace {

std::vector<double> at_quantiles(std::size_t n, double rate, double offset, double denom_extra) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = exp_quantile((static_cast<double>(i) + offset) / (n + denom_extra), rate);
    return x;
}

} // namespace

TEST_CASE("K-S statistic") {
    SUBCASE("single value at the median") {
        const double rate = 0.01;
        const std::vector<double> x{exp_quantile(0.5, rate)};
        CHECK(ks_statistic(x, rate) == Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("data at i/(n+1) quantiles") {
        const std::size_t n = 99;
        const auto x = at_quantiles(n, 0.002, 1.0, 1.0);
        CHECK(ks_statistic(x, 0.002) == Approx(1.0 / (n + 1)).epsilon(1e-9));
    }
    SUBCASE("bounded and order-free") {
        auto x = rare::testing::exponential_sample(200, 0.3, 4);
        const double d = ks_statistic(x, fit_mle(x));
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
        std::reverse(x.begin(), x.end());
        CHECK(ks_statistic(x, fit_mle(x)) == d);
    }
    SUBCASE("empty series") {
        try {
            ks_statistic(std::vector<double>{}, 1.0);
            FAIL("expected insufficient data");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::insufficient_data);
        }
    }
}

TEST_CASE("K-S p-value against reference values") {
    CHECK(ks_pvalue(0.0, 50).p == 1.0);
    CHECK(ks_pvalue(0.0, 500).p == 1.0);
    CHECK(ks_pvalue(1.0, 50).p == Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(ks_pvalue(1.0, 500).p) < 1e-12);

    CHECK(ks_pvalue(0.3, 10).p == Approx(0.2705355748).epsilon(1e-8));
    CHECK(ks_pvalue(0.1, 50).p == Approx(0.6623112705).epsilon(1e-8));
    CHECK(ks_pvalue(0.15, 100).p == Approx(0.01983924213).epsilon(1e-7));
    CHECK(ks_pvalue(0.12, 140).p == Approx(0.03252638259).epsilon(1e-7));
    CHECK(ks_pvalue(0.5, 5).p == Approx(0.112).epsilon(1e-10));
    CHECK(ks_pvalue(0.7, 1).p == Approx(0.6).epsilon(1e-12));

    const auto big = ks_pvalue(0.1581, 223);
    CHECK(big.branch == KsBranch::asymptotic);
    CHECK(big.p == Approx(2.880692122e-5).epsilon(1e-6));
    CHECK(ks_cdf_exact(223, 0.1581) == Approx(1.0 - 2.46e-5).epsilon(1e-7));
    CHECK(ks_sf_asymptotic(0.5) == Approx(0.9639452437).epsilon(1e-9));
    CHECK(ks_sf_asymptotic(1.0) == Approx(0.2699996717).epsilon(1e-9));
    CHECK(ks_sf_asymptotic(2.0) == Approx(0.0006709252558).epsilon(1e-9));
}

TEST_CASE("K-S branch selection") {
    CHECK(ks_pvalue(0.2, kKsExactMaxN).branch == KsBranch::exact);
    CHECK(ks_pvalue(0.2, kKsExactMaxN + 1).branch == KsBranch::asymptotic);
    CHECK(ks_pvalue(0.0, 10).branch == KsBranch::trivial);
    try {
        ks_pvalue(1.2, 10);
        FAIL("expected domain error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::domain);
    }
    CHECK_THROWS_AS(ks_pvalue(-0.1, 10), Error);
}

TEST_CASE("K-S p-value is monotone") {
    for (std::size_t n : {1u, 2u, 7u, 30u, 140u, 141u, 223u, 1000u}) {
        double prev = 2.0;
        for (int k = 0; k <= 200; ++k) {
            const double p = ks_pvalue(k / 200.0, n).p;
            CHECK(p <= prev + 1e-15);
            prev = p;
        }
    }
    for (double d : {0.05, 0.1, 0.2, 0.4}) {
        double prev = 2.0;
        for (std::size_t n = 1; n <= 300; ++n) {
            const double p = ks_pvalue(d, n).p;
            if (n != kKsExactMaxN + 1) CHECK(p <= prev + 1e-12);
            prev = p;
        }
    }
}

TEST_CASE("K-S branch switch is a small upward step") {
    for (double d : {0.05, 0.1, 0.2}) {
        const double exact = ks_pvalue(d, kKsExactMaxN).p;
        const double asym = ks_pvalue(d, kKsExactMaxN + 1).p;
        CHECK(asym >= exact);
        CHECK(asym <= 1.2 * exact);
    }
}

TEST_CASE("A-D statistic") {
    const std::vector<double> u{0.25, 0.5, 0.75};
    CHECK(ad_statistic_uniform(u) == Approx(0.2694308).epsilon(1e-6));

    SUBCASE("PIT invariance") {
        const auto x = rare::testing::exponential_sample(120, 0.004, 8);
        const auto fit = fit_mle(x);
        std::vector<double> v(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) v[i] = exp_cdf(x[i], fit.rate);
        CHECK(ad_statistic(x, fit) == Approx(ad_statistic_uniform(v)).epsilon(1e-10));
        CHECK(ad_statistic(x, fit) >= 0.0);
    }
    SUBCASE("degenerate u reports the value") {
        try {
            ad_statistic_uniform(std::vector<double>{0.2, 1.0});
            FAIL("expected degenerate error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::degenerate);
            CHECK(std::string(e.what()).find('1') != std::string::npos);
        }
        CHECK_THROWS_AS(ad_statistic_uniform(std::vector<double>{0.0, 0.5}), Error);
    }
}

TEST_CASE("A-D critical-value tables") {
    const auto t = ad_table_exponential();
    REQUIRE(!t.empty());
    CHECK(t.back().alpha == 0.0025);
    CHECK(t.back().critical == 2.534);
    for (std::size_t i = 1; i < t.size(); ++i) {
        CHECK(t[i].alpha < t[i - 1].alpha);
        CHECK(t[i].critical > t[i - 1].critical);
    }
    const auto k = ad_table_known_parameters();
    CHECK(k[4].alpha == 0.05);
    CHECK(k[4].critical == Approx(2.492).epsilon(1e-3));
}

TEST_CASE("A-D p-value ranges") {
    CHECK(ad_pvalue_range(8.207, 223, true) == PValueRange{0.0, 0.0025});
    CHECK(ad_pvalue_range(2.54, 223, true) == PValueRange{0.0, 0.0025});
    CHECK(ad_pvalue_range(2.52, 1000, true) == PValueRange{0.0025, 0.005});
    CHECK(ad_pvalue_range(0.6172, 55, true) == PValueRange{0.25, 1.0});
    CHECK(ad_pvalue_range(0.8282, 36, true) == PValueRange{0.15, 0.20});
    CHECK(ad_pvalue_range(0.0, 10, true) == PValueRange{0.25, 1.0});
    CHECK(ad_pvalue_range(2.0, 10, false) == PValueRange{0.05, 0.10});

    CHECK(format_p_range({0.25, 1.0}) == "> 0.25");
    CHECK(format_p_range({0.0, 0.0025}) == "< 0.0025");
    CHECK(format_p_range({0.15, 0.20}) == "0.15-0.20");
}

TEST_CASE("chi-squared binned test") {
    const double rate = 0.01;
    const ExponentialFit fit{rate, 100, 100, 100};

    SUBCASE("equal counts give zero") {
        std::vector<double> x;
        for (int j = 0; j < 10; ++j)
            for (int r = 0; r < 10; ++r) x.push_back(exp_quantile((j + 0.5) / 10.0, rate));
        const auto rep = chisq_binned(x, fit);
        CHECK(rep.statistic == Approx(0.0).epsilon(1e-12));
        CHECK(std::get<double>(rep.p_value) == Approx(1.0));
        CHECK(rep.df == 10);
    }
    SUBCASE("all mass in one bin gives n(bins - 1)") {
        for (int bins : {2, 5, 10, 17}) {
            const std::vector<double> x(60, exp_quantile(0.999, rate));
            CHECK(chisq_binned(x, fit, bins).statistic == Approx(60.0 * (bins - 1)).epsilon(1e-12));
        }
    }
    SUBCASE("df override") {
        const auto x = rare::testing::exponential_sample(100, rate, 2);
        CHECK(chisq_binned(x, fit_mle(x), 10, 8).df == 8);
    }
    SUBCASE("small samples warn, bins < 2 throws") {
        const auto x = rare::testing::exponential_sample(20, rate, 2);
        CHECK_FALSE(chisq_binned(x, fit_mle(x)).warnings.empty());
        try {
            chisq_binned(x, fit_mle(x), 1);
            FAIL("expected parameter error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::parameter);
        }
    }
}

TEST_CASE("Monte Carlo p-value") {
    const auto x = rare::testing::exponential_sample(80, 0.01, 21);
    const auto a = mc_pvalue(x, EdfStatistic::ks, 300, 5);
    const auto b = mc_pvalue(x, EdfStatistic::ks, 300, 5);
    CHECK(a.p == b.p);
    CHECK(a.exceed == b.exceed);
    CHECK(a.p >= 0.0);
    CHECK(a.p <= 1.0);
    CHECK(mc_pvalue(x, EdfStatistic::ad, 300, 6).p > 0.0);

    SUBCASE("statistic beyond every replicate") {
        const std::vector<double> flat(50, 100.0);
        const auto r = mc_report(flat, EdfStatistic::ks, 200, 1);
        CHECK(std::get<double>(r.p_value) == 0.0);
        CHECK(r.note.find("p < 1/200") != std::string::npos);
    }
    SUBCASE("too few replications") {
        CHECK_THROWS_AS(mc_pvalue(x, EdfStatistic::ks, 99, 1), Error);
    }
}

TEST_CASE("report decisions and JSON lines") {
    const auto x = rare::testing::exponential_sample(150, 0.01, 13);
    const auto fit = fit_mle(x);

    const auto ks = ks_report(x, fit);
    CHECK(ks.test_name == "ks");
    REQUIRE(ks.decision_at.size() == 3);
    for (const auto& d : ks.decision_at)
        CHECK(d.reject == (std::get<double>(ks.p_value) < d.alpha));
    auto j = nlohmann::json::parse(to_json_line(ks));
    CHECK(j["test"] == "ks");
    CHECK(j["n"] == 150);
    CHECK(j.contains("p"));
    CHECK(j["df"].is_null());

    const auto ad = ad_report(x, fit);
    j = nlohmann::json::parse(to_json_line(ad));
    CHECK(j["p_range"].size() == 2);
    const auto range = std::get<PValueRange>(ad.p_value);
    CHECK(range.lower >= 0.0);
    CHECK(range.upper <= 1.0);

    const auto cs = chisq_binned(x, fit);
    j = nlohmann::json::parse(to_json_line(cs));
    CHECK(j["df"] == 10);
    CHECK(cs.statistic >= 0.0);
}
