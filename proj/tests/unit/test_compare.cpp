#include "doctest.h"

#include "rare/compare.hpp"
#include "test_support.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

using namespace rare;
using doctest::Approx;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected rare::Error");
    return ErrorKind::io;
}

std::vector<Group> era_like_groups(std::uint64_t seed) {
    const double rates[] = {0.0016, 0.0025, 0.0015, 0.00043, 0.00064, 0.0014};
    const std::size_t sizes[] = {49, 68, 36, 12, 22, 35};
    std::vector<Group> g;
    for (int i = 0; i < 6; ++i)
        g.push_back({"G" + std::to_string(i),
                     rare::testing::exponential_sample(sizes[i], rates[i], seed + i)});
    return g;
}

} // namespace

TEST_CASE("one-way ANOVA") {
    SUBCASE("identical groups") {
        const auto a = anova_oneway({{"a", {1, 2, 3}}, {"b", {1, 2, 3}}});
        CHECK(a.f_statistic == 0.0);
        CHECK(a.p_value == Approx(1.0));
    }
    SUBCASE("hand-computed two-group case") {
        const auto a = anova_oneway({{"a", {1, 2}}, {"b", {3, 4}}});
        CHECK(a.ss_between == Approx(4.0));
        CHECK(a.ss_within == Approx(1.0));
        CHECK(a.df_between == 1);
        CHECK(a.df_within == 2);
        CHECK(a.f_statistic == Approx(8.0).epsilon(1e-12));
        CHECK(a.p_value == Approx(0.1055728).epsilon(1e-6));
        REQUIRE(a.groups.size() == 2);
        CHECK(a.groups[1].mean == 3.5);
    }
    SUBCASE("errors") {
        CHECK(kind_of([] { anova_oneway({{"a", {1, 1}}, {"b", {2, 2}}}); }) ==
              ErrorKind::degenerate);
        CHECK(kind_of([] { anova_oneway({{"a", {1}}, {"b", {2}}}); }) ==
              ErrorKind::insufficient_data);
        CHECK(kind_of([] { anova_oneway({{"a", {1, 2}}}); }) == ErrorKind::insufficient_data);
    }
}

TEST_CASE("two-group ANOVA matches the pooled t-test") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = rare::testing::exponential_sample(15 + seed, 0.01, seed);
        const auto y = rare::testing::exponential_sample(20, 0.012, 100 + seed);
        const auto a = anova_oneway({{"x", x}, {"y", y}});

        const double nx = x.size(), ny = y.size();
        const double mx = std::accumulate(x.begin(), x.end(), 0.0) / nx;
        const double my = std::accumulate(y.begin(), y.end(), 0.0) / ny;
        double ss = 0.0;
        for (double v : x) ss += (v - mx) * (v - mx);
        for (double v : y) ss += (v - my) * (v - my);
        const double df = nx + ny - 2;
        const double t = (mx - my) / std::sqrt(ss / df * (1 / nx + 1 / ny));
        boost::math::students_t dist(df);
        const double p = 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
        CHECK(a.f_statistic == Approx(t * t).epsilon(1e-10));
        CHECK(std::abs(a.p_value - p) < 1e-10);
    }
}

TEST_CASE("ANOVA is shift and scale invariant") {
    const auto g = era_like_groups(3);
    const double f = anova_oneway(g).f_statistic;
    auto shifted = g, scaled = g;
    for (auto& grp : shifted)
        for (auto& v : grp.values) v += 1234.5;
    for (auto& grp : scaled)
        for (auto& v : grp.values) v *= 0.37;
    CHECK(anova_oneway(shifted).f_statistic == Approx(f).epsilon(1e-9));
    CHECK(anova_oneway(scaled).f_statistic == Approx(f).epsilon(1e-9));
}

TEST_CASE("studentized range distribution") {
    const double inf = std::numeric_limits<double>::infinity();
    boost::math::normal z;
    CHECK(studentized_range_quantile(0.05, 2, inf) ==
          Approx(std::sqrt(2.0) * boost::math::quantile(z, 0.975)).epsilon(1e-6));
    CHECK(studentized_range_quantile(0.05, 2, inf) == Approx(2.771808).epsilon(1e-5));
    CHECK(studentized_range_quantile(0.05, 3, 10) == Approx(3.87678).epsilon(1e-4));

    SUBCASE("k = 2 reduces to Student t") {
        for (double df : {3.0, 10.0, 40.0}) {
            boost::math::students_t t(df);
            CHECK(studentized_range_quantile(0.05, 2, df) / std::sqrt(2.0) ==
                  Approx(boost::math::quantile(t, 0.975)).epsilon(1e-5));
        }
    }
    SUBCASE("cdf is a distribution function") {
        double prev = 0.0;
        for (double q = 0.0; q <= 8.0; q += 0.25) {
            const double c = studentized_range_cdf(q, 4, 20);
            CHECK(c >= prev - 1e-12);
            CHECK(c <= 1.0 + 1e-12);
            prev = c;
        }
        CHECK(studentized_range_cdf(0.0, 4, 20) == 0.0);
        CHECK(prev > 0.999);
    }
}

TEST_CASE("Tukey-Kramer intervals") {
    const auto g = era_like_groups(5);
    const auto intervals = tukey_hsd(g, 0.95);
    REQUIRE(intervals.size() == 15);
    const auto a = anova_oneway(g);
    const double q = studentized_range_quantile(0.05, 6, a.df_within);
    for (const auto& iv : intervals) {
        CHECK(iv.lower <= iv.mean_difference);
        CHECK(iv.mean_difference <= iv.upper);
        CHECK(iv.significant == (iv.lower > 0 || iv.upper < 0));
        std::size_t i = 0, j = 0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (g[k].name == iv.group_a) i = k;
            if (g[k].name == iv.group_b) j = k;
        }
        const double half =
            q / std::sqrt(2.0) *
            std::sqrt(a.ms_within() * (1.0 / g[i].values.size() + 1.0 / g[j].values.size()));
        CHECK(iv.upper - iv.mean_difference == Approx(half).epsilon(1e-9));
    }

    SUBCASE("swapping groups negates the interval") {
        const auto swapped = tukey_hsd({g[1], g[0]}, 0.95);
        const auto direct = tukey_hsd({g[0], g[1]}, 0.95);
        CHECK(swapped[0].mean_difference == Approx(-direct[0].mean_difference));
        CHECK(swapped[0].lower == Approx(-direct[0].upper));
        CHECK(swapped[0].upper == Approx(-direct[0].lower));
    }
    SUBCASE("decisions survive common scaling") {
        auto scaled = g;
        for (auto& grp : scaled)
            for (auto& v : grp.values) v *= 7.5;
        const auto s = tukey_hsd(scaled, 0.95);
        for (std::size_t k = 0; k < s.size(); ++k)
            CHECK(s[k].significant == intervals[k].significant);
    }
    SUBCASE("empty group") {
        CHECK(kind_of([&] { tukey_hsd({g[0], {"empty", {}}}, 0.95); }) == ErrorKind::parameter);
    }
    SUBCASE("CSV") {
        std::ostringstream out;
        write_tukey_csv(out, intervals);
        CHECK(out.str().rfind("era_a,era_b,diff,lower,upper,significant\n", 0) == 0);
    }
}

TEST_CASE("log transform") {
    const auto g = log_transform({{"a", {1.0, std::exp(2.0)}}});
    CHECK(g[0].values[1] == Approx(2.0));
}
