#include "rare/compare.hpp"

#include "rare/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace rare {

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// P(range of k iid standard normals <= w).
double normal_range_cdf(double w, int k) {
    if (w <= 0.0) return 0.0;
    auto integrand = [w, k](double z) {
        const double inner = num::normal_cdf(z) - num::normal_cdf(z - w);
        return num::normal_pdf(z) * std::pow(std::max(inner, 0.0), k - 1);
    };
    // The integrand vanishes outside the support of phi(z).
    const double lo = -9.0;
    const double hi = 9.0;
    const double mid = 0.5 * w;
    double total = 0.0;
    total += num::integrate(integrand, lo, mid - 3.0, 1e-14, 1e-11).value;
    total += num::integrate(integrand, mid - 3.0, mid + 3.0, 1e-14, 1e-11).value;
    total += num::integrate(integrand, mid + 3.0, std::max(hi, mid + 4.0), 1e-14, 1e-11).value;
    return std::clamp(k * total, 0.0, 1.0);
}

// log density of s = sqrt(V/df), V ~ chi-squared(df).
double log_scaled_chi_pdf(double s, double df) {
    if (s <= 0.0) return -num::kInf;
    const double h = 0.5 * df;
    int sign = 0;
    return std::log(2.0) + h * std::log(h) - ::lgamma_r(h, &sign) + (df - 1.0) * std::log(s) -
           h * s * s;
}

} // namespace

AnovaReport anova_oneway(const std::vector<Group>& groups) {
    if (groups.size() < 2) throw Error(ErrorKind::insufficient_data, "ANOVA needs >= 2 groups");
    std::size_t total = 0;
    for (const auto& g : groups) {
        if (g.values.empty())
            throw Error(ErrorKind::insufficient_data, "ANOVA group '" + g.name + "' is empty");
        total += g.values.size();
    }
    if (total <= groups.size())
        throw Error(ErrorKind::insufficient_data,
                    "ANOVA needs more observations than groups");

    double grand = 0.0;
    for (const auto& g : groups) grand += std::accumulate(g.values.begin(), g.values.end(), 0.0);
    grand /= static_cast<double>(total);

    AnovaReport r;
    for (const auto& g : groups) {
        const double m = mean_of(g.values);
        r.ss_between += static_cast<double>(g.values.size()) * (m - grand) * (m - grand);
        for (double v : g.values) r.ss_within += (v - m) * (v - m);
        r.groups.push_back({g.name, g.values.size(), m});
    }
    r.df_between = static_cast<int>(groups.size()) - 1;
    r.df_within = static_cast<int>(total - groups.size());

    if (r.ss_within <= 0.0)
        throw Error(ErrorKind::degenerate,
                    "within-group sum of squares is zero; F is undefined");
    r.f_statistic = (r.ss_between / r.df_between) / (r.ss_within / r.df_within);
    r.p_value = num::f_sf(r.f_statistic, r.df_between, r.df_within);
    return r;
}

std::vector<Group> log_transform(const std::vector<Group>& groups) {
    std::vector<Group> out = groups;
    for (auto& g : out)
        for (auto& v : g.values) {
            if (!(v > 0.0)) throw Error(ErrorKind::domain, "log transform needs positive values");
            v = std::log(v);
        }
    return out;
}

double studentized_range_cdf(double q, int k, double df) {
    if (k < 2) throw Error(ErrorKind::parameter, "studentized range needs k >= 2");
    if (!(df > 0.0)) throw Error(ErrorKind::parameter, "degrees of freedom must be positive");
    if (q <= 0.0) return 0.0;
    if (std::isinf(df)) return normal_range_cdf(q, k);

    // Outer integral over the pooled-scale distribution, restricted to where
    // its density is within e^-40 of the mode.
    const double mode = df > 1.0 ? std::sqrt((df - 1.0) / df) : 0.5;
    const double log_peak = log_scaled_chi_pdf(mode, df);
    auto negligible = [&](double s) { return log_scaled_chi_pdf(s, df) < log_peak - 40.0; };
    double hi = std::max(mode, 1.0);
    while (!negligible(hi)) hi *= 1.5;
    double lo = mode;
    while (lo > 1e-12 && !negligible(lo)) lo *= 0.5;
    if (lo <= 1e-12) lo = 0.0;

    auto integrand = [&](double s) {
        if (s <= 0.0) return 0.0;
        return std::exp(log_scaled_chi_pdf(s, df)) * normal_range_cdf(q * s, k);
    };
    double total = 0.0;
    const int pieces = 8;
    for (int i = 0; i < pieces; ++i) {
        const double a = lo + (hi - lo) * i / pieces;
        const double b = lo + (hi - lo) * (i + 1) / pieces;
        total += num::integrate(integrand, a, b, 1e-13, 1e-10).value;
    }
    return std::clamp(total, 0.0, 1.0);
}

double studentized_range_quantile(double alpha, int k, double df) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::domain, "alpha must lie in (0,1)");
    const double target = 1.0 - alpha;
    double lo = 0.0;
    double hi = 4.0;
    while (studentized_range_cdf(hi, k, df) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw Error(ErrorKind::domain, "studentized range quantile diverged");
    }
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double p = studentized_range_cdf(mid, k, df);
        if (std::fabs(p - target) < 1e-9 || hi - lo < 1e-9) return mid;
        (p < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<TukeyInterval> tukey_hsd(const std::vector<Group>& groups, double family_level) {
    if (groups.size() < 2) throw Error(ErrorKind::parameter, "Tukey HSD needs >= 2 groups");
    for (const auto& g : groups)
        if (g.values.empty())
            throw Error(ErrorKind::parameter, "Tukey HSD group '" + g.name + "' is empty");
    if (!(family_level > 0.0 && family_level < 1.0))
        throw Error(ErrorKind::domain, "family level must lie in (0,1)");

    const auto anova = anova_oneway(groups);
    if (anova.df_within < 1) throw Error(ErrorKind::insufficient_data, "df_within < 1");
    const double q = studentized_range_quantile(1.0 - family_level,
                                                static_cast<int>(groups.size()),
                                                static_cast<double>(anova.df_within));
    const double msw = anova.ms_within();

    std::vector<TukeyInterval> out;
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            const auto& a = anova.groups[i];
            const auto& b = anova.groups[j];
            const double half =
                q / std::sqrt(2.0) *
                std::sqrt(msw * (1.0 / static_cast<double>(a.n) + 1.0 / static_cast<double>(b.n)));
            TukeyInterval t;
            t.group_a = a.name;
            t.group_b = b.name;
            t.mean_difference = a.mean - b.mean;
            t.lower = t.mean_difference - half;
            t.upper = t.mean_difference + half;
            t.family_level = family_level;
            t.significant = t.lower > 0.0 || t.upper < 0.0;
            out.push_back(t);
        }
    return out;
}

void write_tukey_csv(std::ostream& out, const std::vector<TukeyInterval>& intervals) {
    out << "era_a,era_b,diff,lower,upper,significant\n";
    char buf[128];
    for (const auto& t : intervals) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%s", t.mean_difference, t.lower, t.upper,
                      t.significant ? "true" : "false");
        out << t.group_a << ',' << t.group_b << ',' << buf << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "failed writing Tukey intervals");
}

} // namespace rare
