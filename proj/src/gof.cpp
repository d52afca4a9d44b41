#include "rare/gof.hpp"

#include "rare/expfit.hpp"
#include "rare/numerics.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <type_traits>
#include <cstdio>

namespace rare {

namespace {

std::vector<double> sorted_copy(std::span<const double> xs) {
    std::vector<double> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    return v;
}

// Dense row-major m x m matrices for the exact K-S recursion.
void mat_multiply(const std::vector<double>& a, const std::vector<double>& b,
                  std::vector<double>& c, int m) {
    std::fill(c.begin(), c.end(), 0.0);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            const double aik = a[i * m + k];
            if (aik == 0.0) continue;
            for (int j = 0; j < m; ++j) c[i * m + j] += aik * b[k * m + j];
        }
}

// V = A^n with a decimal exponent carried in `ev` to avoid overflow.
void mat_power(const std::vector<double>& a, int ea, std::vector<double>& v, int& ev, int m,
               std::size_t n) {
    if (n == 1) {
        v = a;
        ev = ea;
        return;
    }
    mat_power(a, ea, v, ev, m, n / 2);
    std::vector<double> b(v.size());
    mat_multiply(v, v, b, m);
    int eb = 2 * ev;
    if (n % 2 == 0) {
        v.swap(b);
        ev = eb;
    } else {
        mat_multiply(a, b, v, m);
        ev = ea + eb;
    }
    if (v[(m / 2) * m + (m / 2)] > 1e140) {
        for (auto& x : v) x *= 1e-140;
        ev += 140;
    }
}

constexpr std::array<AdCriticalValue, 9> kAdExponential = {{
    {0.25, 0.736},
    {0.20, 0.816},
    {0.15, 0.916},
    {0.10, 1.062},
    {0.05, 1.321},
    {0.025, 1.591},
    {0.01, 1.959},
    {0.005, 2.244},
    {0.0025, 2.534},
}};

// Percentage points of the limiting A^2 distribution (all parameters known).
constexpr std::array<AdCriticalValue, 9> kAdKnown = {{
    {0.25, 1.248},
    {0.20, 1.408},
    {0.15, 1.621},
    {0.10, 1.933},
    {0.05, 2.492},
    {0.025, 3.077},
    {0.01, 3.878},
    {0.005, 4.497},
    {0.0025, 5.124},
}};

std::vector<LevelDecision> decide(const std::variant<double, PValueRange>& p) {
    std::vector<LevelDecision> out;
    for (double alpha : kDecisionLevels) {
        bool reject = std::visit(
            [&](const auto& v) {
                if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>)
                    return v < alpha;
                else
                    return v.upper <= alpha;
            },
            p);
        out.push_back({alpha, reject});
    }
    return out;
}

std::string branch_name(KsBranch b) {
    switch (b) {
    case KsBranch::trivial: return "closed-form";
    case KsBranch::exact: return "exact";
    case KsBranch::asymptotic: return "asymptotic";
    }
    return "";
}

} // namespace

// ----------------------------------------------------------------------------
// Kolmogorov-Smirnov
// ----------------------------------------------------------------------------

double ks_statistic(std::span<const double> iats, double rate) {
    if (iats.empty()) throw Error(ErrorKind::insufficient_data, "K-S statistic of empty series");
    const auto x = sorted_copy(iats);
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = exp_cdf(x[i], rate);
        const double above = static_cast<double>(i + 1) / n - f;
        const double below = f - static_cast<double>(i) / n;
        d = std::max({d, above, below});
    }
    return std::clamp(d, 0.0, 1.0);
}

double ks_statistic(std::span<const double> iats, const ExponentialFit& fit) {
    return ks_statistic(iats, fit.rate);
}

double ks_cdf_exact(std::size_t n, double d) {
    const double nd = static_cast<double>(n) * d;
    const int k = static_cast<int>(nd) + 1;
    const int m = 2 * k - 1;
    const double h = k - nd;

    std::vector<double> hm(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) hm[i * m + j] = (i - j + 1 < 0) ? 0.0 : 1.0;
    for (int i = 0; i < m; ++i) {
        hm[i * m] -= std::pow(h, i + 1);
        hm[(m - 1) * m + i] -= std::pow(h, m - i);
    }
    hm[(m - 1) * m] += (2 * h - 1 > 0 ? std::pow(2 * h - 1, m) : 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i - j + 1 > 0)
                for (int g = 1; g <= i - j + 1; ++g) hm[i * m + j] /= g;

    std::vector<double> q;
    int eq = 0;
    mat_power(hm, 0, q, eq, m, n);
    double s = q[(k - 1) * m + k - 1];
    for (std::size_t i = 1; i <= n; ++i) {
        s = s * static_cast<double>(i) / static_cast<double>(n);
        if (s < 1e-140) {
            s *= 1e140;
            eq -= 140;
        }
    }
    return s * std::pow(10.0, eq);
}

double ks_sf_asymptotic(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 1.0) {
        // Jacobi theta form of the same series; converges fast for small x.
        double sum = 0.0;
        for (int k = 1; k <= 50; ++k) {
            const double t = (2 * k - 1) * M_PI / x;
            sum += std::exp(-t * t / 8.0);
        }
        return std::clamp(1.0 - std::sqrt(2.0 * M_PI) / x * sum, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsPValue ks_pvalue(double d, std::size_t n) {
    if (!(d >= 0.0 && d <= 1.0)) throw Error(ErrorKind::domain, "K-S statistic outside [0,1]");
    if (n == 0) throw Error(ErrorKind::insufficient_data, "K-S p-value needs n >= 1");
    const double nn = static_cast<double>(n);
    // Closed forms at both ends of the support.
    if (d <= 0.5 / nn) return {1.0, KsBranch::trivial};
    if (d >= 1.0 - 1.0 / nn) return {std::min(1.0, 2.0 * std::pow(1.0 - d, nn)), KsBranch::trivial};
    if (n <= kKsExactMaxN)
        return {std::clamp(1.0 - ks_cdf_exact(n, d), 0.0, 1.0), KsBranch::exact};
    return {ks_sf_asymptotic(std::sqrt(nn) * d), KsBranch::asymptotic};
}

// ----------------------------------------------------------------------------
// Anderson-Darling
// ----------------------------------------------------------------------------

double ad_statistic_uniform(std::span<const double> u) {
    if (u.empty()) throw Error(ErrorKind::insufficient_data, "A-D statistic of empty series");
    const auto s = sorted_copy(u);
    for (double v : s)
        if (!(v > 0.0 && v < 1.0)) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            throw Error(ErrorKind::degenerate,
                        std::string("A-D needs F(x) strictly inside (0,1), got ") + buf);
        }
    const std::size_t n = s.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 2.0 * static_cast<double>(i + 1) - 1.0;
        sum += w * (std::log(s[i]) + std::log1p(-s[n - 1 - i]));
    }
    const double nn = static_cast<double>(n);
    return std::max(0.0, -nn - sum / nn);
}

double ad_statistic(std::span<const double> iats, double rate) {
    std::vector<double> u(iats.size());
    std::transform(iats.begin(), iats.end(), u.begin(),
                   [rate](double x) { return exp_cdf(x, rate); });
    return ad_statistic_uniform(u);
}

double ad_statistic(std::span<const double> iats, const ExponentialFit& fit) {
    return ad_statistic(iats, fit.rate);
}

std::span<const AdCriticalValue> ad_table_exponential() { return kAdExponential; }
std::span<const AdCriticalValue> ad_table_known_parameters() { return kAdKnown; }

PValueRange ad_pvalue_range(double a2, std::size_t n, bool estimated_rate) {
    if (!(a2 >= 0.0)) throw Error(ErrorKind::domain, "A-D statistic must be non-negative");
    const auto table = estimated_rate ? ad_table_exponential() : ad_table_known_parameters();
    double a = a2;
    if (estimated_rate && n > 0) a *= 1.0 + 0.6 / static_cast<double>(n);

    if (a < table.front().critical) return {table.front().alpha, 1.0};
    for (std::size_t j = 0; j + 1 < table.size(); ++j)
        if (a < table[j + 1].critical) return {table[j + 1].alpha, table[j].alpha};
    return {0.0, table.back().alpha};
}

std::string format_p_range(const PValueRange& r) {
    char buf[64];
    if (r.upper >= 1.0) {
        std::snprintf(buf, sizeof buf, "> %g", r.lower);
    } else if (r.lower <= 0.0) {
        std::snprintf(buf, sizeof buf, "< %g", r.upper);
    } else {
        std::snprintf(buf, sizeof buf, "%.2f-%.2f", r.lower, r.upper);
    }
    return buf;
}

// ----------------------------------------------------------------------------
// Chi-squared
// ----------------------------------------------------------------------------

GofReport chisq_binned(std::span<const double> iats, const ExponentialFit& fit, int bins,
                       std::optional<int> df_override) {
    if (bins < 2) throw Error(ErrorKind::parameter, "chi-squared test needs at least 2 bins");
    if (iats.empty()) throw Error(ErrorKind::insufficient_data, "chi-squared test of empty series");
    if (df_override && *df_override < 1)
        throw Error(ErrorKind::parameter, "degrees of freedom must be >= 1");

    std::vector<std::size_t> observed(static_cast<std::size_t>(bins), 0);
    for (double x : iats) {
        const double u = exp_cdf(x, fit.rate);
        auto j = static_cast<std::size_t>(std::floor(u * bins));
        observed[std::min(j, observed.size() - 1)]++;
    }
    const double n = static_cast<double>(iats.size());
    const double expected = n / bins;
    double stat = 0.0;
    for (auto o : observed) {
        const double diff = static_cast<double>(o) - expected;
        stat += diff * diff / expected;
    }

    GofReport r;
    r.test_name = "chisq";
    r.statistic = stat;
    r.n = iats.size();
    r.df = df_override.value_or(bins);
    r.p_value = num::chisq_sf(stat, *r.df);
    r.decision_at = decide(r.p_value);
    r.note = std::to_string(bins) + " equal-probability bins";
    if (iats.size() < static_cast<std::size_t>(5 * bins))
        r.warnings.push_back("expected count per bin below 5 (n=" + std::to_string(iats.size()) +
                             ", bins=" + std::to_string(bins) + ")");
    return r;
}

// ----------------------------------------------------------------------------
// Reports
// ----------------------------------------------------------------------------

GofReport ks_report(std::span<const double> iats, const ExponentialFit& fit) {
    GofReport r;
    r.test_name = "ks";
    r.statistic = ks_statistic(iats, fit);
    r.n = iats.size();
    const auto p = ks_pvalue(r.statistic, r.n);
    r.p_value = p.p;
    r.decision_at = decide(r.p_value);
    r.note = "simple-hypothesis null, " + branch_name(p.branch) + " distribution";
    return r;
}

GofReport ad_report(std::span<const double> iats, const ExponentialFit& fit,
                    bool estimated_rate) {
    GofReport r;
    r.test_name = "ad";
    r.statistic = ad_statistic(iats, fit);
    r.n = iats.size();
    r.p_value = ad_pvalue_range(r.statistic, r.n, estimated_rate);
    r.decision_at = decide(r.p_value);
    r.note = estimated_rate ? "exponential table, modified A2(1+0.6/n)"
                            : "all-parameters-known table";
    return r;
}

McPValue mc_pvalue(std::span<const double> iats, EdfStatistic test, std::size_t replications,
                   std::uint64_t seed) {
    if (replications < 100)
        throw Error(ErrorKind::parameter, "Monte Carlo p-value needs at least 100 replications");
    const auto fit = fit_mle(iats);
    McPValue out;
    out.replications = replications;
    out.observed = test == EdfStatistic::ks ? ks_statistic(iats, fit) : ad_statistic(iats, fit);
    const auto stats =
        kernels::bootstrap_statistics(iats.size(), fit.rate, test, replications, seed);
    out.exceed = static_cast<std::size_t>(
        std::count_if(stats.begin(), stats.end(), [&](double s) { return s >= out.observed; }));
    out.p = static_cast<double>(out.exceed) / static_cast<double>(replications);
    return out;
}

GofReport mc_report(std::span<const double> iats, EdfStatistic test, std::size_t replications,
                    std::uint64_t seed) {
    const auto mc = mc_pvalue(iats, test, replications, seed);
    GofReport r;
    r.test_name = test == EdfStatistic::ks ? "ks_mc" : "ad_mc";
    r.statistic = mc.observed;
    r.n = iats.size();
    r.p_value = mc.p;
    r.decision_at = decide(r.p_value);
    r.note = "parametric bootstrap, " + std::to_string(replications) + " replications, seed " +
             std::to_string(seed);
    if (mc.exceed == 0) r.note += ", p < 1/" + std::to_string(replications);
    return r;
}

std::string to_json_line(const GofReport& report) {
    nlohmann::ordered_json j;
    j["test"] = report.test_name;
    j["statistic"] = report.statistic;
    j["n"] = report.n;
    if (const auto* p = std::get_if<double>(&report.p_value)) {
        j["p"] = *p;
    } else {
        const auto& r = std::get<PValueRange>(report.p_value);
        j["p_range"] = {r.lower, r.upper};
    }
    j["df"] = report.df ? nlohmann::ordered_json(*report.df) : nlohmann::ordered_json(nullptr);
    return j.dump();
}

} // namespace rare
