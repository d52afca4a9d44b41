#pragma once

// Goodness-of-fit tests for the exponential model.

#include "rare/domain.hpp"
#include "rare/kernels.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rare {

struct PValueRange {
    double lower = 0.0;
    double upper = 1.0;
    bool operator==(const PValueRange&) const = default;
};

struct LevelDecision {
    double alpha = 0.05;
    bool reject = false;
};

struct GofReport {
    std::string test_name; // "ks", "ad", "chisq", "ks_mc", "ad_mc"
    double statistic = 0.0;
    std::size_t n = 0;
    std::variant<double, PValueRange> p_value = 1.0;
    std::optional<int> df;
    std::vector<LevelDecision> decision_at;
    std::string note; // method / branch detail
    std::vector<std::string> warnings;
};

// Significance levels reported in `decision_at`.
inline constexpr double kDecisionLevels[] = {0.10, 0.05, 0.01};

// --- Kolmogorov-Smirnov ----------------------------------------------------

double ks_statistic(std::span<const double> iats, double rate);
double ks_statistic(std::span<const double> iats, const ExponentialFit& fit);

enum class KsBranch { trivial, exact, asymptotic };

struct KsPValue {
    double p = 1.0;
    KsBranch branch = KsBranch::trivial;
};

// Largest n for which the exact (matrix) distribution is used.
inline constexpr std::size_t kKsExactMaxN = 140;

KsPValue ks_pvalue(double d, std::size_t n);
// P(D_n < d), exact, Marsaglia-Tsang-Wang matrix method.
double ks_cdf_exact(std::size_t n, double d);
// 2 sum (-1)^(k-1) exp(-2 k^2 x^2) with x = sqrt(n) d.
double ks_sf_asymptotic(double x);

// --- Anderson-Darling ------------------------------------------------------

// From probability-integral-transformed values u = F(x); all in (0,1).
double ad_statistic_uniform(std::span<const double> u);
double ad_statistic(std::span<const double> iats, double rate);
double ad_statistic(std::span<const double> iats, const ExponentialFit& fit);

struct AdCriticalValue {
    double alpha;
    double critical;
};

// Upper-tail critical values. Estimated-scale exponential case applies to
// the modified statistic A*(1 + 0.6/n).
std::span<const AdCriticalValue> ad_table_exponential();
std::span<const AdCriticalValue> ad_table_known_parameters();

PValueRange ad_pvalue_range(double a2, std::size_t n, bool estimated_rate);
std::string format_p_range(const PValueRange& range);

// --- Pearson chi-squared ---------------------------------------------------

GofReport chisq_binned(std::span<const double> iats, const ExponentialFit& fit, int bins = 10,
                       std::optional<int> df_override = std::nullopt);

// --- Convenience reports ---------------------------------------------------

GofReport ks_report(std::span<const double> iats, const ExponentialFit& fit);
GofReport ad_report(std::span<const double> iats, const ExponentialFit& fit,
                    bool estimated_rate = true);

// --- Parametric bootstrap --------------------------------------------------

using kernels::EdfStatistic;

struct McPValue {
    double p = 1.0;
    double observed = 0.0;
    std::size_t replications = 0;
    std::size_t exceed = 0;
};

// Refits on every replicate; deterministic given `seed`, independent of the
// thread count.
McPValue mc_pvalue(std::span<const double> iats, EdfStatistic test, std::size_t replications,
                   std::uint64_t seed);
GofReport mc_report(std::span<const double> iats, EdfStatistic test, std::size_t replications,
                    std::uint64_t seed);

// `{"test":…,"statistic":…,"n":…,"p":…|"p_range":[lo,hi],"df":…}`
std::string to_json_line(const GofReport& report);

} // namespace rare
