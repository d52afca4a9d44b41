#pragma once

// One-way ANOVA across groups and Tukey-Kramer family-wise intervals.

#include "rare/domain.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rare {

struct Group {
    std::string name;
    std::vector<double> values;
};

struct GroupSummary {
    std::string name;
    std::size_t n = 0;
    double mean = 0.0;
};

struct AnovaReport {
    double f_statistic = 0.0;
    int df_between = 0;
    int df_within = 0;
    double ss_between = 0.0;
    double ss_within = 0.0;
    double p_value = 1.0;
    std::vector<GroupSummary> groups;

    double ms_within() const { return ss_within / df_within; }
};

AnovaReport anova_oneway(const std::vector<Group>& groups);

// Natural log of every value; for the non-default log-IAT analysis.
std::vector<Group> log_transform(const std::vector<Group>& groups);

struct TukeyInterval {
    std::string group_a;
    std::string group_b;
    double mean_difference = 0.0; // mean_a - mean_b
    double lower = 0.0;
    double upper = 0.0;
    double family_level = 0.95;
    bool significant = false; // 0 outside [lower, upper]
};

// All pairs (i, j), i < j, in group order.
std::vector<TukeyInterval> tukey_hsd(const std::vector<Group>& groups,
                                     double family_level = 0.95);

// `era_a,era_b,diff,lower,upper,significant`
void write_tukey_csv(std::ostream& out, const std::vector<TukeyInterval>& intervals);

// Studentized range distribution for `k` means and `df` degrees of freedom
// (df may be infinite).
double studentized_range_cdf(double q, int k, double df);
// Upper-tail quantile: P(Q > q) = alpha.
double studentized_range_quantile(double alpha, int k, double df);

} // namespace rare
