#pragma once

// Exponential distribution: density, CDF, quantile, maximum-likelihood fit,
// empirical distribution and QQ data with order-statistic bands.

#include "rare/domain.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace rare {

double exp_pdf(double t, double rate);
double exp_cdf(double t, double rate);
double exp_sf(double t, double rate);
double exp_quantile(double p, double rate);

// rate = 1 / mean; SD with the n-1 denominator (0 when n == 1).
ExponentialFit fit_mle(std::span<const double> iats);
ExponentialFit fit_mle(const IatSeries& iats);

struct EdfPoint {
    double t = 0.0;
    double empirical_prob = 0.0;
};

// One point per distinct value, F_n(t) = #{x <= t} / n.
std::vector<EdfPoint> edf(std::span<const double> iats);

struct QqPoint {
    double observed_quantile = 0.0;
    double theoretical_quantile = 0.0;
    double lower_band = 0.0;
    double upper_band = 0.0;
};

// Hazen plotting positions (i - 0.5)/n against the sorted sample; pointwise
// bands from Beta(i, n + 1 - i), the law of the i-th uniform order statistic.
std::vector<QqPoint> qq_points(std::span<const double> iats, const ExponentialFit& fit,
                               double band_level = 0.95);

// `t,edf,cdf` at each EDF step.
void write_edf_cdf_csv(std::ostream& out, const std::vector<EdfPoint>& points,
                       const ExponentialFit& fit);
// `obs_q,theo_q,lo,hi`
void write_qq_csv(std::ostream& out, const std::vector<QqPoint>& points);

} // namespace rare
