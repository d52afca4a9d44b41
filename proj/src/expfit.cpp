#include "rare/expfit.hpp"

#include "rare/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace rare {

namespace {

void require_rate(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw Error(ErrorKind::parameter, "rate must be positive and finite");
}

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace

double exp_pdf(double t, double rate) {
    require_rate(rate);
    return t < 0.0 ? 0.0 : rate * std::exp(-rate * t);
}

double exp_cdf(double t, double rate) {
    require_rate(rate);
    return t <= 0.0 ? 0.0 : -std::expm1(-rate * t);
}

double exp_sf(double t, double rate) {
    require_rate(rate);
    return t <= 0.0 ? 1.0 : std::exp(-rate * t);
}

double exp_quantile(double p, double rate) {
    require_rate(rate);
    if (!(p >= 0.0 && p < 1.0))
        throw Error(ErrorKind::domain, "probability must lie in [0, 1)");
    return -std::log1p(-p) / rate;
}

ExponentialFit fit_mle(std::span<const double> iats) {
    if (iats.empty())
        throw Error(ErrorKind::insufficient_data, "cannot fit an empty IAT series");
    for (double v : iats)
        if (!(v > 0.0)) throw Error(ErrorKind::domain, "IAT values must be positive");

    const double n = static_cast<double>(iats.size());
    const double mean = std::accumulate(iats.begin(), iats.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : iats) ss += (v - mean) * (v - mean);

    ExponentialFit fit;
    fit.n = iats.size();
    fit.sample_mean = mean;
    fit.sample_sd = iats.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    fit.rate = 1.0 / mean;
    return fit;
}

ExponentialFit fit_mle(const IatSeries& iats) {
    const auto real = iats.as_real();
    return fit_mle(std::span<const double>(real));
}

std::vector<EdfPoint> edf(std::span<const double> iats) {
    std::vector<double> sorted(iats.begin(), iats.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<EdfPoint> out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        out.push_back({sorted[i], static_cast<double>(i + 1) / n});
    }
    if (!out.empty()) out.back().empirical_prob = 1.0;
    return out;
}

std::vector<QqPoint> qq_points(std::span<const double> iats, const ExponentialFit& fit,
                               double band_level) {
    if (iats.size() < 2)
        throw Error(ErrorKind::insufficient_data, "QQ points need at least 2 observations");
    if (!(band_level > 0.0 && band_level < 1.0))
        throw Error(ErrorKind::domain, "band level must lie in (0, 1)");
    require_rate(fit.rate);

    std::vector<double> sorted(iats.begin(), iats.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const auto bands = kernels::order_statistic_bands(n, 0.5 * (1.0 - band_level),
                                                      0.5 * (1.0 + band_level));

    std::vector<QqPoint> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        out[i].observed_quantile = sorted[i];
        out[i].theoretical_quantile = exp_quantile(p, fit.rate);
        out[i].lower_band = exp_quantile(bands.lower[i], fit.rate);
        out[i].upper_band = exp_quantile(std::min(bands.upper[i], 1.0 - 1e-16), fit.rate);
    }
    return out;
}

void write_edf_cdf_csv(std::ostream& out, const std::vector<EdfPoint>& points,
                       const ExponentialFit& fit) {
    out << "t,edf,cdf\n";
    for (const auto& p : points)
        out << fmt9(p.t) << ',' << fmt9(p.empirical_prob) << ',' << fmt9(exp_cdf(p.t, fit.rate))
            << '\n';
    if (!out) throw Error(ErrorKind::io, "failed writing EDF/CDF points");
}

void write_qq_csv(std::ostream& out, const std::vector<QqPoint>& points) {
    out << "obs_q,theo_q,lo,hi\n";
    for (const auto& p : points)
        out << fmt9(p.observed_quantile) << ',' << fmt9(p.theoretical_quantile) << ','
            << fmt9(p.lower_band) << ',' << fmt9(p.upper_band) << '\n';
    if (!out) throw Error(ErrorKind::io, "failed writing QQ points");
}

} // namespace rare
