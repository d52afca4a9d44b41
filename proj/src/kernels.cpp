#include "rare/kernels.hpp"

#include "rare/domain.hpp"
#include "rare/gof.hpp"
#include "rare/numerics.hpp"

#include <cmath>
#include <numeric>

#ifdef RARE_WITH_OPENMP
#include <omp.h>
#endif

namespace rare::kernels {

ReplicateRng::ReplicateRng(std::uint64_t seed, std::uint64_t replicate) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replicate),
                      static_cast<std::uint32_t>(replicate >> 32)};
    engine_.seed(seq);
}

std::uint64_t ReplicateRng::next() { return engine_(); }

double ReplicateRng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double ReplicateRng::exponential(double rate) {
    double u = 0.0;
    do {
        u = uniform();
    } while (u == 0.0);
    return -std::log1p(-u) / rate;
}

namespace {

double one_replicate(std::size_t n, double rate, EdfStatistic stat, std::uint64_t seed,
                     std::size_t r, std::vector<double>& sample) {
    ReplicateRng rng(seed, r);
    for (auto& x : sample) x = rng.exponential(rate);
    const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) /
                        static_cast<double>(n);
    const double refit = 1.0 / mean;
    return stat == EdfStatistic::ks ? ks_statistic(sample, refit) : ad_statistic(sample, refit);
}

void check_args(std::size_t n, double rate) {
    if (n == 0) throw Error(ErrorKind::insufficient_data, "bootstrap needs n >= 1");
    if (!(rate > 0.0)) throw Error(ErrorKind::parameter, "rate must be positive");
}

double band_quantile(double p, std::size_t i, std::size_t n) {
    return num::beta_quantile(p, static_cast<double>(i + 1), static_cast<double>(n - i));
}

} // namespace

std::vector<double> bootstrap_statistics_serial(std::size_t n, double rate, EdfStatistic stat,
                                                std::size_t replicates, std::uint64_t seed) {
    check_args(n, rate);
    std::vector<double> out(replicates);
    std::vector<double> sample(n);
    for (std::size_t r = 0; r < replicates; ++r)
        out[r] = one_replicate(n, rate, stat, seed, r, sample);
    return out;
}

std::vector<double> bootstrap_statistics_omp(std::size_t n, double rate, EdfStatistic stat,
                                             std::size_t replicates, std::uint64_t seed) {
    check_args(n, rate);
    std::vector<double> out(replicates);
    const auto count = static_cast<std::ptrdiff_t>(replicates);
#ifdef RARE_WITH_OPENMP
#pragma omp parallel
#endif
    {
        std::vector<double> sample(n);
#ifdef RARE_WITH_OPENMP
#pragma omp for schedule(static)
#endif
        for (std::ptrdiff_t r = 0; r < count; ++r)
            out[r] = one_replicate(n, rate, stat, seed, static_cast<std::size_t>(r), sample);
    }
    return out;
}

std::vector<double> bootstrap_statistics(std::size_t n, double rate, EdfStatistic stat,
                                         std::size_t replicates, std::uint64_t seed) {
    return openmp_enabled() ? bootstrap_statistics_omp(n, rate, stat, replicates, seed)
                            : bootstrap_statistics_serial(n, rate, stat, replicates, seed);
}

OrderStatisticBands order_statistic_bands_serial(std::size_t n, double lower_p, double upper_p) {
    OrderStatisticBands b{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        b.lower[i] = band_quantile(lower_p, i, n);
        b.upper[i] = band_quantile(upper_p, i, n);
    }
    return b;
}

OrderStatisticBands order_statistic_bands_omp(std::size_t n, double lower_p, double upper_p) {
    OrderStatisticBands b{std::vector<double>(n), std::vector<double>(n)};
    const auto count = static_cast<std::ptrdiff_t>(n);
#ifdef RARE_WITH_OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        b.lower[k] = band_quantile(lower_p, k, n);
        b.upper[k] = band_quantile(upper_p, k, n);
    }
    return b;
}

OrderStatisticBands order_statistic_bands(std::size_t n, double lower_p, double upper_p) {
    return openmp_enabled() ? order_statistic_bands_omp(n, lower_p, upper_p)
                            : order_statistic_bands_serial(n, lower_p, upper_p);
}

bool openmp_enabled() {
#ifdef RARE_WITH_OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads() {
#ifdef RARE_WITH_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace rare::kernels
