#pragma once

// Data-parallel kernels. Every kernel has a serial reference (`*_serial`)
// and an OpenMP version (`*_omp`) that must return bit-identical results;
// the public entry point dispatches to the OpenMP one when it is compiled in.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rare::kernels {

enum class EdfStatistic { ks, ad };

// Deterministic per-replicate random stream: the state depends only on
// (seed, replicate), never on which thread draws it.
class ReplicateRng {
public:
    ReplicateRng(std::uint64_t seed, std::uint64_t replicate);
    std::uint64_t next();
    double uniform();                   // in [0, 1)
    double exponential(double rate);

private:
    std::mt19937_64 engine_;
};

// Draws `n` exponentials at `rate` for each replicate, refits the rate by
// maximum likelihood, and returns the statistic per replicate.
std::vector<double> bootstrap_statistics_serial(std::size_t n, double rate, EdfStatistic stat,
                                                std::size_t replicates, std::uint64_t seed);
std::vector<double> bootstrap_statistics_omp(std::size_t n, double rate, EdfStatistic stat,
                                             std::size_t replicates, std::uint64_t seed);
std::vector<double> bootstrap_statistics(std::size_t n, double rate, EdfStatistic stat,
                                         std::size_t replicates, std::uint64_t seed);

// Beta(i, n+1-i) quantiles at `lower_p` and `upper_p` for i = 1..n.
struct OrderStatisticBands {
    std::vector<double> lower;
    std::vector<double> upper;
};
OrderStatisticBands order_statistic_bands_serial(std::size_t n, double lower_p, double upper_p);
OrderStatisticBands order_statistic_bands_omp(std::size_t n, double lower_p, double upper_p);
OrderStatisticBands order_statistic_bands(std::size_t n, double lower_p, double upper_p);

bool openmp_enabled();
int max_threads();

} // namespace rare::kernels
