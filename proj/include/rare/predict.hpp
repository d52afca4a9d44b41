#pragma once

#include "rare/domain.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace rare {

struct Prediction {
    double rate = 0.0;
    double games_elapsed = 0.0;
    double horizon = 0.0;
    double probability = 0.0;
};

// 1 - exp(-rate * horizon)
double prob_within(double rate, double horizon);

// Memorylessness: the elapsed time since the last event does not enter.
double prob_within_given_elapsed(double rate, double elapsed, double horizon);

// Smallest real horizon reaching `target`: -ln(1 - target) / rate.
double horizon_for_prob(double rate, double target);

Prediction predict(double rate, double elapsed, double horizon);

// Published per-era rates, used when no corpus is supplied.
struct ReferenceRate {
    std::string_view era;
    double rate;
    double mean_iat;
};

std::vector<ReferenceRate> reference_era_rates();
std::optional<double> reference_rate_for(std::string_view era);

} // namespace rare
