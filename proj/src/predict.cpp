#include "rare/predict.hpp"

#include <cmath>
#include <string>

namespace rare {

namespace {

void require_rate(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw Error(ErrorKind::parameter, "rate must be positive and finite");
}

void require_non_negative(double v, const char* what) {
    if (!(v >= 0.0)) throw Error(ErrorKind::domain, std::string(what) + " must be non-negative");
}

} // namespace

double prob_within(double rate, double horizon) {
    require_rate(rate);
    require_non_negative(horizon, "horizon");
    return -std::expm1(-rate * horizon);
}

double prob_within_given_elapsed(double rate, double elapsed, double horizon) {
    require_non_negative(elapsed, "elapsed");
    return prob_within(rate, horizon);
}

double horizon_for_prob(double rate, double target) {
    require_rate(rate);
    if (!(target >= 0.0 && target < 1.0))
        throw Error(ErrorKind::domain, "target probability must lie in [0, 1)");
    return -std::log1p(-target) / rate;
}

Prediction predict(double rate, double elapsed, double horizon) {
    return {rate, elapsed, horizon, prob_within_given_elapsed(rate, elapsed, horizon)};
}

std::vector<ReferenceRate> reference_era_rates() {
    return {
        {"Dead Ball", 0.001632613, 612.5152},   {"Lively Ball", 0.002495138, 400.7941},
        {"Integration", 0.001538142, 650.1351}, {"Expansion", 0.000433401, 2307.3333},
        {"Free Agency", 0.000640466, 1561.4091}, {"Long Ball", 0.001408975, 709.7547},
    };
}

std::optional<double> reference_rate_for(std::string_view era) {
    for (const auto& r : reference_era_rates())
        if (r.era == era) return r.rate;
    return std::nullopt;
}

} // namespace rare
