#pragma once

#include "rare/domain.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rare::testing {

inline std::string fixture(const std::string& name) {
    return std::string(RARE_FIXTURE_DIR) + "/" + name;
}

inline std::vector<double> exponential_sample(std::size_t n, double rate, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> dist(rate);
    std::vector<double> x(n);
    for (auto& v : x) v = dist(rng);
    return x;
}

inline std::vector<std::int64_t> geometric_iats(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::geometric_distribution<std::int64_t> dist(p);
    std::vector<std::int64_t> x(n);
    for (auto& v : x) v = dist(rng) + 1;
    return x;
}

inline GameRecord game(const std::string& date, int ordinal, const std::string& home,
                       const std::string& away, int hr, int ar) {
    return {*Date::parse_iso(date), ordinal, home, away, hr, ar};
}

// Seasons of 154 days from April 10 with `per_day` single games per day
// among sixteen teams. Each game independently produces a 20+ run score for the
// home side with probability `p`, so event gaps are geometric with mean 1/p.
inline std::vector<GameRecord> synthetic_corpus(std::size_t days, double p, std::uint64_t seed,
                                                int per_day = 8, int first_year = 1901) {
    static const char* teams[] = {"AA", "BB", "CC", "DD", "EE", "FF", "GG", "HH",
                                  "II", "JJ", "KK", "LL", "MM", "NN", "OO", "PP"};
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution event(p);
    std::uniform_int_distribution<int> low(0, 19);
    std::uniform_int_distribution<int> high(20, 26);
    std::vector<GameRecord> out;
    out.reserve(days * per_day);
    for (std::size_t d = 0; d < days; ++d) {
        const int year = first_year + static_cast<int>(d / 154);
        const auto ymd = std::chrono::sys_days{std::chrono::year{year} / 4 / 10} +
                         std::chrono::days{static_cast<int>(d % 154)};
        const std::chrono::year_month_day date{ymd};
        const Date dt{int(date.year()), int(unsigned(date.month())), int(unsigned(date.day()))};
        for (int g = 0; g < per_day; ++g) {
            const int home = (g + static_cast<int>(d)) % 16;
            const int away = (home + 1 + 2 * static_cast<int>(d % 7)) % 16;
            GameRecord r{dt, 1, teams[home], teams[away == home ? (home + 3) % 16 : away],
                         low(rng), low(rng)};
            if (event(rng)) r.home_runs = high(rng);
            out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end(), game_order_less);
    return out;
}

} // namespace rare::testing
