#include "rare/domain.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <tuple>

namespace rare {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::format: return "format";
    case ErrorKind::duplicate: return "duplicate";
    case ErrorKind::lookup: return "lookup";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::ordering: return "ordering";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::domain: return "domain";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::assignment: return "assignment";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

bool Date::valid() const {
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year},
                             std::chrono::month{static_cast<unsigned>(month)},
                             std::chrono::day{static_cast<unsigned>(day)}};
    return month >= 1 && day >= 1 && ymd.ok();
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::optional<Date> Date::parse_iso(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto digits = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
            v = v * 10 + (text[i] - '0');
        }
        return v;
    };
    auto y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
    if (!y || !m || !d) return std::nullopt;
    Date out{*y, *m, *d};
    if (!out.valid()) return std::nullopt;
    return out;
}

bool game_order_less(const GameRecord& a, const GameRecord& b) {
    return std::tie(a.date, a.day_game_ordinal, a.home_team, a.away_team) <
           std::tie(b.date, b.day_game_ordinal, b.home_team, b.away_team);
}

std::optional<std::string> check_invariants(const GameRecord& game) {
    if (!game.date.valid()) return "invalid date";
    if (game.day_game_ordinal != 1 && game.day_game_ordinal != 2)
        return "day_game_ordinal must be 1 or 2";
    if (game.home_runs < 0 || game.away_runs < 0) return "runs must be non-negative";
    if (game.home_team.empty() || game.away_team.empty()) return "team code is empty";
    if (game.home_team == game.away_team) return "home and away team are the same";
    return std::nullopt;
}

std::vector<double> IatSeries::as_real() const {
    return {values.begin(), values.end()};
}

} // namespace rare
