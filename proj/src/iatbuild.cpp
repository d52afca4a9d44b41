#include "rare/iatbuild.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <tuple>

namespace rare {

namespace {

struct DayCount {
    Date date;
    std::int64_t games_before = 0; // completed games through the end of the previous day
    std::int64_t games_on_day = 0;
};

// Records must be sorted. Only seasons from `first_season_year` are counted.
std::vector<DayCount> build_day_table(const std::vector<GameRecord>& records,
                                      const CountingConfig& config) {
    std::vector<DayCount> days;
    std::int64_t running = 0;
    int season = 0;
    for (const auto& g : records) {
        if (g.date.year < config.first_season_year) continue;
        if (!config.wrap_seasons && g.date.year != season) running = 0;
        season = g.date.year;
        if (days.empty() || days.back().date != g.date)
            days.push_back({g.date, running, 0});
        ++days.back().games_on_day;
        ++running;
    }
    return days;
}

std::int64_t index_from_day(const DayCount& day, int ordinal) {
    return ordinal == 1 ? day.games_before + 1 : day.games_before + day.games_on_day;
}

const DayCount* find_day(const std::vector<DayCount>& days, const Date& date) {
    auto it = std::lower_bound(days.begin(), days.end(), date,
                               [](const DayCount& d, const Date& v) { return d.date < v; });
    if (it == days.end() || it->date != date) return nullptr;
    return &*it;
}

bool same_game(const GameRecord& a, const GameRecord& b) {
    return a.date == b.date && a.day_game_ordinal == b.day_game_ordinal &&
           a.home_team == b.home_team && a.away_team == b.away_team;
}

} // namespace

std::int64_t continuous_index(const GameRecord& event_game,
                              const std::vector<GameRecord>& records,
                              const CountingConfig& config) {
    auto lookup_error = [&] {
        return Error(ErrorKind::lookup, "game " + event_game.date.iso() + " " +
                                            event_game.home_team + "-" + event_game.away_team +
                                            " not found in records");
    };
    if (event_game.date.year < config.first_season_year) throw lookup_error();
    auto [lo, hi] = std::equal_range(records.begin(), records.end(), event_game, game_order_less);
    if (lo == hi) throw lookup_error();

    auto days = build_day_table(records, config);
    const DayCount* day = find_day(days, event_game.date);
    if (!day) throw lookup_error();
    return index_from_day(*day, event_game.day_game_ordinal);
}

std::vector<EventOccurrence> detect_events(const std::vector<GameRecord>& records,
                                           const CountingConfig& config) {
    if (config.threshold < 1)
        throw Error(ErrorKind::parameter, "threshold must be >= 1");

    const auto days = build_day_table(records, config);
    std::vector<EventOccurrence> events;
    std::size_t day_cursor = 0;
    for (const auto& g : records) {
        if (g.date.year < config.first_season_year) continue;
        while (days[day_cursor].date != g.date) ++day_cursor;
        const auto index = index_from_day(days[day_cursor], g.day_game_ordinal);
        if (g.home_runs >= config.threshold)
            events.push_back({g, g.home_team, g.home_runs, index});
        if (g.away_runs >= config.threshold)
            events.push_back({g, g.away_team, g.away_runs, index});
    }

    std::stable_sort(events.begin(), events.end(),
                     [](const EventOccurrence& a, const EventOccurrence& b) {
                         return std::tuple(a.game.date, a.game.day_game_ordinal, -a.runs,
                                           a.scoring_team) <
                                std::tuple(b.game.date, b.game.day_game_ordinal, -b.runs,
                                           b.scoring_team);
                     });

    // Separate distinct games that landed on the same index.
    for (std::size_t k = 1; k < events.size(); ++k) {
        auto& prev = events[k - 1];
        auto& cur = events[k];
        if (same_game(prev.game, cur.game)) {
            cur.continuous_index = prev.continuous_index;
        } else if (config.wrap_seasons || prev.game.date.year == cur.game.date.year) {
            cur.continuous_index = std::max(cur.continuous_index, prev.continuous_index + 1);
        }
    }
    return events;
}

IatSeries compute_iats(const std::vector<EventOccurrence>& events) {
    if (events.size() < 2)
        throw Error(ErrorKind::insufficient_data,
                    "need at least 2 events to form inter-arrival times, got " +
                        std::to_string(events.size()));
    IatSeries out;
    out.values.reserve(events.size() - 1);
    out.closing_events.reserve(events.size() - 1);
    for (std::size_t k = 1; k < events.size(); ++k) {
        const auto& prev = events[k - 1];
        const auto& cur = events[k];
        std::int64_t lag = cur.continuous_index - prev.continuous_index;
        if (lag == 0 && same_game(prev.game, cur.game)) {
            lag = 1;
        } else if (lag <= 0) {
            throw Error(ErrorKind::ordering,
                        "continuous index does not increase at event " + std::to_string(k) +
                            " (" + cur.game.date.iso() + "): " +
                            std::to_string(prev.continuous_index) + " -> " +
                            std::to_string(cur.continuous_index));
        }
        out.values.push_back(lag);
        out.closing_events.push_back(cur);
    }
    out.first_date = events.front().game.date;
    out.last_date = events.back().game.date;
    return out;
}

void write_events_csv(std::ostream& out, const std::vector<EventOccurrence>& events) {
    out << "date,team,runs,continuous_index\n";
    for (const auto& e : events)
        out << e.game.date.iso() << ',' << e.scoring_team << ',' << e.runs << ','
            << e.continuous_index << '\n';
    if (!out) throw Error(ErrorKind::io, "failed writing events");
}

void write_iats_csv(std::ostream& out, const IatSeries& iats) {
    out << "iat\n";
    for (auto v : iats.values) out << v << '\n';
    if (!out) throw Error(ErrorKind::io, "failed writing IATs");
}

std::vector<double> read_iats_csv(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line == "iat") continue;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc{} || ptr != line.data() + line.size())
            throw Error(ErrorKind::format,
                        "line " + std::to_string(lineno) + ": not a number: '" + line + "'");
        if (!(v > 0.0))
            throw Error(ErrorKind::domain,
                        "line " + std::to_string(lineno) + ": IAT must be positive");
        values.push_back(v);
    }
    return values;
}

} // namespace rare
