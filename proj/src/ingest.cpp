#include "rare/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>
#include <variant>

namespace rare {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::optional<long> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Parses one data line; on failure returns the diagnostic message.
std::variant<GameRecord, std::string> parse_line(std::string_view line) {
    auto fields = split_fields(line);
    if (fields.size() != 6)
        return "expected 6 fields, got " + std::to_string(fields.size());

    GameRecord g;
    auto date = Date::parse_iso(fields[0]);
    if (!date) return "date is not ISO-8601 YYYY-MM-DD: '" + std::string(fields[0]) + "'";
    g.date = *date;

    auto ordinal = parse_int(fields[1]);
    if (!ordinal) return "day_game_ordinal is not an integer";
    if (*ordinal != 1 && *ordinal != 2)
        return "day_game_ordinal must be 1 or 2, got " + std::string(fields[1]);
    g.day_game_ordinal = static_cast<int>(*ordinal);

    for (int side = 0; side < 2; ++side) {
        auto code = fields[2 + side];
        if (!is_valid_team_code(code)) return "invalid team code '" + std::string(code) + "'";
    }
    g.home_team = std::string(fields[2]);
    g.away_team = std::string(fields[3]);
    if (g.home_team == g.away_team) return "home and away team are the same";

    const char* names[] = {"home_runs", "away_runs"};
    int* slots[] = {&g.home_runs, &g.away_runs};
    for (int side = 0; side < 2; ++side) {
        auto runs = parse_int(fields[4 + side]);
        if (!runs) return std::string(names[side]) + " is not an integer: '" +
                          std::string(fields[4 + side]) + "'";
        if (*runs < 0) return std::string(names[side]) + " is negative";
        *slots[side] = static_cast<int>(*runs);
    }
    return g;
}

} // namespace

bool is_valid_team_code(std::string_view code) {
    if (code.size() < 2 || code.size() > 5) return false;
    bool has_letter = false;
    for (char c : code) {
        if (c >= 'A' && c <= 'Z') {
            has_letter = true;
        } else if (!(c >= '0' && c <= '9')) {
            return false;
        }
    }
    return has_letter;
}

GameLogFile parse_game_log(std::istream& input, GameLogFormat format) {
    if (format != GameLogFormat::canonical_csv)
        throw Error(ErrorKind::format, "unsupported game log format");

    GameLogFile out;
    std::string line;
    if (!std::getline(input, line))
        throw Error(ErrorKind::format, "missing header line");
    strip_cr(line);
    if (line != kCanonicalHeader)
        throw Error(ErrorKind::format,
                    "unexpected header '" + line + "', expected '" +
                        std::string(kCanonicalHeader) + "'");

    std::size_t lineno = 1;
    while (std::getline(input, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        auto parsed = parse_line(line);
        if (auto* msg = std::get_if<std::string>(&parsed)) {
            out.diagnostics.push_back({lineno, *msg});
            continue;
        }
        out.records.push_back(std::get<GameRecord>(std::move(parsed)));
    }

    std::sort(out.records.begin(), out.records.end(), game_order_less);
    auto dup = std::adjacent_find(out.records.begin(), out.records.end(),
                                  [](const GameRecord& a, const GameRecord& b) {
                                      return !game_order_less(a, b) && !game_order_less(b, a);
                                  });
    if (dup != out.records.end())
        throw Error(ErrorKind::duplicate,
                    "duplicate game " + dup->date.iso() + " " + dup->home_team + "-" +
                        dup->away_team + " ordinal " + std::to_string(dup->day_game_ordinal));
    return out;
}

GameLogFile parse_game_log_file(const std::string& path, GameLogFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open game log '" + path + "'");
    return parse_game_log(in, format);
}

void write_game_log(std::ostream& out, const std::vector<GameRecord>& records) {
    out << kCanonicalHeader << '\n';
    for (const auto& g : records) {
        out << g.date.iso() << ',' << g.day_game_ordinal << ',' << g.home_team << ','
            << g.away_team << ',' << g.home_runs << ',' << g.away_runs << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "failed writing game log");
}

ScheduleReport validate_schedule(const std::vector<GameRecord>& records) {
    ScheduleReport report;
    if (records.empty()) return report;

    for (const auto& g : records) ++report.season_totals[g.date.year];

    const int first = report.season_totals.begin()->first;
    const int last = report.season_totals.rbegin()->first;
    for (int y = first; y <= last; ++y)
        if (!report.season_totals.contains(y)) report.missing_seasons.push_back(y);

    // Per-date team appearances by ordinal.
    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i;
        while (j < records.size() && records[j].date == records[i].date) ++j;

        std::map<TeamCode, std::pair<int, int>> seen; // team -> (#ordinal1, #ordinal2)
        for (std::size_t k = i; k < j; ++k) {
            const auto& g = records[k];
            for (const auto* team : {&g.home_team, &g.away_team}) {
                auto& slot = seen[*team];
                (g.day_game_ordinal == 1 ? slot.first : slot.second)++;
            }
        }
        for (const auto& [team, counts] : seen) {
            if (counts.first > 1)
                report.anomalies.push_back(
                    {records[i].date, team, "team appears in more than one ordinal-1 game"});
            if (counts.second > 1)
                report.anomalies.push_back(
                    {records[i].date, team, "team appears in more than one ordinal-2 game"});
            if (counts.second > 0 && counts.first == 0)
                report.anomalies.push_back(
                    {records[i].date, team, "second game of a doubleheader without a first game"});
        }
        i = j;
    }
    return report;
}

} // namespace rare
