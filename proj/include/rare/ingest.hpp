#pragma once

#include "rare/domain.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace rare {

enum class GameLogFormat {
    canonical_csv, // date,day_game_ordinal,home_team,away_team,home_runs,away_runs
};

inline constexpr std::string_view kCanonicalHeader =
    "date,day_game_ordinal,home_team,away_team,home_runs,away_runs";

struct LineDiagnostic {
    std::size_t line = 0; // 1-based, header is line 1
    std::string message;
};

struct GameLogFile {
    std::vector<GameRecord> records; // sorted by game_order_less
    std::vector<LineDiagnostic> diagnostics;
};

// Parses a game log. Malformed data lines are skipped and reported in
// `diagnostics`; a bad header throws ErrorKind::format and a repeated
// (date, home, away, ordinal) key throws ErrorKind::duplicate.
GameLogFile parse_game_log(std::istream& input,
                           GameLogFormat format = GameLogFormat::canonical_csv);

GameLogFile parse_game_log_file(const std::string& path,
                                GameLogFormat format = GameLogFormat::canonical_csv);

// Canonical CSV with LF line endings.
void write_game_log(std::ostream& out, const std::vector<GameRecord>& records);

bool is_valid_team_code(std::string_view code);

struct ScheduleAnomaly {
    Date date;
    TeamCode team;
    std::string message;
};

struct ScheduleReport {
    std::map<int, std::size_t> season_totals; // year -> games
    std::vector<int> missing_seasons;         // gaps between first and last season
    std::vector<ScheduleAnomaly> anomalies;

    bool empty() const {
        return season_totals.empty() && missing_seasons.empty() && anomalies.empty();
    }
};

ScheduleReport validate_schedule(const std::vector<GameRecord>& records);

} // namespace rare
