#pragma once

// Event detection and continuous game counting.
//
// Game counting follows the standings rule: an event in the first game of a
// day sits one past the number of games completed through the previous day;
// an event in the second game of a doubleheader is placed last among that
// day's games. Counts run on across seasons when `wrap_seasons` is set.

#include "rare/domain.hpp"

#include <iosfwd>
#include <vector>

namespace rare {

struct CountingConfig {
    int threshold = 20;
    int first_season_year = 1901;
    bool wrap_seasons = true;
};

// Occurrences ordered by (date, ordinal, runs desc, team). Both sides of one
// game share a continuous index; distinct games that would tie on a day are
// separated by bumping the later one to the next free index.
std::vector<EventOccurrence> detect_events(const std::vector<GameRecord>& records,
                                           const CountingConfig& config = {});

std::int64_t continuous_index(const GameRecord& event_game,
                              const std::vector<GameRecord>& records,
                              const CountingConfig& config = {});

// values[k] = index[k+1] - index[k]. Two occurrences from the same game
// contribute a lag of 1.
IatSeries compute_iats(const std::vector<EventOccurrence>& events);

// `date,team,runs,continuous_index`
void write_events_csv(std::ostream& out, const std::vector<EventOccurrence>& events);
// `iat`, one value per line
void write_iats_csv(std::ostream& out, const IatSeries& iats);
// Accepts the `iat` format; header optional. Values must be positive.
std::vector<double> read_iats_csv(std::istream& in);

} // namespace rare
