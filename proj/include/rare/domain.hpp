#pragma once

// Core value types shared by every stage of the pipeline.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rare {

// ----------------------------------------------------------------------------
// Errors
// ----------------------------------------------------------------------------

enum class ErrorKind {
    format,            // unparseable header / wrong file layout
    duplicate,         // same (date, teams, ordinal) twice
    lookup,            // requested game not present
    insufficient_data, // too few observations for the operation
    ordering,          // non-increasing continuous indices
    parameter,         // invalid argument (rate <= 0, bins < 2, ...)
    domain,            // value outside the function's domain
    degenerate,        // numerically degenerate input (u in {0,1}, zero variance)
    assignment,        // year not covered by any era
    io,                // sink / file failure
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// ----------------------------------------------------------------------------
// Calendar date (no time of day)
// ----------------------------------------------------------------------------

struct Date {
    int year = 1901;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    bool valid() const;
    std::string iso() const;

    // Strict YYYY-MM-DD. Returns nullopt for anything else, including
    // calendar-invalid dates such as 1912-02-30.
    static std::optional<Date> parse_iso(std::string_view text);
};

using TeamCode = std::string;

// ----------------------------------------------------------------------------
// Games and events
// ----------------------------------------------------------------------------

struct GameRecord {
    Date date;
    int day_game_ordinal = 1; // 1 = first/only game of the day, 2 = second of a doubleheader
    TeamCode home_team;
    TeamCode away_team;
    int home_runs = 0;
    int away_runs = 0;

    bool operator==(const GameRecord&) const = default;
};

// Canonical order: (date, ordinal), then teams so that the order is total.
bool game_order_less(const GameRecord& a, const GameRecord& b);

// Validates the type invariants; returns a message describing the first
// violation or nullopt.
std::optional<std::string> check_invariants(const GameRecord& game);

struct EventOccurrence {
    GameRecord game;
    TeamCode scoring_team;
    int runs = 0;
    std::int64_t continuous_index = 0;

    bool operator==(const EventOccurrence&) const = default;
};

// Games between consecutive occurrences. `closing_events[k]` is the event
// that terminates `values[k]`.
struct IatSeries {
    std::vector<std::int64_t> values;
    std::vector<EventOccurrence> closing_events;
    std::optional<Date> first_date;
    std::optional<Date> last_date;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    std::vector<double> as_real() const;
};

struct Era {
    std::string name;
    int start_year = 1901;
    std::optional<int> end_year; // nullopt = open-ended

    bool contains(int year) const {
        return year >= start_year && (!end_year || year <= *end_year);
    }
    bool operator==(const Era&) const = default;
};

struct ExponentialFit {
    double rate = 0.0; // events per game
    std::size_t n = 0;
    double sample_mean = 0.0;
    double sample_sd = 0.0;
};

} // namespace rare
