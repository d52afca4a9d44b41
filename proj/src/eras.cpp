#include "rare/eras.hpp"

#include "rare/expfit.hpp"
#include "rare/iatbuild.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

namespace rare {

namespace {

std::optional<int> parse_year(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace

std::vector<Era> default_eras() {
    return {
        {"Dead Ball", 1901, 1919},   {"Lively Ball", 1920, 1941}, {"Integration", 1942, 1960},
        {"Expansion", 1961, 1976},   {"Free Agency", 1977, 1993}, {"Long Ball", 1994, std::nullopt},
    };
}

void check_partition(const std::vector<Era>& eras) {
    if (eras.empty()) throw Error(ErrorKind::parameter, "era list is empty");
    for (std::size_t i = 0; i < eras.size(); ++i) {
        const auto& e = eras[i];
        if (e.name.empty()) throw Error(ErrorKind::parameter, "era name is empty");
        if (e.end_year && *e.end_year < e.start_year)
            throw Error(ErrorKind::parameter, "era '" + e.name + "' ends before it starts");
        if (i + 1 < eras.size()) {
            if (!e.end_year)
                throw Error(ErrorKind::parameter,
                            "only the last era may be open-ended ('" + e.name + "')");
            if (eras[i + 1].start_year != *e.end_year + 1)
                throw Error(ErrorKind::parameter,
                            "eras '" + e.name + "' and '" + eras[i + 1].name +
                                "' leave a gap or overlap");
        }
        for (std::size_t j = 0; j < i; ++j)
            if (eras[j].name == e.name)
                throw Error(ErrorKind::parameter, "duplicate era name '" + e.name + "'");
    }
}

std::vector<Era> read_eras_csv(std::istream& in) {
    std::vector<Era> eras;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line == "name,start_year,end_year") continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
            throw Error(ErrorKind::format,
                        "era file line " + std::to_string(lineno) + ": expected 3 fields");
        Era e;
        e.name = line.substr(0, c1);
        auto start = parse_year(std::string_view(line).substr(c1 + 1, c2 - c1 - 1));
        if (!start)
            throw Error(ErrorKind::format,
                        "era file line " + std::to_string(lineno) + ": bad start year");
        e.start_year = *start;
        const auto end_field = std::string_view(line).substr(c2 + 1);
        if (!end_field.empty()) {
            auto end = parse_year(end_field);
            if (!end)
                throw Error(ErrorKind::format,
                            "era file line " + std::to_string(lineno) + ": bad end year");
            e.end_year = *end;
        }
        eras.push_back(std::move(e));
    }
    check_partition(eras);
    return eras;
}

void write_eras_csv(std::ostream& out, const std::vector<Era>& eras) {
    out << "name,start_year,end_year\n";
    for (const auto& e : eras) {
        out << e.name << ',' << e.start_year << ',';
        if (e.end_year) out << *e.end_year;
        out << '\n';
    }
}

std::size_t era_index_for_year(const std::vector<Era>& eras, int year) {
    for (std::size_t i = 0; i < eras.size(); ++i)
        if (eras[i].contains(year)) return i;
    throw Error(ErrorKind::assignment, "year " + std::to_string(year) + " is not in any era");
}

std::vector<EraSummary> partition_and_fit(const std::vector<EventOccurrence>& events,
                                          const std::vector<Era>& eras, BoundaryGap boundary) {
    check_partition(eras);
    std::vector<EraSummary> out;
    out.reserve(eras.size());
    for (const auto& e : eras) out.push_back({e, 0, {}, std::nullopt});

    std::vector<std::size_t> assignment(events.size());
    for (std::size_t k = 0; k < events.size(); ++k) {
        assignment[k] = era_index_for_year(eras, events[k].game.date.year);
        ++out[assignment[k]].event_count;
    }

    for (std::size_t k = 1; k < events.size(); ++k) {
        const std::size_t era = assignment[k];
        if (boundary == BoundaryGap::drop && assignment[k - 1] != era) continue;
        // Reuse the global rules (same-game lag, ordering checks) on the pair.
        const auto pair = compute_iats({events[k - 1], events[k]});
        auto& series = out[era].iats;
        series.values.push_back(pair.values.front());
        series.closing_events.push_back(events[k]);
        if (!series.first_date) series.first_date = events[k - 1].game.date;
        series.last_date = events[k].game.date;
    }

    for (auto& s : out)
        if (s.event_count >= 2 && !s.iats.empty()) s.fit = fit_mle(s.iats);
    return out;
}

void write_era_summary_csv(std::ostream& out, const std::vector<EraSummary>& summaries) {
    out << "era,count,mean_iat,sd_iat,rate\n";
    for (const auto& s : summaries) {
        out << s.era.name << ',' << s.event_count << ',';
        if (s.fit)
            out << fmt9(s.fit->sample_mean) << ',' << fmt9(s.fit->sample_sd) << ','
                << fmt9(s.fit->rate);
        else
            out << ",,";
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "failed writing era summary");
}

std::vector<WorstFitPoint> worst_fit(const IatSeries& iats, const ExponentialFit& fit,
                                     std::size_t k) {
    if (k > iats.size())
        throw Error(ErrorKind::parameter, "k exceeds the number of IATs");
    if (iats.closing_events.size() != iats.values.size())
        throw Error(ErrorKind::parameter, "IAT series carries no event metadata");
    std::vector<WorstFitPoint> all;
    all.reserve(iats.size());
    for (std::size_t i = 0; i < iats.size(); ++i)
        all.push_back({iats.closing_events[i], iats.values[i],
                       exp_sf(static_cast<double>(iats.values[i]), fit.rate)});
    std::stable_sort(all.begin(), all.end(), [](const WorstFitPoint& a, const WorstFitPoint& b) {
        if (a.iat != b.iat) return a.iat > b.iat;
        return a.event.game.date < b.event.game.date;
    });
    all.resize(k);
    return all;
}

} // namespace rare
