#pragma once

#include "rare/domain.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace rare {

// Dead Ball 1901-1919 through Long Ball 1994-(open).
std::vector<Era> default_eras();

// Eras must be contiguous, non-overlapping, ascending, and only the last
// may be open-ended. Throws ErrorKind::parameter otherwise.
void check_partition(const std::vector<Era>& eras);

// `name,start_year,end_year`; empty end_year means open-ended.
std::vector<Era> read_eras_csv(std::istream& in);
void write_eras_csv(std::ostream& out, const std::vector<Era>& eras);

// Index into `eras`; throws ErrorKind::assignment for uncovered years.
std::size_t era_index_for_year(const std::vector<Era>& eras, int year);

enum class BoundaryGap {
    later, // a gap spanning an era boundary belongs to the era of its closing event
    drop,  // only gaps between two events of the same era are kept
};

struct EraSummary {
    Era era;
    std::size_t event_count = 0;
    IatSeries iats;
    std::optional<ExponentialFit> fit; // needs >= 2 events and >= 1 gap
};

std::vector<EraSummary> partition_and_fit(const std::vector<EventOccurrence>& events,
                                          const std::vector<Era>& eras,
                                          BoundaryGap boundary = BoundaryGap::later);

// `era,count,mean_iat,sd_iat,rate`
void write_era_summary_csv(std::ostream& out, const std::vector<EraSummary>& summaries);

struct WorstFitPoint {
    EventOccurrence event; // the event closing the gap
    std::int64_t iat = 0;
    double survival = 1.0; // exp(-rate * iat)
};

// Smallest survival first; ties by event date.
std::vector<WorstFitPoint> worst_fit(const IatSeries& iats, const ExponentialFit& fit,
                                     std::size_t k);

} // namespace rare
