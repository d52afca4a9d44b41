#pragma once

// Minimal static SVG charts. Output is byte-for-byte deterministic for
// identical inputs (fixed styling, fixed number formatting).

#include "rare/compare.hpp"
#include "rare/expfit.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rare::svg {

struct ChartText {
    std::string title;
    std::string x_label;
    std::string y_label;
};

using Curve = std::vector<std::pair<double, double>>;

// Samples the fitted CDF on [0, t_max].
Curve cdf_curve(const ExponentialFit& fit, double t_max, int samples = 200);

// EDF drawn as one `<path class="edf-step">` per step plus the model CDF.
void render_edf_cdf(std::ostream& out, const std::vector<EdfPoint>& edf, const Curve& cdf,
                    const ChartText& text = {"Observed IAT (EDF) and fitted model (CDF)",
                                             "Inter-arrival time (games)", "Probability"});

void render_qq(std::ostream& out, const std::vector<QqPoint>& points,
               const ChartText& text = {"Quantile-quantile plot", "Observed quantile (games)",
                                        "Theoretical quantile (games)"});

void render_frequency(std::ostream& out, const std::map<int, std::size_t>& counts,
                      const ChartText& text = {"Events by season", "Season", "Count"});

void render_tukey(std::ostream& out, const std::vector<TukeyInterval>& intervals,
                  const ChartText& text = {"Family-wise confidence intervals",
                                           "Difference in mean IAT (games)", ""});

std::string escape(std::string_view text);

} // namespace rare::svg
