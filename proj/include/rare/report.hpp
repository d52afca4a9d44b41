#pragma once

// End-to-end analysis: detect -> IAT -> global fit/GOF -> eras -> ANOVA/Tukey
// -> predictions, and the on-disk artifact layout.

#include "rare/compare.hpp"
#include "rare/eras.hpp"
#include "rare/expfit.hpp"
#include "rare/gof.hpp"
#include "rare/iatbuild.hpp"
#include "rare/predict.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rare {

// Occurrences per calendar year, zero-filled between the first and last year.
std::map<int, std::size_t> season_frequency(const std::vector<EventOccurrence>& events);

struct AnalysisConfig {
    CountingConfig counting;
    std::vector<Era> eras = default_eras();
    BoundaryGap boundary = BoundaryGap::later;
    int bins = 10;
    std::optional<int> df_override;
    std::size_t mc_replications = 0; // 0 disables the bootstrap p-values
    std::uint64_t seed = 20090418;
    double band_level = 0.95;
    std::size_t worst_k = 10;
    double family_level = 0.95;
    bool log_anova = false;
    std::vector<double> horizons = {45, 300, 600, 1425, 2430};
    std::optional<std::filesystem::path> output_dir;
};

struct EraAnalysis {
    EraSummary summary;
    std::vector<GofReport> gof;
    std::vector<QqPoint> qq;
    std::vector<EdfPoint> edf;
};

struct NamedPrediction {
    std::string scope; // "global" or an era name
    Prediction prediction;
};

struct AnalysisRun {
    AnalysisConfig config;
    std::vector<EventOccurrence> events;
    std::string events_sha256; // hash of the canonical events CSV
    IatSeries iats;
    ExponentialFit global_fit;
    std::vector<GofReport> global_gof;
    std::vector<QqPoint> global_qq;
    std::vector<EdfPoint> global_edf;
    std::vector<WorstFitPoint> worst;
    std::vector<EraAnalysis> eras;
    std::optional<AnovaReport> anova;
    std::vector<TukeyInterval> tukey;
    std::vector<NamedPrediction> predictions;
    std::map<int, std::size_t> frequency;
};

// Errors from any stage are rethrown with the stage name prefixed. When
// `config.output_dir` is set the artifacts are written there.
AnalysisRun run_full_analysis(const std::vector<GameRecord>& corpus, const AnalysisConfig& config);

struct ManifestEntry {
    std::string path; // relative to the output directory
    std::string sha256;
    std::size_t bytes = 0;
};

// Writes every artifact plus manifest.json; returns the manifest entries in
// write order.
std::vector<ManifestEntry> write_analysis(const AnalysisRun& run,
                                          const std::filesystem::path& dir);

std::string sha256_hex(std::string_view data);
std::string slugify(std::string_view name);

} // namespace rare
