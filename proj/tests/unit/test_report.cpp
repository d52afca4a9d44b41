#include "doctest.h"

#include "rare/ingest.hpp"
#include "rare/report.hpp"
#include "rare/svg.hpp"
#include "test_support.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace rare;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
        ++n;
    return n;
}

bool parses_as_xml(const std::string& text) {
    std::istringstream in(text);
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_xml(in, tree);
    } catch (const std::exception&) {
        return false;
    }
    return tree.count("svg") == 1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(cell);
        if (!line.empty() && line.back() == ',') row.emplace_back();
        rows.push_back(row);
    }
    return rows;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("rare_report_test_" + name);
    fs::remove_all(p);
    return p;
}

AnalysisConfig quick_config() {
    AnalysisConfig c;
    c.mc_replications = 0;
    return c;
}

const std::vector<GameRecord>& long_corpus() {
    static const auto corpus = rare::testing::synthetic_corpus(154 * 98, 0.01, 77, 1);
    return corpus;
}

} // namespace

TEST_CASE("season frequency") {
    CHECK(season_frequency({}).empty());

    std::vector<EventOccurrence> ev(4);
    ev[0].game.date = {1961, 5, 1};
    ev[1].game.date = {1961, 7, 1};
    ev[2].game.date = {1965, 5, 1};
    ev[3].game.date = {1966, 5, 1};
    const auto f = season_frequency(ev);
    CHECK(f.size() == 6);
    CHECK(f.at(1961) == 2);
    CHECK(f.at(1963) == 0);
    CHECK(f.at(1964) == 0);
    std::size_t total = 0;
    for (const auto& [y, c] : f) total += c;
    CHECK(total == ev.size());
}

TEST_CASE("EDF/CDF chart") {
    const std::vector<EdfPoint> two{{10, 0.5}, {30, 1.0}};
    const ExponentialFit fit{0.05, 2, 20, 14};
    std::ostringstream a, b;
    svg::render_edf_cdf(a, two, svg::cdf_curve(fit, 30));
    svg::render_edf_cdf(b, two, svg::cdf_curve(fit, 30));
    CHECK(parses_as_xml(a.str()));
    CHECK(count_of(a.str(), "class=\"edf-step\"") == 2);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("Inter-arrival time (games)") != std::string::npos);
    CHECK(a.str().find("legend") != std::string::npos);
}

TEST_CASE("other charts are well-formed and escaped") {
    std::ostringstream freq, qq, tukey;
    svg::render_frequency(freq, {{1901, 2}, {1902, 0}, {1903, 5}},
                          {"A < B & C", "Season", "Count"});
    CHECK(parses_as_xml(freq.str()));
    CHECK(freq.str().find("A &lt; B &amp; C") != std::string::npos);

    const std::vector<double> x{5, 20, 40, 90};
    svg::render_qq(qq, qq_points(x, fit_mle(x)));
    CHECK(parses_as_xml(qq.str()));

    svg::render_tukey(tukey, {{"Dead Ball", "Expansion", -1500, -2500, -500, 0.95, true},
                              {"Dead Ball", "Long Ball", -90, -600, 400, 0.95, false}});
    CHECK(parses_as_xml(tukey.str()));
    CHECK(tukey.str().find("Dead Ball - Expansion") != std::string::npos);
}

TEST_CASE("slug and hash helpers") {
    CHECK(slugify("Long Ball") == "long_ball");
    CHECK(slugify("Free Agency!") == "free_agency");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("empty corpus fails at the detect stage") {
    try {
        run_full_analysis({}, quick_config());
        FAIL("expected insufficient data");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::insufficient_data);
        CHECK(std::string(e.what()).rfind("detect: ", 0) == 0);
    }
}

TEST_CASE("known-rate synthetic corpora are not rejected") {
    const int runs = 50;
    int keep_ks = 0, keep_ad = 0, keep_chisq = 0;
    for (int seed = 0; seed < runs; ++seed) {
        const auto corpus = rare::testing::synthetic_corpus(154 * 98, 0.01, 500 + seed, 1);
        const auto run = run_full_analysis(corpus, quick_config());
        for (const auto& r : run.global_gof) {
            if (r.test_name == "ks") keep_ks += std::get<double>(r.p_value) >= 0.05;
            if (r.test_name == "chisq") keep_chisq += std::get<double>(r.p_value) >= 0.05;
            if (r.test_name == "ad") keep_ad += std::get<PValueRange>(r.p_value).lower >= 0.05;
        }
    }
    CHECK(keep_ks >= 0.9 * runs);
    CHECK(keep_ad >= 0.9 * runs);
    CHECK(keep_chisq >= 0.9 * runs);
}

TEST_CASE("full run writes the artifact tree") {
    auto config = quick_config();
    config.mc_replications = 200;
    const auto dir = scratch("tree");
    config.output_dir = dir;
    const auto run = run_full_analysis(long_corpus(), config);

    REQUIRE(run.events.size() > 100);
    REQUIRE(run.anova);
    CHECK(run.tukey.size() == 15);
    CHECK(run.eras.size() == 6);

    for (const char* f : {"manifest.json", "events.csv", "iats.csv", "fit_global.json",
                          "gof_global.jsonl", "qq.csv", "edf_cdf.csv", "anova.json", "tukey.csv",
                          "predictions.csv", "season_frequency.csv",
                          "tables/table1_gof_global.csv", "tables/table2_worst_fit.csv",
                          "tables/table4_era_iats.csv", "tables/table6_era_gof.csv",
                          "eras/long_ball/iats.csv", "eras/long_ball/fit.json",
                          "eras/long_ball/gof.jsonl", "eras/long_ball/qq.csv",
                          "eras/long_ball/edf_cdf.csv", "figures/edf_cdf_global.svg",
                          "figures/qq_global.svg", "figures/tukey.svg",
                          "figures/season_frequency.svg"})
        CHECK_MESSAGE(fs::exists(dir / f), f);

    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["event_count"] == run.events.size());
    CHECK(manifest["events_sha256"] == run.events_sha256);
    for (const char* t : {"table1", "table4", "table5", "table6"})
        CHECK(fs::exists(dir / manifest["tables"][t].get<std::string>()));
    for (const auto& f : manifest["files"])
        CHECK(sha256_hex(slurp(dir / f["path"].get<std::string>())) == f["sha256"]);

    const auto gof_lines = slurp(dir / "gof_global.jsonl");
    CHECK(count_of(gof_lines, "\n") == 5);
    fs::remove_all(dir);
}

TEST_CASE("identical runs give identical bytes") {
    auto config = quick_config();
    config.mc_replications = 100;
    const auto a = scratch("det_a"), b = scratch("det_b");
    config.output_dir = a;
    run_full_analysis(long_corpus(), config);
    config.output_dir = b;
    run_full_analysis(long_corpus(), config);
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), a);
        CHECK_MESSAGE(slurp(entry.path()) == slurp(b / rel), rel.string());
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("emitted CSV re-parses to the in-memory values") {
    auto config = quick_config();
    const auto dir = scratch("roundtrip");
    config.output_dir = dir;
    const auto run = run_full_analysis(long_corpus(), config);

    const auto events = read_csv(dir / "events.csv");
    REQUIRE(events.size() == run.events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(events[i][0] == run.events[i].game.date.iso());
        CHECK(events[i][1] == run.events[i].scoring_team);
        CHECK(std::stoi(events[i][2]) == run.events[i].runs);
        CHECK(std::stoll(events[i][3]) == run.events[i].continuous_index);
    }

    std::ifstream iat_in(dir / "iats.csv");
    const auto iats = read_iats_csv(iat_in);
    REQUIRE(iats.size() == run.iats.size());
    for (std::size_t i = 0; i < iats.size(); ++i) CHECK(iats[i] == run.iats.values[i]);

    const auto fit = nlohmann::json::parse(slurp(dir / "fit_global.json"));
    CHECK(fit["rate"].get<double>() == run.global_fit.rate);

    const auto rel = [](double parsed, double actual) {
        return std::abs(parsed - actual) <= 5e-9 * std::abs(actual);
    };
    const auto eras = read_csv(dir / "tables/table4_era_iats.csv");
    REQUIRE(eras.size() == run.eras.size());
    for (std::size_t i = 0; i < eras.size(); ++i) {
        const auto& s = run.eras[i].summary;
        CHECK(eras[i][0] == s.era.name);
        CHECK(std::stoul(eras[i][1]) == s.event_count);
        if (s.fit) {
            CHECK(rel(std::stod(eras[i][2]), s.fit->sample_mean));
            CHECK(rel(std::stod(eras[i][3]), s.fit->sample_sd));
            CHECK(rel(std::stod(eras[i][4]), s.fit->rate));
        }
    }

    const auto tukey = read_csv(dir / "tukey.csv");
    REQUIRE(tukey.size() == run.tukey.size());
    for (std::size_t i = 0; i < tukey.size(); ++i) {
        CHECK(rel(std::stod(tukey[i][2]), run.tukey[i].mean_difference));
        CHECK(rel(std::stod(tukey[i][3]), run.tukey[i].lower));
        CHECK(rel(std::stod(tukey[i][4]), run.tukey[i].upper));
    }

    const auto freq = read_csv(dir / "season_frequency.csv");
    std::size_t total = 0;
    for (const auto& row : freq) total += std::stoul(row[1]);
    CHECK(total == run.events.size());
    fs::remove_all(dir);
}

TEST_CASE("1912 fixture has too few events for a full run") {
    const auto records = parse_game_log_file(rare::testing::fixture("season_1912.csv")).records;
    // Two events make one IAT: the global fit works but QQ needs two points.
    const auto run = run_full_analysis(records, quick_config());
    CHECK(run.iats.values == std::vector<std::int64_t>{99});
    CHECK(run.global_qq.empty());
    CHECK_FALSE(run.anova);
}
