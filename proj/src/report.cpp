#include "rare/report.hpp"

#include "rare/svg.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rare {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

template <class F>
auto stage(const char* name, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(name) + ": " + e.what());
    }
}

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string events_csv(const std::vector<EventOccurrence>& events) {
    std::ostringstream s;
    write_events_csv(s, events);
    return s.str();
}

std::vector<GofReport> gof_suite(std::span<const double> x, const ExponentialFit& fit,
                                 const AnalysisConfig& config) {
    std::vector<GofReport> out;
    out.push_back(ks_report(x, fit));
    out.push_back(ad_report(x, fit, true));
    out.push_back(chisq_binned(x, fit, config.bins, config.df_override));
    if (config.mc_replications > 0) {
        out.push_back(mc_report(x, EdfStatistic::ks, config.mc_replications, config.seed));
        out.push_back(mc_report(x, EdfStatistic::ad, config.mc_replications, config.seed));
    }
    return out;
}

json fit_json(const ExponentialFit& f) {
    json j;
    j["rate"] = f.rate;
    j["n"] = f.n;
    j["mean_iat"] = f.sample_mean;
    j["sd_iat"] = f.sample_sd;
    return j;
}

const GofReport* find_report(const std::vector<GofReport>& reports, std::string_view name) {
    for (const auto& r : reports)
        if (r.test_name == name) return &r;
    return nullptr;
}

std::string p_cell(const GofReport& r) {
    if (const auto* p = std::get_if<double>(&r.p_value)) return fmt9(*p);
    return format_p_range(std::get<PValueRange>(r.p_value));
}

json config_json(const AnalysisConfig& c) {
    json j;
    j["threshold"] = c.counting.threshold;
    j["first_season_year"] = c.counting.first_season_year;
    j["wrap_seasons"] = c.counting.wrap_seasons;
    j["boundary_gap"] = c.boundary == BoundaryGap::later ? "later" : "drop";
    j["bins"] = c.bins;
    j["df_override"] = c.df_override ? json(*c.df_override) : json(nullptr);
    j["mc_replications"] = c.mc_replications;
    j["seed"] = c.seed;
    j["band_level"] = c.band_level;
    j["family_level"] = c.family_level;
    j["log_anova"] = c.log_anova;
    json eras = json::array();
    for (const auto& e : c.eras)
        eras.push_back({{"name", e.name},
                        {"start_year", e.start_year},
                        {"end_year", e.end_year ? json(*e.end_year) : json(nullptr)}});
    j["eras"] = eras;
    j["horizons"] = c.horizons;
    return j;
}

class ArtifactWriter {
public:
    explicit ArtifactWriter(fs::path root) : root_(std::move(root)) {}

    void emit(const std::string& rel, const std::string& content) {
        const fs::path p = root_ / rel;
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
        if (ec) throw Error(ErrorKind::io, "cannot create directory " + p.parent_path().string());
        std::ofstream out(p, std::ios::binary);
        out << content;
        out.close();
        if (!out) throw Error(ErrorKind::io, "cannot write " + p.string());
        entries_.push_back({rel, sha256_hex(content), content.size()});
    }

    template <class F>
    void emit_with(const std::string& rel, F&& write) {
        std::ostringstream s;
        write(s);
        emit(rel, s.str());
    }

    const std::vector<ManifestEntry>& entries() const { return entries_; }

private:
    fs::path root_;
    std::vector<ManifestEntry> entries_;
};

} // namespace

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorKind::io, "SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string slugify(std::string_view name) {
    std::string out;
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!out.empty() && out.back() != '_') {
            out += '_';
        }
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out.empty() ? "era" : out;
}

std::map<int, std::size_t> season_frequency(const std::vector<EventOccurrence>& events) {
    std::map<int, std::size_t> out;
    if (events.empty()) return out;
    int first = events.front().game.date.year;
    int last = first;
    for (const auto& e : events) {
        first = std::min(first, e.game.date.year);
        last = std::max(last, e.game.date.year);
    }
    for (int y = first; y <= last; ++y) out[y] = 0;
    for (const auto& e : events) ++out[e.game.date.year];
    return out;
}

AnalysisRun run_full_analysis(const std::vector<GameRecord>& corpus,
                              const AnalysisConfig& config) {
    AnalysisRun run;
    run.config = config;

    run.events = stage("detect", [&] {
        auto events = detect_events(corpus, config.counting);
        if (events.size() < 2)
            throw Error(ErrorKind::insufficient_data,
                        "found " + std::to_string(events.size()) +
                            " events; at least 2 are needed");
        return events;
    });
    run.events_sha256 = sha256_hex(events_csv(run.events));
    run.frequency = season_frequency(run.events);

    run.iats = stage("iat", [&] { return compute_iats(run.events); });

    stage("global-fit", [&] {
        const auto x = run.iats.as_real();
        run.global_fit = fit_mle(x);
        run.global_gof = gof_suite(x, run.global_fit, config);
        run.global_edf = edf(x);
        if (x.size() >= 2) run.global_qq = qq_points(x, run.global_fit, config.band_level);
        run.worst = worst_fit(run.iats, run.global_fit, std::min(config.worst_k, x.size()));
        return 0;
    });

    stage("eras", [&] {
        for (auto& summary : partition_and_fit(run.events, config.eras, config.boundary)) {
            EraAnalysis ea;
            ea.summary = std::move(summary);
            if (ea.summary.fit) {
                const auto x = ea.summary.iats.as_real();
                ea.gof = gof_suite(x, *ea.summary.fit, config);
                ea.edf = edf(x);
                if (x.size() >= 2) ea.qq = qq_points(x, *ea.summary.fit, config.band_level);
            }
            run.eras.push_back(std::move(ea));
        }
        return 0;
    });

    stage("compare", [&] {
        std::vector<Group> groups;
        for (const auto& ea : run.eras)
            if (!ea.summary.iats.empty())
                groups.push_back({ea.summary.era.name, ea.summary.iats.as_real()});
        if (config.log_anova) groups = log_transform(groups);
        if (groups.size() >= 2) {
            std::size_t total = 0;
            for (const auto& g : groups) total += g.values.size();
            if (total > groups.size()) {
                run.anova = anova_oneway(groups);
                run.tukey = tukey_hsd(groups, config.family_level);
            }
        }
        return 0;
    });

    stage("predict", [&] {
        for (double h : config.horizons)
            run.predictions.push_back({"global", predict(run.global_fit.rate, 0.0, h)});
        for (const auto& ea : run.eras)
            if (ea.summary.fit)
                for (double h : config.horizons)
                    run.predictions.push_back(
                        {ea.summary.era.name, predict(ea.summary.fit->rate, 0.0, h)});
        return 0;
    });

    if (config.output_dir) stage("write", [&] { return write_analysis(run, *config.output_dir); });
    return run;
}

std::vector<ManifestEntry> write_analysis(const AnalysisRun& run, const fs::path& dir) {
    ArtifactWriter w(dir);
    std::map<std::string, std::string> tables;

    w.emit("events.csv", events_csv(run.events));
    w.emit_with("iats.csv", [&](std::ostream& o) { write_iats_csv(o, run.iats); });
    w.emit("fit_global.json", fit_json(run.global_fit).dump(2) + "\n");
    w.emit_with("gof_global.jsonl", [&](std::ostream& o) {
        for (const auto& r : run.global_gof) o << to_json_line(r) << '\n';
    });
    w.emit_with("edf_cdf.csv",
                [&](std::ostream& o) { write_edf_cdf_csv(o, run.global_edf, run.global_fit); });
    if (!run.global_qq.empty())
        w.emit_with("qq.csv", [&](std::ostream& o) { write_qq_csv(o, run.global_qq); });

    w.emit_with("season_frequency.csv", [&](std::ostream& o) {
        o << "year,count\n";
        for (const auto& [y, c] : run.frequency) o << y << ',' << c << '\n';
    });

    tables["table1"] = "tables/table1_gof_global.csv";
    w.emit_with(tables["table1"], [&](std::ostream& o) {
        o << "test,statistic,n,p,df\n";
        for (const auto& r : run.global_gof)
            o << r.test_name << ',' << fmt9(r.statistic) << ',' << r.n << ',' << p_cell(r) << ','
              << (r.df ? std::to_string(*r.df) : "") << '\n';
    });
    tables["table2"] = "tables/table2_worst_fit.csv";
    w.emit_with(tables["table2"], [&](std::ostream& o) {
        o << "rank,date,team,iat,survival\n";
        for (std::size_t i = 0; i < run.worst.size(); ++i) {
            const auto& p = run.worst[i];
            o << i + 1 << ',' << p.event.game.date.iso() << ',' << p.event.scoring_team << ','
              << p.iat << ',' << fmt9(p.survival) << '\n';
        }
    });
    tables["table3"] = "tables/table3_eras.csv";
    w.emit_with(tables["table3"], [&](std::ostream& o) { write_eras_csv(o, run.config.eras); });

    std::vector<EraSummary> summaries;
    for (const auto& ea : run.eras) summaries.push_back(ea.summary);
    tables["table4"] = "tables/table4_era_iats.csv";
    w.emit_with(tables["table4"], [&](std::ostream& o) { write_era_summary_csv(o, summaries); });
    tables["table5"] = tables["table4"];
    tables["table6"] = "tables/table6_era_gof.csv";
    w.emit_with(tables["table6"], [&](std::ostream& o) {
        o << "era,n,ad_statistic,ad_p,ks_statistic,ks_p,chisq_statistic,chisq_p\n";
        for (const auto& ea : run.eras) {
            o << ea.summary.era.name << ',' << ea.summary.iats.size();
            const auto* ad = find_report(ea.gof, "ad");
            const auto* ks = find_report(ea.gof, "ks");
            const auto* cs = find_report(ea.gof, "chisq");
            for (const auto* r : {ad, ks, cs}) {
                if (r)
                    o << ',' << fmt9(r->statistic) << ',' << p_cell(*r);
                else
                    o << ",,";
            }
            o << '\n';
        }
    });

    for (const auto& ea : run.eras) {
        const std::string base = "eras/" + slugify(ea.summary.era.name) + "/";
        w.emit_with(base + "iats.csv", [&](std::ostream& o) { write_iats_csv(o, ea.summary.iats); });
        if (!ea.summary.fit) continue;
        w.emit(base + "fit.json", fit_json(*ea.summary.fit).dump(2) + "\n");
        w.emit_with(base + "gof.jsonl", [&](std::ostream& o) {
            for (const auto& r : ea.gof) o << to_json_line(r) << '\n';
        });
        if (!ea.qq.empty())
            w.emit_with(base + "qq.csv", [&](std::ostream& o) { write_qq_csv(o, ea.qq); });
        w.emit_with(base + "edf_cdf.csv",
                    [&](std::ostream& o) { write_edf_cdf_csv(o, ea.edf, *ea.summary.fit); });
    }

    if (run.anova) {
        json a;
        a["f_statistic"] = run.anova->f_statistic;
        a["df_between"] = run.anova->df_between;
        a["df_within"] = run.anova->df_within;
        a["ss_between"] = run.anova->ss_between;
        a["ss_within"] = run.anova->ss_within;
        a["p_value"] = run.anova->p_value;
        a["log_transformed"] = run.config.log_anova;
        json groups = json::array();
        for (const auto& g : run.anova->groups)
            groups.push_back({{"name", g.name}, {"n", g.n}, {"mean", g.mean}});
        a["groups"] = groups;
        w.emit("anova.json", a.dump(2) + "\n");
        w.emit_with("tukey.csv", [&](std::ostream& o) { write_tukey_csv(o, run.tukey); });
    }

    w.emit_with("predictions.csv", [&](std::ostream& o) {
        o << "scope,rate,horizon,probability\n";
        for (const auto& p : run.predictions)
            o << p.scope << ',' << fmt9(p.prediction.rate) << ',' << fmt9(p.prediction.horizon)
              << ',' << fmt9(p.prediction.probability) << '\n';
    });

    // Figures
    w.emit_with("figures/season_frequency.svg",
                [&](std::ostream& o) { svg::render_frequency(o, run.frequency); });
    const double t_max = run.global_edf.empty() ? 1.0 : run.global_edf.back().t;
    w.emit_with("figures/edf_cdf_global.svg", [&](std::ostream& o) {
        svg::render_edf_cdf(o, run.global_edf, svg::cdf_curve(run.global_fit, t_max));
    });
    if (!run.global_qq.empty())
        w.emit_with("figures/qq_global.svg", [&](std::ostream& o) { svg::render_qq(o, run.global_qq); });
    if (!run.tukey.empty())
        w.emit_with("figures/tukey.svg", [&](std::ostream& o) { svg::render_tukey(o, run.tukey); });
    for (const auto& ea : run.eras) {
        if (!ea.summary.fit) continue;
        const auto slug = slugify(ea.summary.era.name);
        const double era_max = ea.edf.back().t;
        w.emit_with("figures/edf_cdf_" + slug + ".svg", [&](std::ostream& o) {
            svg::render_edf_cdf(o, ea.edf, svg::cdf_curve(*ea.summary.fit, era_max),
                                {ea.summary.era.name + ": EDF and fitted CDF",
                                 "Inter-arrival time (games)", "Probability"});
        });
        if (!ea.qq.empty())
            w.emit_with("figures/qq_" + slug + ".svg", [&](std::ostream& o) {
                svg::render_qq(o, ea.qq,
                               {ea.summary.era.name + ": QQ plot", "Observed quantile (games)",
                                "Theoretical quantile (games)"});
            });
    }

    json manifest;
    manifest["tool"] = "rare-events";
    manifest["format_version"] = 1;
    manifest["event_count"] = run.events.size();
    manifest["events_sha256"] = run.events_sha256;
    manifest["config"] = config_json(run.config);
    json tj;
    for (const auto& [k, v] : tables) tj[k] = v;
    manifest["tables"] = tj;
    json files = json::array();
    for (const auto& e : w.entries())
        files.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
    manifest["files"] = files;

    std::ofstream mf(dir / "manifest.json", std::ios::binary);
    mf << manifest.dump(2) << '\n';
    mf.close();
    if (!mf) throw Error(ErrorKind::io, "cannot write manifest.json");
    return w.entries();
}

} // namespace rare
