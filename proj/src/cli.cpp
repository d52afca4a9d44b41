#include "rare/cli.hpp"

#include "rare/compare.hpp"
#include "rare/eras.hpp"
#include "rare/expfit.hpp"
#include "rare/gof.hpp"
#include "rare/iatbuild.hpp"
#include "rare/ingest.hpp"
#include "rare/predict.hpp"
#include "rare/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace rare {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string corpus;
    std::string iats;
    std::string eras_file;
    std::string out;
    int threshold = 20;
    std::string era;
    std::string test = "all";
    int bins = 10;
    std::optional<int> df;
    std::size_t mc = 0;
    std::uint64_t seed = 20090418;
    bool log = false;
    double level = 0.95;
    std::string boundary = "later";
    std::optional<double> rate;
    std::vector<double> horizons;
    double elapsed = 0.0;
    std::optional<double> target;
};

std::string fmt(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string fmt9(double v) { return fmt(v, 9); }
double round9(double v) { return std::stod(fmt9(v)); }
std::string fmt4(double v) { return fmt(v, 4); }

class Runner {
public:
    Runner(Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

    std::vector<GameRecord> load_corpus() {
        if (o_.corpus.empty()) throw UsageError("--corpus is required");
        auto file = parse_game_log_file(o_.corpus);
        for (const auto& d : file.diagnostics)
            err_ << "warning: " << o_.corpus << ":" << d.line << ": " << d.message << '\n';
        return file.records;
    }

    CountingConfig counting() const {
        CountingConfig c;
        c.threshold = o_.threshold;
        return c;
    }

    std::vector<Era> eras() const {
        if (o_.eras_file.empty()) return default_eras();
        std::ifstream in(o_.eras_file);
        if (!in) throw Error(ErrorKind::io, "cannot open era file " + o_.eras_file);
        return read_eras_csv(in);
    }

    BoundaryGap boundary() const {
        return o_.boundary == "drop" ? BoundaryGap::drop : BoundaryGap::later;
    }

    std::vector<EventOccurrence> events() { return detect_events(load_corpus(), counting()); }

    std::vector<EraSummary> era_summaries() {
        return partition_and_fit(events(), eras(), boundary());
    }

    const EraSummary& find_era(const std::vector<EraSummary>& summaries) const {
        for (const auto& s : summaries)
            if (s.era.name == o_.era) return s;
        throw Error(ErrorKind::lookup, "unknown era '" + o_.era + "'");
    }

    // IAT values from --iats, or from the corpus (optionally one era).
    std::vector<double> iat_values() {
        if (!o_.iats.empty()) {
            if (!o_.era.empty()) throw UsageError("--era needs --corpus, not --iats");
            std::ifstream in(o_.iats);
            if (!in) throw Error(ErrorKind::io, "cannot open " + o_.iats);
            return read_iats_csv(in);
        }
        if (o_.corpus.empty()) throw UsageError("one of --iats or --corpus is required");
        if (o_.era.empty()) return compute_iats(events()).as_real();
        const auto summaries = era_summaries();
        return find_era(summaries).iats.as_real();
    }

    std::optional<fs::path> out_dir() const {
        if (!o_.out.empty()) return fs::path(o_.out);
        if (const char* env = std::getenv("RARE_EVENT_OUT"); env && *env) return fs::path(env);
        return std::nullopt;
    }

    // Writes to `<out>/<name>` when an output directory is configured,
    // otherwise to stdout.
    void emit(const std::string& name, const std::function<void(std::ostream&)>& write) {
        if (auto dir = out_dir()) {
            std::error_code ec;
            fs::create_directories(*dir, ec);
            if (ec) throw Error(ErrorKind::io, "cannot create " + dir->string());
            std::ofstream f(*dir / name, std::ios::binary);
            write(f);
            f.close();
            if (!f) throw Error(ErrorKind::io, "cannot write " + (*dir / name).string());
            out_ << "wrote " << (*dir / name).string() << '\n';
        } else {
            write(out_);
        }
    }

    std::vector<Group> groups() {
        std::vector<Group> g;
        for (const auto& s : era_summaries())
            if (!s.iats.empty()) g.push_back({s.era.name, s.iats.as_real()});
        return o_.log ? log_transform(g) : g;
    }

    int ingest() {
        auto file = parse_game_log_file(o_.corpus);
        const auto report = validate_schedule(file.records);
        out_ << "records: " << file.records.size() << '\n';
        out_ << "malformed lines: " << file.diagnostics.size() << '\n';
        for (const auto& d : file.diagnostics)
            out_ << "  line " << d.line << ": " << d.message << '\n';
        out_ << "seasons: " << report.season_totals.size() << '\n';
        for (int y : report.missing_seasons) out_ << "  missing season " << y << '\n';
        out_ << "schedule anomalies: " << report.anomalies.size() << '\n';
        for (const auto& a : report.anomalies)
            out_ << "  " << a.date.iso() << ' ' << a.team << ": " << a.message << '\n';
        return file.diagnostics.empty() ? kExitOk : kExitData;
    }

    int events_cmd() {
        const auto ev = events();
        emit("events.csv", [&](std::ostream& s) { write_events_csv(s, ev); });
        return kExitOk;
    }

    int iat_cmd() {
        const auto series = compute_iats(events());
        emit("iats.csv", [&](std::ostream& s) { write_iats_csv(s, series); });
        return kExitOk;
    }

    int fit_cmd() {
        const auto fit = fit_mle(iat_values());
        json j;
        j["scope"] = o_.era.empty() ? "global" : o_.era;
        j["rate"] = round9(fit.rate);
        j["n"] = fit.n;
        j["mean_iat"] = round9(fit.sample_mean);
        j["sd_iat"] = std::isfinite(fit.sample_sd) ? json(round9(fit.sample_sd)) : json(nullptr);
        emit("fit.json", [&](std::ostream& s) { s << j.dump(2) << '\n'; });
        return kExitOk;
    }

    int gof_cmd() {
        const auto x = iat_values();
        const auto fit = fit_mle(x);
        std::vector<GofReport> reports;
        const bool all = o_.test == "all";
        if (all || o_.test == "ks") reports.push_back(ks_report(x, fit));
        if (all || o_.test == "ad") reports.push_back(ad_report(x, fit, true));
        if (all || o_.test == "chisq") reports.push_back(chisq_binned(x, fit, o_.bins, o_.df));
        if (o_.mc > 0) {
            if (all || o_.test == "ks") reports.push_back(mc_report(x, EdfStatistic::ks, o_.mc, o_.seed));
            if (all || o_.test == "ad") reports.push_back(mc_report(x, EdfStatistic::ad, o_.mc, o_.seed));
        }
        emit("gof.jsonl", [&](std::ostream& s) {
            for (const auto& r : reports) s << to_json_line(r) << '\n';
        });
        return kExitOk;
    }

    int eras_cmd() {
        const auto summaries = era_summaries();
        emit("eras.csv", [&](std::ostream& s) { write_era_summary_csv(s, summaries); });
        return kExitOk;
    }

    int anova_cmd() {
        const auto a = anova_oneway(groups());
        json j;
        j["f_statistic"] = a.f_statistic;
        j["df_between"] = a.df_between;
        j["df_within"] = a.df_within;
        j["ss_between"] = a.ss_between;
        j["ss_within"] = a.ss_within;
        j["p_value"] = a.p_value;
        j["log_transformed"] = o_.log;
        emit("anova.json", [&](std::ostream& s) { s << j.dump(2) << '\n'; });
        return kExitOk;
    }

    int tukey_cmd() {
        const auto intervals = tukey_hsd(groups(), o_.level);
        emit("tukey.csv", [&](std::ostream& s) { write_tukey_csv(s, intervals); });
        return kExitOk;
    }

    int predict_cmd() {
        if (o_.rate.has_value() == !o_.era.empty())
            throw UsageError("exactly one of --rate or --era is required");
        if (o_.horizons.empty() && !o_.target)
            throw UsageError("--horizon or --target is required");
        double rate = 0.0;
        std::string source;
        if (o_.rate) {
            rate = *o_.rate;
            source = "given";
        } else if (!o_.corpus.empty()) {
            const auto summaries = era_summaries();
            const auto& s = find_era(summaries);
            if (!s.fit) throw Error(ErrorKind::insufficient_data, "era '" + o_.era + "' has no fit");
            rate = s.fit->rate;
            source = "corpus";
        } else {
            const auto r = reference_rate_for(o_.era);
            if (!r) throw Error(ErrorKind::lookup, "no reference rate for era '" + o_.era + "'");
            rate = *r;
            source = "reference";
        }
        out_ << "rate " << fmt9(rate) << " (" << source << ")\n";
        for (double h : o_.horizons) {
            const auto p = predict(rate, o_.elapsed, h);
            out_ << "horizon " << fmt4(h) << " games, elapsed " << fmt4(o_.elapsed)
                 << ": probability " << fmt4(p.probability) << '\n';
        }
        if (o_.target) {
            const double h = horizon_for_prob(rate, *o_.target);
            out_ << "target " << fmt4(*o_.target) << ": within " << std::ceil(h) << " games\n";
        }
        return kExitOk;
    }

    int report_cmd() {
        const auto dir = out_dir();
        if (!dir) throw UsageError("--out (or RARE_EVENT_OUT) is required for report");
        AnalysisConfig c;
        c.counting = counting();
        c.eras = eras();
        c.boundary = boundary();
        c.bins = o_.bins;
        c.df_override = o_.df;
        c.mc_replications = o_.mc;
        c.seed = o_.seed;
        c.family_level = o_.level;
        c.log_anova = o_.log;
        c.output_dir = *dir;
        const auto run = run_full_analysis(load_corpus(), c);
        out_ << "events: " << run.events.size() << '\n';
        out_ << "global rate: " << fmt9(run.global_fit.rate) << '\n';
        out_ << "wrote " << (*dir / "manifest.json").string() << '\n';
        return kExitOk;
    }

private:
    Options& o_;
    std::ostream& out_;
    std::ostream& err_;
};

void add_corpus(CLI::App* app, Options& o, bool required = false) {
    auto* opt = app->add_option("--corpus", o.corpus, "Game log CSV")->check(CLI::ExistingFile);
    if (required) opt->required();
    app->add_option("--threshold", o.threshold, "Minimum runs by one team for an event")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

void add_eras(CLI::App* app, Options& o) {
    app->add_option("--eras", o.eras_file, "Era table CSV (name,start_year,end_year)")
        ->check(CLI::ExistingFile);
    app->add_option("--boundary", o.boundary, "Gap spanning an era boundary: later or drop")
        ->capture_default_str()
        ->check(CLI::IsMember({"later", "drop"}));
}

void add_out(CLI::App* app, Options& o) {
    app->add_option("--out", o.out, "Output directory (default: $RARE_EVENT_OUT, else stdout)");
}

void add_iats(CLI::App* app, Options& o) {
    app->add_option("--iats", o.iats, "IAT CSV instead of a corpus")->check(CLI::ExistingFile);
    app->add_option("--era", o.era, "Restrict to one era");
}

void add_seed(CLI::App* app, Options& o) {
    app->add_option("--mc", o.mc, "Bootstrap replications for K-S/A-D p-values (0 = off)")
        ->capture_default_str();
    app->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void add_bins(CLI::App* app, Options& o) {
    app->add_option("--bins", o.bins, "Chi-squared bins")->capture_default_str()->check(
        CLI::Range(2, 100000));
    app->add_option("--df", o.df, "Chi-squared degrees of freedom (default: bins)");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Rare-event inter-arrival modelling for game logs", "rare"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    auto* ingest = app.add_subcommand("ingest", "Validate a game-log corpus");
    ingest->add_option("--corpus", o.corpus, "Game log CSV")->required()->check(CLI::ExistingFile);

    auto* events = app.add_subcommand("events", "Detect events and their continuous game index");
    add_corpus(events, o, true);
    add_out(events, o);

    auto* iat = app.add_subcommand("iat", "Emit the inter-arrival time series");
    add_corpus(iat, o, true);
    add_out(iat, o);

    auto* fit = app.add_subcommand("fit", "Fit the exponential rate globally or for one era");
    add_corpus(fit, o);
    add_iats(fit, o);
    add_eras(fit, o);
    add_out(fit, o);

    auto* gof = app.add_subcommand("gof", "Goodness-of-fit tests");
    add_corpus(gof, o);
    add_iats(gof, o);
    add_eras(gof, o);
    gof->add_option("--test", o.test, "ks, ad, chisq or all")
        ->capture_default_str()
        ->check(CLI::IsMember({"ks", "ad", "chisq", "all"}));
    add_bins(gof, o);
    add_seed(gof, o);
    add_out(gof, o);

    auto* eras = app.add_subcommand("eras", "Per-era IAT summary table");
    add_corpus(eras, o, true);
    add_eras(eras, o);
    add_out(eras, o);

    auto* anova = app.add_subcommand("anova", "One-way ANOVA of IATs across eras");
    add_corpus(anova, o, true);
    add_eras(anova, o);
    anova->add_flag("--log", o.log, "Analyse log IATs");
    add_out(anova, o);

    auto* tukey = app.add_subcommand("tukey", "Tukey-Kramer pairwise intervals across eras");
    add_corpus(tukey, o, true);
    add_eras(tukey, o);
    tukey->add_flag("--log", o.log, "Analyse log IATs");
    tukey->add_option("--level", o.level, "Family confidence level")
        ->capture_default_str()
        ->check(CLI::Range(0.5, 0.9999));
    add_out(tukey, o);

    auto* pred = app.add_subcommand("predict", "Probability of an event within a horizon");
    pred->add_option("--rate", o.rate, "Event rate per game")->check(CLI::PositiveNumber);
    pred->add_option("--era", o.era, "Era whose rate to use (from --corpus, else reference)");
    add_corpus(pred, o);
    add_eras(pred, o);
    pred->add_option("--horizon", o.horizons, "Horizon in games (repeatable)")
        ->check(CLI::NonNegativeNumber);
    pred->add_option("--elapsed", o.elapsed, "Games since the last event")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    pred->add_option("--target", o.target, "Report the horizon reaching this probability");

    auto* report = app.add_subcommand("report", "Full analysis with artifacts and manifest");
    add_corpus(report, o, true);
    add_eras(report, o);
    add_bins(report, o);
    add_seed(report, o);
    report->add_flag("--log", o.log, "ANOVA/Tukey on log IATs");
    report->add_option("--level", o.level, "Tukey family confidence level")
        ->capture_default_str()
        ->check(CLI::Range(0.5, 0.9999));
    add_out(report, o);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    Runner r(o, out, err);
    try {
        if (*ingest) return r.ingest();
        if (*events) return r.events_cmd();
        if (*iat) return r.iat_cmd();
        if (*fit) return r.fit_cmd();
        if (*gof) return r.gof_cmd();
        if (*eras) return r.eras_cmd();
        if (*anova) return r.anova_cmd();
        if (*tukey) return r.tukey_cmd();
        if (*pred) return r.predict_cmd();
        if (*report) return r.report_cmd();
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

} // namespace rare
