#include "rare/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace rare::svg {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 72;
constexpr double kRight = 24;
constexpr double kTop = 40;
constexpr double kBottom = 56;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

double nice_step(double span, int target_ticks) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

struct Frame {
    double x0, x1, y0, y1;

    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const {
        return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
    }
};

Frame make_frame(double x0, double x1, double y0, double y1) {
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    return {x0, x1, y0, y1};
}

void open_doc(std::ostream& out, const ChartText& text) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(kWidth)
        << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' '
        << num(kHeight) << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" fill=\"white\"/>\n"
        << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape(text.title) << "</text>\n";
}

void close_doc(std::ostream& out) { out << "</svg>\n"; }

void axes(std::ostream& out, const Frame& f, const ChartText& text, bool y_ticks = true) {
    const double bx = f.px(f.x0), by = f.py(f.y0);
    out << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << num(bx) << "\" y1=\"" << num(by) << "\" x2=\"" << num(f.px(f.x1))
        << "\" y2=\"" << num(by) << "\"/>\n"
        << "<line x1=\"" << num(bx) << "\" y1=\"" << num(by) << "\" x2=\"" << num(bx)
        << "\" y2=\"" << num(f.py(f.y1)) << "\"/>\n"
        << "</g>\n";

    out << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
    const double xs = nice_step(f.x1 - f.x0, 6);
    for (double x = std::ceil(f.x0 / xs) * xs; x <= f.x1 + 1e-9 * xs; x += xs) {
        out << "<line x1=\"" << num(f.px(x)) << "\" y1=\"" << num(by) << "\" x2=\"" << num(f.px(x))
            << "\" y2=\"" << num(by + 5) << "\" stroke=\"black\"/>"
            << "<text x=\"" << num(f.px(x)) << "\" y=\"" << num(by + 18)
            << "\" text-anchor=\"middle\">" << tick_label(std::fabs(x) < 1e-12 ? 0.0 : x)
            << "</text>\n";
    }
    if (y_ticks) {
        const double ys = nice_step(f.y1 - f.y0, 5);
        for (double y = std::ceil(f.y0 / ys) * ys; y <= f.y1 + 1e-9 * ys; y += ys) {
            out << "<line x1=\"" << num(bx - 5) << "\" y1=\"" << num(f.py(y)) << "\" x2=\""
                << num(bx) << "\" y2=\"" << num(f.py(y)) << "\" stroke=\"black\"/>"
                << "<text x=\"" << num(bx - 8) << "\" y=\"" << num(f.py(y) + 4)
                << "\" text-anchor=\"end\">" << tick_label(std::fabs(y) < 1e-12 ? 0.0 : y)
                << "</text>\n";
        }
    }
    out << "</g>\n";

    out << "<text x=\"" << num(f.px(0.5 * (f.x0 + f.x1))) << "\" y=\"" << num(kHeight - 14)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape(text.x_label) << "</text>\n";
    if (!text.y_label.empty())
        out << "<text x=\"18\" y=\"" << num(f.py(0.5 * (f.y0 + f.y1)))
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
            << "transform=\"rotate(-90 18 " << num(f.py(0.5 * (f.y0 + f.y1))) << ")\">"
            << escape(text.y_label) << "</text>\n";
}

void legend(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& items) {
    out << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
    double y = kTop + 12;
    for (const auto& [label, color] : items) {
        const double x = kWidth - kRight - 170;
        out << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 24)
            << "\" y2=\"" << num(y) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>"
            << "<text x=\"" << num(x + 30) << "\" y=\"" << num(y + 4) << "\">" << escape(label)
            << "</text>\n";
        y += 16;
    }
    out << "</g>\n";
}

void polyline(std::ostream& out, const Frame& f, const Curve& pts, const char* cls,
              const char* color, const char* dash = nullptr) {
    out << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"";
    if (dash) out << " stroke-dasharray=\"" << dash << '"';
    out << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
        out << (i ? " " : "") << num(f.px(pts[i].first)) << ',' << num(f.py(pts[i].second));
    out << "\"/>\n";
}

} // namespace

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

Curve cdf_curve(const ExponentialFit& fit, double t_max, int samples) {
    Curve c;
    samples = std::max(samples, 2);
    for (int i = 0; i < samples; ++i) {
        const double t = t_max * i / (samples - 1);
        c.emplace_back(t, exp_cdf(t, fit.rate));
    }
    return c;
}

void render_edf_cdf(std::ostream& out, const std::vector<EdfPoint>& edf, const Curve& cdf,
                    const ChartText& text) {
    if (edf.empty() || cdf.empty())
        throw Error(ErrorKind::parameter, "EDF/CDF chart needs non-empty point sets");
    double x_max = edf.back().t;
    for (const auto& p : cdf) x_max = std::max(x_max, p.first);
    const Frame f = make_frame(0.0, x_max, 0.0, 1.0);

    open_doc(out, text);
    axes(out, f, text);
    out << "<g class=\"edf\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\">\n";
    double prev = 0.0;
    for (std::size_t i = 0; i < edf.size(); ++i) {
        const double x = edf[i].t;
        const double next_x = i + 1 < edf.size() ? edf[i + 1].t : x_max;
        out << "<path class=\"edf-step\" d=\"M " << num(f.px(x)) << ' ' << num(f.py(prev))
            << " L " << num(f.px(x)) << ' ' << num(f.py(edf[i].empirical_prob)) << " L "
            << num(f.px(next_x)) << ' ' << num(f.py(edf[i].empirical_prob)) << "\"/>\n";
        prev = edf[i].empirical_prob;
    }
    out << "</g>\n";
    polyline(out, f, cdf, "cdf", "#c0392b");
    legend(out, {{"Observed (EDF)", "#1f4e9c"}, {"Fitted model (CDF)", "#c0392b"}});
    close_doc(out);
    if (!out) throw Error(ErrorKind::io, "failed writing SVG");
}

void render_qq(std::ostream& out, const std::vector<QqPoint>& points, const ChartText& text) {
    if (points.empty()) throw Error(ErrorKind::parameter, "QQ chart needs points");
    double m = 0.0;
    for (const auto& p : points)
        m = std::max({m, p.observed_quantile, p.theoretical_quantile, p.upper_band});
    const Frame f = make_frame(0.0, m, 0.0, m);

    open_doc(out, text);
    axes(out, f, text);
    polyline(out, f, {{0.0, 0.0}, {m, m}}, "identity", "#888888", "4 3");
    Curve lo, hi;
    for (const auto& p : points) {
        lo.emplace_back(p.observed_quantile, p.lower_band);
        hi.emplace_back(p.observed_quantile, p.upper_band);
    }
    polyline(out, f, lo, "band-lower", "#7f8c8d", "2 2");
    polyline(out, f, hi, "band-upper", "#7f8c8d", "2 2");
    out << "<g class=\"qq-points\" fill=\"#1f4e9c\">\n";
    for (const auto& p : points)
        out << "<circle cx=\"" << num(f.px(p.observed_quantile)) << "\" cy=\""
            << num(f.py(p.theoretical_quantile)) << "\" r=\"2.5\"/>\n";
    out << "</g>\n";
    legend(out, {{"45-degree line", "#888888"}, {"Pointwise band", "#7f8c8d"}});
    close_doc(out);
    if (!out) throw Error(ErrorKind::io, "failed writing SVG");
}

void render_frequency(std::ostream& out, const std::map<int, std::size_t>& counts,
                      const ChartText& text) {
    if (counts.empty()) throw Error(ErrorKind::parameter, "frequency chart needs data");
    const int first = counts.begin()->first;
    const int last = counts.rbegin()->first;
    std::size_t top = 1;
    for (const auto& [y, c] : counts) top = std::max(top, c);
    const Frame f = make_frame(first - 0.5, last + 0.5, 0.0, static_cast<double>(top));

    open_doc(out, text);
    axes(out, f, text);
    out << "<g class=\"bars\" fill=\"#1f4e9c\">\n";
    for (const auto& [year, c] : counts) {
        if (c == 0) continue;
        const double x0 = f.px(year - 0.4), x1 = f.px(year + 0.4);
        const double y1 = f.py(static_cast<double>(c)), y0 = f.py(0.0);
        out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
            << "\" height=\"" << num(y0 - y1) << "\"/>\n";
    }
    out << "</g>\n";
    close_doc(out);
    if (!out) throw Error(ErrorKind::io, "failed writing SVG");
}

void render_tukey(std::ostream& out, const std::vector<TukeyInterval>& intervals,
                  const ChartText& text) {
    if (intervals.empty()) throw Error(ErrorKind::parameter, "Tukey chart needs intervals");
    double lo = 0.0, hi = 0.0;
    for (const auto& t : intervals) {
        lo = std::min(lo, t.lower);
        hi = std::max(hi, t.upper);
    }
    const double n = static_cast<double>(intervals.size());
    const Frame f = make_frame(lo, hi, 0.0, n + 1.0);

    open_doc(out, text);
    axes(out, f, text, false);
    polyline(out, f, {{0.0, 0.0}, {0.0, n + 1.0}}, "zero", "#888888", "4 3");
    out << "<g class=\"intervals\" font-family=\"sans-serif\" font-size=\"10\">\n";
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const auto& t = intervals[i];
        const double y = f.py(n - static_cast<double>(i));
        const char* color = t.significant ? "#c0392b" : "#1f4e9c";
        out << "<line x1=\"" << num(f.px(t.lower)) << "\" y1=\"" << num(y) << "\" x2=\""
            << num(f.px(t.upper)) << "\" y2=\"" << num(y) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>"
            << "<circle cx=\"" << num(f.px(t.mean_difference)) << "\" cy=\"" << num(y)
            << "\" r=\"3\" fill=\"" << color << "\"/>"
            << "<text x=\"" << num(f.px(t.upper) + 6) << "\" y=\"" << num(y + 3)
            << "\" text-anchor=\"start\">" << escape(t.group_a + " - " + t.group_b) << "</text>\n";
    }
    out << "</g>\n";
    close_doc(out);
    if (!out) throw Error(ErrorKind::io, "failed writing SVG");
}

} // namespace rare::svg
