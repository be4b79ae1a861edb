#pragma once

#include "automaton.hpp"
#include "error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace llna::svg {

inline std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    return out;
}

// Fixed-precision coordinates keep output byte-stable across platforms.
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", std::abs(v) < 0.005 ? 0.0 : v);
    return buf;
}

inline const std::array<const char*, 10>& palette() {
    static const std::array<const char*, 10> colors = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                       "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors;
}

class Canvas {
  public:
    Canvas(double width, double height) : w_(width), h_(height) {}

    void rect(double x, double y, double w, double h, std::string_view fill, std::string_view extra = {}) {
        body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
              << "\" fill=\"" << fill << '"';
        if (!extra.empty()) body_ << ' ' << extra;
        body_ << "/>\n";
    }
    void line(double x1, double y1, double x2, double y2, std::string_view stroke = "#000") {
        body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
              << "\" stroke=\"" << stroke << "\"/>\n";
    }
    void circle(double cx, double cy, double r, std::string_view fill) {
        body_ << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r) << "\" fill=\"" << fill
              << "\"/>\n";
    }
    void text(double x, double y, std::string_view s, std::string_view anchor = "middle", double size = 12,
              std::string_view extra = {}) {
        body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << num(size)
              << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << '"';
        if (!extra.empty()) body_ << ' ' << extra;
        body_ << '>' << escape(s) << "</text>\n";
    }
    void raw(std::string_view s) { body_ << s; }

    void write(std::ostream& out) const {
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w_) << "\" height=\"" << num(h_)
            << "\" viewBox=\"0 0 " << num(w_) << ' ' << num(h_) << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n"
            << body_.str() << "</svg>\n";
    }
    std::string str() const {
        std::ostringstream s;
        write(s);
        return s.str();
    }

  private:
    double w_, h_;
    std::ostringstream body_;
};

struct Frame {
    double left = 60, right = 20, top = 40, bottom = 50;
    double width = 640, height = 400;
    double plot_w() const { return width - left - right; }
    double plot_h() const { return height - top - bottom; }
};

inline void axes(Canvas& c, const Frame& f, std::string_view title, std::string_view xlabel, std::string_view ylabel) {
    c.line(f.left, f.top + f.plot_h(), f.left + f.plot_w(), f.top + f.plot_h());
    c.line(f.left, f.top, f.left, f.top + f.plot_h());
    c.text(f.width / 2, 24, title, "middle", 14);
    c.text(f.left + f.plot_w() / 2, f.height - 12, xlabel);
    c.text(16, f.top + f.plot_h() / 2, ylabel, "middle", 12,
           "transform=\"rotate(-90 16 " + num(f.top + f.plot_h() / 2) + ")\"");
}

/// Bar chart of a histogram over [lo, hi].
inline void write_histogram(std::ostream& out, std::span<const double> counts, double lo, double hi,
                            std::string_view title, std::string_view xlabel, std::string_view ylabel = "fraction") {
    if (counts.empty()) throw Error(ErrorKind::usage, "histogram plot needs at least one bin");
    Frame f;
    Canvas c(f.width, f.height);
    axes(c, f, title, xlabel, ylabel);
    const double top = std::max(*std::max_element(counts.begin(), counts.end()), 1e-12);
    const double bw = f.plot_w() / static_cast<double>(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double h = counts[i] / top * f.plot_h();
        c.rect(f.left + static_cast<double>(i) * bw, f.top + f.plot_h() - h, bw, h, palette()[0],
               "stroke=\"#fff\" stroke-width=\"0.5\"");
    }
    for (int t = 0; t <= 4; ++t) {
        const double x = f.left + f.plot_w() * t / 4.0;
        c.line(x, f.top + f.plot_h(), x, f.top + f.plot_h() + 4);
        c.text(x, f.top + f.plot_h() + 18, num(lo + (hi - lo) * t / 4.0));
    }
    c.text(f.left - 6, f.top + 4, num(top), "end", 10);
    c.text(f.left - 6, f.top + f.plot_h(), "0", "end", 10);
    c.write(out);
}

/// Grouped bars: one group per category, one bar per series, with optional
/// error whiskers.
struct BarSeries {
    std::string name;
    std::vector<double> values;
    std::vector<double> errors;  // empty or one per category
};

inline void write_grouped_bars(std::ostream& out, std::span<const std::string> categories,
                               std::span<const BarSeries> series, std::string_view title, std::string_view ylabel,
                               double ymax = 0.0) {
    if (categories.empty() || series.empty()) throw Error(ErrorKind::usage, "grouped bar plot needs data");
    for (const auto& s : series)
        if (s.values.size() != categories.size() || (!s.errors.empty() && s.errors.size() != categories.size()))
            throw Error(ErrorKind::usage, "bar series '" + s.name + "' does not match the categories");
    if (ymax <= 0.0)
        for (const auto& s : series)
            for (std::size_t i = 0; i < s.values.size(); ++i)
                ymax = std::max(ymax, s.values[i] + (s.errors.empty() ? 0.0 : s.errors[i]));
    if (ymax <= 0.0) ymax = 1.0;

    Frame f;
    f.width = std::max(640.0, 120.0 * static_cast<double>(categories.size()) + 80.0);
    f.bottom = 70;
    Canvas c(f.width, f.height);
    axes(c, f, title, "", ylabel);
    const double gw = f.plot_w() / static_cast<double>(categories.size());
    const double bw = gw * 0.8 / static_cast<double>(series.size());
    for (std::size_t g = 0; g < categories.size(); ++g) {
        const double gx = f.left + static_cast<double>(g) * gw + gw * 0.1;
        for (std::size_t s = 0; s < series.size(); ++s) {
            const double v = std::max(0.0, series[s].values[g]);
            const double h = v / ymax * f.plot_h();
            const double x = gx + static_cast<double>(s) * bw;
            c.rect(x, f.top + f.plot_h() - h, bw, h, palette()[s % palette().size()]);
            if (!series[s].errors.empty()) {
                const double e = series[s].errors[g] / ymax * f.plot_h();
                const double cx = x + bw / 2, cy = f.top + f.plot_h() - h;
                c.line(cx, cy - e, cx, cy + e);
                c.line(cx - bw / 4, cy - e, cx + bw / 4, cy - e);
                c.line(cx - bw / 4, cy + e, cx + bw / 4, cy + e);
            }
        }
        c.text(gx + gw * 0.4, f.top + f.plot_h() + 18, categories[g], "middle", 11);
    }
    for (int t = 0; t <= 4; ++t) {
        const double y = f.top + f.plot_h() * (1.0 - t / 4.0);
        c.line(f.left - 4, y, f.left, y);
        c.text(f.left - 6, y + 4, num(ymax * t / 4.0), "end", 10);
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double lx = f.left + 10 + static_cast<double>(s) * 140.0;
        c.rect(lx, f.height - 30, 12, 12, palette()[s % palette().size()]);
        c.text(lx + 16, f.height - 20, series[s].name, "start", 11);
    }
    c.write(out);
}

/// Scatter of 2-D points colored by class label.
inline void write_scatter(std::ostream& out, std::span<const std::array<double, 2>> points,
                          std::span<const std::string> labels, std::string_view title, std::string_view xlabel = "PC1",
                          std::string_view ylabel = "PC2") {
    if (points.size() != labels.size()) throw Error(ErrorKind::usage, "scatter: one label per point required");
    std::vector<std::string> classes(labels.begin(), labels.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    Frame f;
    f.right = 160;
    f.width = 760;
    Canvas c(f.width, f.height);
    axes(c, f, title, xlabel, ylabel);
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    for (const auto& p : points) {
        x0 = std::min(x0, p[0]), x1 = std::max(x1, p[0]);
        y0 = std::min(y0, p[1]), y1 = std::max(y1, p[1]);
    }
    const double xr = x1 > x0 ? x1 - x0 : 1.0, yr = y1 > y0 ? y1 - y0 : 1.0;
    auto px = [&](double x) { return f.left + 10 + (x - x0) / xr * (f.plot_w() - 20); };
    auto py = [&](double y) { return f.top + f.plot_h() - 10 - (y - y0) / yr * (f.plot_h() - 20); };
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto k = static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), labels[i]) - classes.begin());
        c.circle(px(points[i][0]), py(points[i][1]), 4, palette()[k % palette().size()]);
    }
    for (std::size_t k = 0; k < classes.size(); ++k) {
        const double ly = f.top + 10 + static_cast<double>(k) * 18;
        c.circle(f.width - f.right + 20, ly, 5, palette()[k % palette().size()]);
        c.text(f.width - f.right + 30, ly + 4, classes[k], "start", 11);
    }
    c.write(out);
}

/// Spatio-temporal diagram: nodes across (ascending degree), time down,
/// alive cells white on black.
inline void write_diagram(std::ostream& out, const SpatioTemporalMatrix& m, double cell = 2.0) {
    const double w = static_cast<double>(m.nodes()) * cell, h = static_cast<double>(m.times()) * cell;
    Canvas c(w, h);
    c.rect(0, 0, w, h, "#000");
    for (std::size_t t = 0; t < m.times(); ++t) {
        const auto col = m.column(t);
        // one rect per run of alive cells keeps files small
        for (std::size_t r = 0; r < m.nodes();) {
            if (!col[r]) {
                ++r;
                continue;
            }
            const std::size_t b = r;
            while (r < m.nodes() && col[r]) ++r;
            c.rect(static_cast<double>(b) * cell, static_cast<double>(t) * cell, static_cast<double>(r - b) * cell, cell,
                   "#fff");
        }
    }
    c.write(out);
}

}  // namespace llna::svg
