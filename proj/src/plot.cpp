#include "qwalk/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace qwalk {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr double kLeft = 64, kRight = 616, kTop = 28, kBottom = 430;

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void widen() {
        if (lo > hi) { lo = 0.0; hi = 1.0; }
        if (hi - lo < 1e-300) { lo -= 0.5; hi += 0.5; }
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    double frac(double v) const { return (v - lo) / (hi - lo); }
};

double sx(const Range& r, double v) { return kLeft + r.frac(v) * (kRight - kLeft); }
double sy(const Range& r, double v) { return kBottom - r.frac(v) * (kBottom - kTop); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

double cell_real(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* i = std::get_if<long long>(&v))
        return static_cast<double>(*i);
    throw invalid_parameter("plot: expected a numeric column");
}

int required_column(const ResultTable& t, const std::string& name) {
    const int idx = t.column_index(name);
    if (idx < 0)
        throw invalid_parameter("plot: required column '" + name +
                                "' is missing from the table");
    return idx;
}

std::string meta(const ResultTable& t, const std::string& key) {
    const auto it = t.metadata.find(key);
    if (it == t.metadata.end())
        throw invalid_parameter("plot: metadata key '" + key +
                                "' is required for this plot kind");
    return it->second;
}

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

const char* series_color(const std::string& name, int fallback_rank) {
    if (name == "pbc") return "#1f77b4";
    if (name == "fbc") return "#d62728";
    static const char* palette[] = {"#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#7f7f7f"};
    return palette[fallback_rank % 6];
}

class Svg {
public:
    void header() {
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
             << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth
             << " " << kHeight << "\">\n"
             << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
             << "\" fill=\"white\"/>\n";
    }
    void line(double x1, double y1, double x2, double y2, const char* color,
              double width) {
        out_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\""
             << fmt(x2) << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << color
             << "\" stroke-width=\"" << width << "\"/>\n";
    }
    void circle(double x, double y, double r, const std::string& color,
                const std::string& cls) {
        out_ << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\""
             << r << "\" fill=\"" << color << "\"";
        if (!cls.empty()) out_ << " class=\"" << cls << "\"";
        out_ << "/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& color) {
        out_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
             << fmt(w) << "\" height=\"" << fmt(h) << "\" fill=\"" << color
             << "\"/>\n";
    }
    void text(double x, double y, const std::string& s, const char* anchor,
              int size = 12) {
        out_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y)
             << "\" font-family=\"sans-serif\" font-size=\"" << size
             << "\" text-anchor=\"" << anchor << "\">" << s << "</text>\n";
    }
    void axes(const Range& xr, const Range& yr, const std::string& xlabel,
              const std::string& ylabel) {
        line(kLeft, kBottom, kRight, kBottom, "#000", 1);
        line(kLeft, kTop, kLeft, kBottom, "#000", 1);
        for (int i = 0; i <= 4; ++i) {
            const double fx = xr.lo + (xr.hi - xr.lo) * i / 4;
            const double px = sx(xr, fx);
            line(px, kBottom, px, kBottom + 4, "#000", 1);
            text(px, kBottom + 18, fmt(fx), "middle", 11);
            const double fy = yr.lo + (yr.hi - yr.lo) * i / 4;
            const double py = sy(yr, fy);
            line(kLeft - 4, py, kLeft, py, "#000", 1);
            text(kLeft - 7, py + 4, fmt(fy), "end", 11);
        }
        text((kLeft + kRight) / 2, kHeight - 10, xlabel, "middle");
        out_ << "<text x=\"14\" y=\"" << fmt((kTop + kBottom) / 2)
             << "\" font-family=\"sans-serif\" font-size=\"12\" "
                "text-anchor=\"middle\" transform=\"rotate(-90 14 "
             << fmt((kTop + kBottom) / 2) << ")\">" << ylabel << "</text>\n";
    }
    void legend_entry(int rank, const std::string& label,
                      const std::string& color) {
        const double y = kTop + 8 + 16 * rank;
        circle(kRight - 90, y, 4, color, "");
        text(kRight - 80, y + 4, label, "start", 11);
    }
    void save(const std::string& path) {
        out_ << "</svg>\n";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw io_error("cannot open '" + path + "' for writing");
        f << out_.str();
        f.flush();
        if (!f) throw io_error("write to '" + path + "' failed");
    }

private:
    std::ostringstream out_;
};

void plot_scatter_complex(const ResultTable& t, const std::string& path) {
    // Locate the first _re/_im pair.
    int re = -1, im = -1;
    std::string base;
    for (size_t i = 0; i < t.names.size(); ++i) {
        const std::string& n = t.names[i];
        if (n.size() > 3 && n.compare(n.size() - 3, 3, "_re") == 0) {
            const std::string b = n.substr(0, n.size() - 3);
            const int j = t.column_index(b + "_im");
            if (j >= 0) {
                re = static_cast<int>(i);
                im = j;
                base = b;
                break;
            }
        }
    }
    if (re < 0)
        throw invalid_parameter(
            "plot: scatter_complex needs a _re/_im column pair");
    const int series = t.column_index("series");

    Range xr, yr;
    for (const auto& row : t.rows) {
        xr.include(cell_real(row[re]));
        yr.include(cell_real(row[im]));
    }
    xr.widen();
    yr.widen();

    Svg svg;
    svg.header();
    svg.axes(xr, yr, "Re " + base, "Im " + base);

    std::map<std::string, std::string> series_colors;
    for (const auto& row : t.rows) {
        const std::string s =
            series >= 0 ? std::get<std::string>(row[series]) : std::string();
        auto it = series_colors.find(s);
        if (it == series_colors.end())
            it = series_colors
                     .emplace(s, series_color(
                                     s, static_cast<int>(series_colors.size())))
                     .first;
        svg.circle(sx(xr, cell_real(row[re])), sy(yr, cell_real(row[im])), 2.2,
                   it->second, s);
    }
    int rank = 0;
    for (const auto& [name, color] : series_colors)
        if (!name.empty()) svg.legend_entry(rank++, name, color);
    svg.save(path);
}

void plot_scan(const ResultTable& t, const std::string& path) {
    const int xcol = required_column(t, meta(t, "plot_x"));
    const auto ynames = split_csv_list(meta(t, "plot_y"));
    if (ynames.empty())
        throw invalid_parameter("plot: scan needs at least one y column");
    std::vector<int> ycols;
    for (const auto& n : ynames) ycols.push_back(required_column(t, n));

    Range xr, yr;
    for (const auto& row : t.rows) {
        xr.include(cell_real(row[xcol]));
        for (int c : ycols) yr.include(cell_real(row[c]));
    }
    xr.widen();
    yr.widen();

    Svg svg;
    svg.header();
    svg.axes(xr, yr, t.names[xcol], ynames.size() == 1 ? ynames[0] : "value");
    for (size_t k = 0; k < ycols.size(); ++k) {
        const std::string color = series_color(ynames[k], static_cast<int>(k));
        for (const auto& row : t.rows) {
            const double y = cell_real(row[ycols[k]]);
            if (!std::isfinite(y)) continue;
            svg.circle(sx(xr, cell_real(row[xcol])), sy(yr, y), 1.6, color,
                       ynames[k]);
        }
        if (ycols.size() > 1)
            svg.legend_entry(static_cast<int>(k), ynames[k], color);
    }
    svg.save(path);
}

void plot_heatmap(const ResultTable& t, const std::string& path) {
    const int xcol = required_column(t, meta(t, "plot_x"));
    const int ycol = required_column(t, meta(t, "plot_y"));
    const int vcol = required_column(t, meta(t, "plot_v"));

    std::set<double> xs, ys;
    for (const auto& row : t.rows) {
        xs.insert(cell_real(row[xcol]));
        ys.insert(cell_real(row[ycol]));
    }
    if (xs.empty())
        throw invalid_parameter("plot: heatmap table has no rows");
    std::vector<double> xg(xs.begin(), xs.end()), yg(ys.begin(), ys.end());
    auto grid_index = [](const std::vector<double>& g, double v) {
        return static_cast<int>(
            std::lower_bound(g.begin(), g.end(), v - 1e-12) - g.begin());
    };

    // Categorical palette when few distinct values, gradient otherwise.
    std::set<double> distinct;
    Range vr;
    for (const auto& row : t.rows) {
        const double v = cell_real(row[vcol]);
        if (std::isfinite(v)) {
            distinct.insert(v);
            vr.include(v);
        }
    }
    vr.widen();
    static const char* categorical[] = {"#a6cee3", "#fdbf6f", "#b2df8a",
                                        "#fb9a99", "#cab2d6", "#1f78b4",
                                        "#ff7f00", "#33a02c", "#e31a1c",
                                        "#6a3d9a"};
    const bool few = distinct.size() <= 10;
    std::map<double, std::string> category_color;
    if (few) {
        int k = 0;
        for (double v : distinct) category_color[v] = categorical[k++];
    }
    auto color_of = [&](double v) -> std::string {
        if (!std::isfinite(v)) return "#dddddd";
        if (few) return category_color[v];
        const double f = std::clamp(vr.frac(v), 0.0, 1.0);
        const int r = static_cast<int>(30 + 200 * f);
        const int b = static_cast<int>(230 - 200 * f);
        char buf[10];
        std::snprintf(buf, sizeof(buf), "#%02x40%02x", r, b);
        return buf;
    };

    Range xr, yr;
    xr.include(xg.front());
    xr.include(xg.back());
    yr.include(yg.front());
    yr.include(yg.back());
    xr.widen();
    yr.widen();

    const double cw = (kRight - kLeft) / static_cast<double>(xg.size());
    const double ch = (kBottom - kTop) / static_cast<double>(yg.size());

    Svg svg;
    svg.header();
    for (const auto& row : t.rows) {
        const int i = grid_index(xg, cell_real(row[xcol]));
        const int j = grid_index(yg, cell_real(row[ycol]));
        svg.rect(kLeft + i * cw, kBottom - (j + 1) * ch, cw + 0.5, ch + 0.5,
                 color_of(cell_real(row[vcol])));
    }
    svg.axes(xr, yr, t.names[xcol], t.names[ycol]);
    if (few) {
        int rank = 0;
        for (const auto& [v, color] : category_color)
            svg.legend_entry(rank++, t.names[vcol] + " = " + fmt(v), color);
    }
    svg.save(path);
}

void plot_profile(const ResultTable& t, const std::string& path) {
    const int xcol = required_column(t, meta(t, "plot_x"));
    const auto ynames = split_csv_list(meta(t, "plot_y"));
    if (ynames.size() != 1)
        throw invalid_parameter("plot: profile needs exactly one y column");
    const int ycol = required_column(t, ynames[0]);

    Range xr, yr;
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : t.rows) {
        const double x = cell_real(row[xcol]);
        const double a = std::abs(cell_real(row[ycol]));
        const double y = std::log10(std::max(a, 1e-18));
        pts.emplace_back(x, y);
        xr.include(x);
        yr.include(y);
    }
    xr.widen();
    yr.widen();

    Svg svg;
    svg.header();
    svg.axes(xr, yr, t.names[xcol], "log10 |" + ynames[0] + "|");
    for (const auto& [x, y] : pts)
        svg.circle(sx(xr, x), sy(yr, y), 2.0, "#1f77b4", "profile");
    svg.save(path);
}

} // namespace

void emit_plot(const ResultTable& table, PlotKind kind,
               const std::string& path) {
    switch (kind) {
    case PlotKind::scatter_complex: plot_scatter_complex(table, path); return;
    case PlotKind::scan: plot_scan(table, path); return;
    case PlotKind::heatmap: plot_heatmap(table, path); return;
    case PlotKind::profile: plot_profile(table, path); return;
    }
    throw invalid_parameter("plot: unknown plot kind");
}

} // namespace qwalk
