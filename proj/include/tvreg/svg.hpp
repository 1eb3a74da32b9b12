#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "tvreg/error.hpp"

namespace tvreg {

// Small static SVG emitter for the report plots: line charts with optional
// overlays, and stem charts for autocorrelations with confidence bands.
// Output is plain deterministic XML with no external dependencies.
class SvgChart {
public:
    SvgChart(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_line(const std::string& name, const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& color, double width = 1.5, bool dashed = false) {
        if (x.size() != y.size()) throw InvalidParamsError("series x/y length mismatch");
        series_.push_back({name, x, y, color, width, dashed, false});
    }

    void add_stems(const std::string& name, const std::vector<double>& x, const std::vector<double>& y,
                   const std::string& color) {
        if (x.size() != y.size()) throw InvalidParamsError("series x/y length mismatch");
        series_.push_back({name, x, y, color, 1.5, false, true});
    }

    // Horizontal reference lines (e.g. +/- Bartlett band).
    void add_hline(double y, const std::string& color, bool dashed = true) {
        hlines_.push_back({y, color, dashed});
    }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write " + path);
        out << render();
        if (!out) throw DataError("failed writing " + path);
    }

    std::string render() const {
        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
        double ymin = xmin, ymax = -xmin;
        for (const Series& s : series_) {
            for (const double v : s.x) {
                xmin = std::min(xmin, v);
                xmax = std::max(xmax, v);
            }
            for (const double v : s.y) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        }
        for (const HLine& l : hlines_) {
            ymin = std::min(ymin, l.y);
            ymax = std::max(ymax, l.y);
        }
        if (!(xmin < xmax)) {
            xmin -= 0.5;
            xmax += 0.5;
        }
        if (!(ymin < ymax)) {
            ymin -= 0.5;
            ymax += 0.5;
        }
        const double ypad = 0.05 * (ymax - ymin);
        ymin -= ypad;
        ymax += ypad;

        const double W = 840, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
        auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
        auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

        std::string svg;
        svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"840\" height=\"480\" "
               "viewBox=\"0 0 840 480\">\n";
        svg += "<rect x=\"0\" y=\"0\" width=\"840\" height=\"480\" fill=\"white\"/>\n";
        svg += "<text x=\"420\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"16\">" +
               escape(title_) + "</text>\n";

        // axes
        svg += frame_line(ml, H - mb, W - mr, H - mb);
        svg += frame_line(ml, mt, ml, H - mb);
        svg += tick_label(px(xmin), H - mb + 18, num(xmin), "middle");
        svg += tick_label(px(xmax), H - mb + 18, num(xmax), "middle");
        svg += tick_label(ml - 8, py(ymin) + 4, num(ymin), "end");
        svg += tick_label(ml - 8, py(ymax) + 4, num(ymax), "end");
        svg += tick_label(0.5 * (ml + W - mr), H - 12, escape(x_label_), "middle");
        svg += "<text x=\"16\" y=\"" + num(0.5 * (mt + H - mb)) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
               "transform=\"rotate(-90 16 " +
               num(0.5 * (mt + H - mb)) + ")\">" + escape(y_label_) + "</text>\n";

        for (const HLine& l : hlines_) {
            svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(py(l.y)) + "\" x2=\"" + num(W - mr) +
                   "\" y2=\"" + num(py(l.y)) + "\" stroke=\"" + l.color + "\" stroke-width=\"1\"" +
                   (l.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
        }

        const double y0 = py(std::clamp(0.0, ymin, ymax));
        for (const Series& s : series_) {
            if (s.stems) {
                svg += "<g class=\"series-" + escape(s.name) + "\" stroke=\"" + s.color +
                       "\" stroke-width=\"2\">\n";
                for (size_t i = 0; i < s.x.size(); ++i) {
                    svg += "  <line x1=\"" + num(px(s.x[i])) + "\" y1=\"" + num(y0) + "\" x2=\"" +
                           num(px(s.x[i])) + "\" y2=\"" + num(py(s.y[i])) + "\"/>\n";
                }
                svg += "</g>\n";
            } else {
                svg += "<polyline class=\"series-" + escape(s.name) + "\" fill=\"none\" stroke=\"" +
                       s.color + "\" stroke-width=\"" + num(s.width) + "\"" +
                       (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + " points=\"";
                for (size_t i = 0; i < s.x.size(); ++i) {
                    if (i) svg += ' ';
                    svg += num(px(s.x[i])) + "," + num(py(s.y[i]));
                }
                svg += "\"/>\n";
            }
        }
        svg += "</svg>\n";
        return svg;
    }

private:
    struct Series {
        std::string name;
        std::vector<double> x, y;
        std::string color;
        double width;
        bool dashed;
        bool stems;
    };
    struct HLine {
        double y;
        std::string color;
        bool dashed;
    };

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return buf;
    }
    static std::string escape(const std::string& s) {
        std::string out;
        for (const char c : s) {
            if (c == '&') out += "&amp;";
            else if (c == '<') out += "&lt;";
            else if (c == '>') out += "&gt;";
            else if (c == '"') out += "&quot;";
            else out += c;
        }
        return out;
    }
    static std::string frame_line(double x1, double y1, double x2, double y2) {
        return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
               num(y2) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    static std::string tick_label(double x, double y, const std::string& text, const std::string& anchor) {
        return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + text + "</text>\n";
    }

    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
    std::vector<HLine> hlines_;
};

}  // namespace tvreg
