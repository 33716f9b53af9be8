#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "format.hpp"

namespace eadam {

PlotMetric metric_from_string(const std::string& name) {
    if (name == "loss") return PlotMetric::Loss;
    if (name == "grad_norm") return PlotMetric::GradNorm;
    if (name == "eff_step_mean") return PlotMetric::EffStepMean;
    throw Error(errc::invalid_argument,
                "unknown metric '" + name + "' (expected loss, grad_norm or eff_step_mean)");
}

const char* metric_name(PlotMetric metric) {
    switch (metric) {
        case PlotMetric::Loss: return "loss";
        case PlotMetric::GradNorm: return "grad_norm";
        case PlotMetric::EffStepMean: return "eff_step_mean";
    }
    return "?";
}

namespace {

double metric_value(const TrajectoryRecord& r, PlotMetric metric) {
    switch (metric) {
        case PlotMetric::Loss: return r.loss;
        case PlotMetric::GradNorm: return r.grad_norm;
        case PlotMetric::EffStepMean: return r.eff_step_mean;
    }
    return 0.0;
}

struct Series {
    std::string label;
    bool diverged = false;
    std::vector<std::pair<double, double>> points;  // (step, value), value already log10'd if log_y
};

constexpr int kWidth = 880;
constexpr int kHeight = 520;
constexpr int kLeft = 76;
constexpr int kRight = 24;
constexpr int kTop = 42;
constexpr int kBottom = 56;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

double map_x(double x, double xmin, double xmax) {
    return kLeft + (x - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight);
}

double map_y(double y, double ymin, double ymax) {
    return kTop + (kHeight - kTop - kBottom) * (1.0 - (y - ymin) / (ymax - ymin));
}

std::string tick_label(double v, bool log_y) {
    if (log_y) return "1e" + format_general(v, 3);
    return format_general(v, 3);
}

}  // namespace

void emit_svg(const std::vector<TrajectoryRecord>& records, PlotMetric metric,
              const std::filesystem::path& path, bool log_y) {
    if (records.empty()) {
        throw Error(errc::invalid_argument, "emit_svg: no records");
    }

    // Group by run_id, ordered.
    std::map<std::string, std::vector<const TrajectoryRecord*>> by_run;
    for (const TrajectoryRecord& r : records) by_run[r.run_id].push_back(&r);

    std::vector<Series> series;
    for (auto& [run_id, rows] : by_run) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const TrajectoryRecord* a, const TrajectoryRecord* b) {
                             return a->step < b->step;
                         });
        Series s;
        s.label = run_id;
        for (const TrajectoryRecord* r : rows) {
            const double v = metric_value(*r, metric);
            if (!std::isfinite(v)) {
                s.diverged = true;
                break;  // truncate at first non-finite value
            }
            if (log_y) {
                if (v <= 0.0) continue;
                s.points.emplace_back(static_cast<double>(r->step), std::log10(v));
            } else {
                s.points.emplace_back(static_cast<double>(r->step), v);
            }
        }
        series.push_back(std::move(s));
    }

    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    bool any = false;
    for (const Series& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    }
    if (!any) {
        // All points filtered (e.g. log scale over non-positive data); keep a
        // valid viewport so the document still renders.
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        const double pad = ymax != 0.0 ? 0.1 * std::abs(ymax) : 1.0;
        ymin -= pad;
        ymax += pad;
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(errc::io, "cannot open " + path.string() + " for writing");
    }

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    out << "<style>.axis{stroke:#000;stroke-width:1;} .grid{stroke:#ddd;stroke-width:1;} "
           ".label{font-family:sans-serif;font-size:12px;fill:#000;} "
           ".title{font-family:sans-serif;font-size:14px;font-weight:bold;fill:#000;}</style>\n";
    out << "<text class=\"title\" x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\">"
        << metric_name(metric) << (log_y ? " (log scale)" : "") << " vs step</text>\n";

    const int x_ticks = 5;
    for (int i = 0; i <= x_ticks; ++i) {
        const double tx = xmin + (xmax - xmin) * i / x_ticks;
        const double px = map_x(tx, xmin, xmax);
        out << "<line class=\"grid\" x1=\"" << format_fixed(px, 2) << "\" y1=\"" << kTop
            << "\" x2=\"" << format_fixed(px, 2) << "\" y2=\"" << kHeight - kBottom << "\"/>\n";
        out << "<text class=\"label\" x=\"" << format_fixed(px, 2) << "\" y=\""
            << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">" << format_general(tx, 4)
            << "</text>\n";
    }
    const int y_ticks = 5;
    for (int i = 0; i <= y_ticks; ++i) {
        const double ty = ymin + (ymax - ymin) * i / y_ticks;
        const double py = map_y(ty, ymin, ymax);
        out << "<line class=\"grid\" x1=\"" << kLeft << "\" y1=\"" << format_fixed(py, 2)
            << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << format_fixed(py, 2) << "\"/>\n";
        out << "<text class=\"label\" x=\"" << kLeft - 8 << "\" y=\"" << format_fixed(py + 4, 2)
            << "\" text-anchor=\"end\">" << tick_label(ty, log_y) << "</text>\n";
    }
    out << "<line class=\"axis\" x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << kHeight - kBottom << "\"/>\n";
    out << "<line class=\"axis\" x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
        << "\" y2=\"" << kHeight - kBottom << "\"/>\n";
    out << "<text class=\"label\" x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\">step</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        if (s.points.empty()) continue;
        const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points) {
            out << format_fixed(map_x(x, xmin, xmax), 2) << ','
                << format_fixed(map_y(y, ymin, ymax), 2) << ' ';
        }
        out << "\"/>\n";
    }

    // Legend, top-right inside the plot area.
    const int lx = kWidth - kRight - 220;
    int ly = kTop + 14;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 20 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>\n";
        out << "<text class=\"label\" x=\"" << lx + 26 << "\" y=\"" << ly + 4 << "\">" << s.label
            << (s.diverged ? " (diverged)" : "") << "</text>\n";
        ly += 16;
    }

    out << "</svg>\n";
    if (!out.flush()) {
        throw Error(errc::io, "write failure on " + path.string());
    }
}

}  // namespace eadam
