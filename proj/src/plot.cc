#include "blockperm/plot.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace blockperm {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 50.0;

std::string num(double v) {
    return fmt::format("{:.2f}", v);
}

}  // namespace

std::string render_fitness_svg(const std::vector<TraceRecord> &records, size_t max_points) {
    double plot_w = kWidth - kLeft - kRight;
    double plot_h = kHeight - kTop - kBottom;

    size_t last_iter = 0;
    double lo = 1.0, hi = 0.0;
    for (const auto &rec : records) {
        last_iter = std::max(last_iter, rec.iter);
        lo = std::min({lo, rec.candidate_fitness, rec.best_fitness});
        hi = std::max({hi, rec.candidate_fitness, rec.best_fitness});
    }
    if (records.empty() || hi <= lo) {
        lo = records.empty() ? 0.0 : lo - 0.05;
        hi = records.empty() ? 1.0 : hi + 0.05;
    }
    double span_iter = std::max<double>(1.0, static_cast<double>(last_iter));
    auto x_of = [&](size_t iter) { return kLeft + plot_w * static_cast<double>(iter) / span_iter; };
    auto y_of = [&](double f) { return kTop + plot_h * (1.0 - (f - lo) / (hi - lo)); };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        kWidth, kHeight);

    // Axes and ticks.
    svg += fmt::format("<g stroke=\"black\" stroke-width=\"1\">\n<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>\n"
                       "<line x1=\"{0}\" y1=\"{2}\" x2=\"{3}\" y2=\"{2}\"/>\n</g>\n",
                       num(kLeft), num(kTop), num(kTop + plot_h), num(kLeft + plot_w));
    svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    for (int t = 0; t <= 4; t++) {
        double f = lo + (hi - lo) * t / 4.0;
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.4f}</text>\n", num(kLeft - 6),
                           num(y_of(f) + 4), f);
        size_t it = static_cast<size_t>(std::llround(span_iter * t / 4.0));
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(x_of(it)),
                           num(kTop + plot_h + 16), it);
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">iteration</text>\n", num(kLeft + plot_w / 2),
                       num(kHeight - 10));
    svg += fmt::format("<text x=\"14\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">fitness</text>\n",
                       num(kTop + plot_h / 2), num(kTop + plot_h / 2));
    svg += "</g>\n";

    if (!records.empty()) {
        size_t stride = std::max<size_t>(1, (records.size() + max_points - 1) / std::max<size_t>(1, max_points));
        svg += "<g fill=\"#9ab\" fill-opacity=\"0.6\">\n";
        for (size_t i = 0; i < records.size(); i += stride) {
            svg += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"1.5\"/>\n", num(x_of(records[i].iter)),
                               num(y_of(records[i].candidate_fitness)));
        }
        svg += "</g>\n";

        // Best fitness only changes at accepted records, so a step line through
        // those points plus the endpoints is exact.
        std::string path = fmt::format("M{},{}", num(x_of(records.front().iter)), num(y_of(records.front().best_fitness)));
        double current = records.front().best_fitness;
        for (const auto &rec : records) {
            if (rec.best_fitness != current) {
                path += fmt::format(" H{} V{}", num(x_of(rec.iter)), num(y_of(rec.best_fitness)));
                current = rec.best_fitness;
            }
        }
        path += fmt::format(" H{}", num(x_of(records.back().iter)));
        svg += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"#c22\" stroke-width=\"2\"/>\n", path);
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_heatmap_svg(const AdjacencyMatrix &matrix, double cell_px) {
    size_t n = matrix.size();
    double side = cell_px * static_cast<double>(n);
    double max_entry = 0.0;
    for (double v : matrix.entries()) {
        max_entry = std::max(max_entry, v);
    }
    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\" "
        "shape-rendering=\"crispEdges\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        num(side));
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            double v = matrix(r, c);
            if (v == 0.0) {
                continue;
            }
            int level = static_cast<int>(std::lround(255.0 * (1.0 - v / max_entry)));
            svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"rgb({},{},{})\"/>\n",
                               num(cell_px * c), num(cell_px * r), num(cell_px), num(cell_px), level, level, level);
        }
    }
    svg += fmt::format("<rect width=\"{0}\" height=\"{0}\" fill=\"none\" stroke=\"#888\"/>\n</svg>\n", num(side));
    return svg;
}

}  // namespace blockperm
