#include "gibbs/cli/plot.hpp"

#include "gibbs/errors.hpp"
#include "gibbs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace gibbs::cli {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 170, kTop = 30, kBottom = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string esc(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const std::vector<ResultRow>& rows) {
    if (rows.empty()) throw SchemaMismatch("no result rows to plot");

    // Series in order of first appearance.
    std::vector<std::string> order;
    std::map<std::string, std::vector<Sample>> series;
    for (const auto& r : rows) {
        if (!series.count(r.quantity)) order.push_back(r.quantity);
        auto& s = series[r.quantity];
        if (!r.floor_flag && r.value > 0.0 && std::isfinite(r.value)) s.emplace_back(r.b_size, r.value);
    }

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& r : rows) {
        xmin = std::min<double>(xmin, r.b_size);
        xmax = std::max<double>(xmax, r.b_size);
    }
    for (auto& [q, s] : series) {
        std::sort(s.begin(), s.end());
        for (const auto& [l, v] : s) {
            ymin = std::min(ymin, std::log10(v));
            ymax = std::max(ymax, std::log10(v));
        }
    }
    const bool have_points = std::isfinite(ymin);
    if (!have_points) {
        ymin = -12;
        ymax = 0;
    }
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax <= ymin) ymax = ymin + 1;
    if (xmax <= xmin) {
        xmin -= 1;
        xmax += 1;
    }

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double log_y) { return kTop + (ymax - log_y) / (ymax - ymin) * ph; };

    std::ostringstream svg;
    svg.precision(6);
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes, decades and integer ticks.
    svg << "<g stroke=\"#ccc\" stroke-width=\"0.5\">\n";
    for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); ++e) {
        svg << "<line x1=\"" << kLeft << "\" y1=\"" << py(e) << "\" x2=\"" << kLeft + pw << "\" y2=\"" << py(e)
            << "\"/>\n";
    }
    svg << "</g>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int ystep = std::max(1, static_cast<int>((ymax - ymin) / 10));
    for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); e += ystep) {
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    const int xstep = std::max(1, static_cast<int>((xmax - xmin) / 12));
    for (int x = static_cast<int>(std::ceil(xmin)); x <= static_cast<int>(xmax); x += xstep) {
        svg << "<text x=\"" << px(x) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << x << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">|B|</text>\n";
    svg << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">value</text>\n";

    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& name = order[i];
        const auto& s = series[name];
        const char* color = kPalette[i % std::size(kPalette)];
        svg << "<g class=\"series\" data-quantity=\"" << esc(name) << "\">\n";
        if (s.size() >= 2) {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [l, v] : s) svg << px(l) << ',' << py(std::log10(v)) << ' ';
            svg << "\"/>\n";
        }
        for (const auto& [l, v] : s) {
            svg << "<circle cx=\"" << px(l) << "\" cy=\"" << py(std::log10(v)) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
        }
        try {
            const FitResult fit = fit_exponential(s);
            const double x0 = s.front().first, x1 = s.back().first;
            auto fy = [&](double x) {
                return std::clamp((fit.intercept + fit.rate * x) / std::log(10.0), ymin, ymax);
            };
            svg << "<line class=\"fit\" x1=\"" << px(x0) << "\" y1=\"" << py(fy(x0)) << "\" x2=\"" << px(x1)
                << "\" y2=\"" << py(fy(x1)) << "\" stroke=\"" << color << "\" stroke-dasharray=\"5,4\"/>\n";
        } catch (const TooFewSamples&) {
        }
        const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
        svg << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw + 32 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kLeft + pw + 38 << "\" y=\"" << ly + 4 << "\">" << esc(name) << "</text>\n";
        svg << "</g>\n";
    }
    if (!have_points) {
        svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kTop + ph / 2
            << "\" text-anchor=\"middle\" fill=\"#888\">all values at or below the numerical floor</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace gibbs::cli
