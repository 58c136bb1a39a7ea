#include "svg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace tsxfer::svg {

namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 80, kRight = 180, kTop = 50, kBottom = 70;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string escape(const std::string& text) {
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

std::string num(double v) { return fmt::format("{:.2f}", v); }

struct Range {
    double lo = 0.0, hi = 1.0;

    void pad() {
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double m = 0.05 * (hi - lo);
        lo -= m;
        hi += m;
    }
};

Range range_of(const std::vector<double>& v) {
    Range r;
    if (v.empty()) return r;
    r.lo = *std::min_element(v.begin(), v.end());
    r.hi = *std::max_element(v.begin(), v.end());
    r.pad();
    return r;
}

struct Frame {
    Range x, y;

    double px(double v) const { return kLeft + (v - x.lo) / (x.hi - x.lo) * (kWidth - kLeft - kRight); }
    double py(double v) const { return kHeight - kBottom - (v - y.lo) / (y.hi - y.lo) * (kHeight - kTop - kBottom); }
};

std::string open(const std::string& title) {
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n"
        "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n"
        "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n",
        escape(title));
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    std::string out;
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                       num(x0), num(y1), num(x1 - x0), num(y0 - y1));
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x.lo + (f.x.hi - f.x.lo) * i / 4.0;
        const double yv = f.y.lo + (f.y.hi - f.y.lo) * i / 4.0;
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                           "font-size=\"11\">{:.3g}</text>\n",
                           num(f.px(xv)), num(y0 + 16), xv);
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" "
                           "font-size=\"11\">{:.3g}</text>\n",
                           num(x0 - 6), num(f.py(yv) + 4), yv);
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                       "font-size=\"13\">{}</text>\n",
                       num((x0 + x1) / 2), num(kHeight - 25), escape(xlabel));
    out += fmt::format("<text x=\"20\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
                       "transform=\"rotate(-90 20 {})\">{}</text>\n",
                       num((y0 + y1) / 2), num((y0 + y1) / 2), escape(ylabel));
    return out;
}

std::string legend(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double y = kTop + 10 + 20.0 * static_cast<double>(i);
        out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"{}\"/>\n", num(kWidth - kRight + 20), num(y),
                           color(i));
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
                           num(kWidth - kRight + 32), num(y + 4), escape(names[i]));
    }
    return out;
}

}  // namespace

std::string pca_scatter(const PcaResult& pca, const std::string& title) {
    std::vector<std::string> names;
    std::vector<double> xs, ys;
    for (const auto& p : pca.projections) {
        if (std::find(names.begin(), names.end(), p.dataset) == names.end()) names.push_back(p.dataset);
        xs.push_back(p.pc1);
        ys.push_back(p.pc2);
    }
    const Frame f{range_of(xs), range_of(ys)};
    std::string out = open(title);
    out += axes(f, fmt::format("PC1 ({:.1f}%)", 100 * pca.explained_variance_ratio[0]),
                fmt::format("PC2 ({:.1f}%)", 100 * pca.explained_variance_ratio[1]));
    for (const auto& p : pca.projections) {
        const auto idx = static_cast<std::size_t>(std::find(names.begin(), names.end(), p.dataset) - names.begin());
        out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.7\"/>\n", num(f.px(p.pc1)),
                           num(f.py(p.pc2)), color(idx));
    }
    out += legend(names);
    out += "</svg>\n";
    return out;
}

std::string relation_plot(const std::vector<const RelationFit*>& fits, const std::string& title) {
    std::vector<double> xs, ys;
    std::vector<std::string> names;
    for (const auto* fit : fits) {
        names.push_back(fit->target);
        xs.insert(xs.end(), fit->x.begin(), fit->x.end());
        ys.insert(ys.end(), fit->y.begin(), fit->y.end());
    }
    const Frame f{range_of(xs), range_of(ys)};
    std::string out = open(title);
    if (!fits.empty())
        out += axes(f, std::string(characteristic_name(fits.front()->characteristic)),
                    std::string(metric_kind_name(fits.front()->metric)));
    for (std::size_t t = 0; t < fits.size(); ++t) {
        const auto& fit = *fits[t];
        for (std::size_t i = 0; i < fit.x.size(); ++i)
            out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\"><title>{}</title></circle>\n",
                               num(f.px(fit.x[i])), num(f.py(fit.y[i])), color(t), escape(fit.sources[i]));
        const double lo = *std::min_element(fit.x.begin(), fit.x.end());
        const double hi = *std::max_element(fit.x.begin(), fit.x.end());
        out += fmt::format("<polyline points=\"{},{} {},{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           num(f.px(lo)), num(f.py(fit.intercept + fit.slope * lo)), num(f.px(hi)),
                           num(f.py(fit.intercept + fit.slope * hi)), color(t));
    }
    out += legend(names);
    out += "</svg>\n";
    return out;
}

}  // namespace tsxfer::svg
