#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "report.hpp"
#include "steady_state.hpp"

namespace steadycredit::svg {

enum class Exhibit { TimeSeries, Scatter };

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s(buf);
    return s == "-0.00" ? "0.00" : s;
}

inline std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", std::fabs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

inline std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
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

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // Pads by 5% and widens degenerate ranges.
    Range padded() const {
        Range r = *this;
        if (!(r.lo <= r.hi)) return {0.0, 1.0};
        double span = r.hi - r.lo;
        if (span <= 0.0) span = std::max(std::fabs(r.hi), 1e-6);
        r.lo -= 0.05 * span;
        r.hi += 0.05 * span;
        return r;
    }
};

/// Plot area mapping data coordinates onto a fixed canvas.
class Canvas {
public:
    static constexpr double kWidth = 720.0, kHeight = 480.0;
    static constexpr double kLeft = 80.0, kRight = 30.0, kTop = 50.0, kBottom = 60.0;

    Canvas(Range x, Range y) : x_(x.padded()), y_(y.padded()) {}

    double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom); }

    std::string open(std::string_view title) const {
        std::string s;
        s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(kWidth) + "\" height=\"" +
             fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
        s += "<style>.axis{stroke:#000;stroke-width:1}.ssf{fill:none;stroke:#000;stroke-width:2}"
             ".rising{stroke:#1f4fd1;stroke-width:1.5}.falling{stroke:#d1251f;stroke-width:1.5}"
             ".in{fill:#333;stroke:#333}.out{fill:none;stroke:#777}"
             ".f{fill:none;stroke:#1f4fd1;stroke-width:1.5}.d{fill:none;stroke:#d1251f;stroke-width:1.5}"
             ".fexp{fill:none;stroke:#000;stroke-width:1.5;stroke-dasharray:4 3}"
             "text{font-family:sans-serif;font-size:12px}</style>\n";
        s += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) + "\" fill=\"#fff\"/>\n";
        s += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"25.00\" text-anchor=\"middle\">" + escape(title) + "</text>\n";
        return s;
    }

    std::string axes(std::string_view xlabel, std::string_view ylabel) const {
        const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
        std::string s;
        s += "<line class=\"axis\" x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) + "\" y2=\"" +
             fmt(y0) + "\"/>\n";
        s += "<line class=\"axis\" x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x0) + "\" y2=\"" +
             fmt(y1) + "\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            double xv = x_.lo + (x_.hi - x_.lo) * i / 4.0;
            double yv = y_.lo + (y_.hi - y_.lo) * i / 4.0;
            s += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(y0 + 18) + "\" text-anchor=\"middle\">" +
                 fmt_tick(xv) + "</text>\n";
            s += "<text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(py(yv) + 4) + "\" text-anchor=\"end\">" +
                 fmt_tick(yv) + "</text>\n";
        }
        s += "<text x=\"" + fmt((x0 + x1) / 2) + "\" y=\"" + fmt(kHeight - 15) + "\" text-anchor=\"middle\">" +
             escape(xlabel) + "</text>\n";
        s += "<text x=\"15.00\" y=\"" + fmt((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 15.00 " +
             fmt((y0 + y1) / 2) + ")\">" + escape(ylabel) + "</text>\n";
        return s;
    }

    std::string polyline(std::string_view cls, std::span<const double> xs, std::span<const double> ys) const {
        std::string s = "<polyline class=\"" + std::string(cls) + "\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ' ';
            s += fmt(px(xs[i])) + "," + fmt(py(ys[i]));
        }
        return s + "\"/>\n";
    }

private:
    Range x_, y_;
};

}  // namespace detail

/// Scatter of (d, f): analysis window as filled circles, the rest of the series
/// hollow, the steady-state curve f = (d + zeta)/(1 - d) as a solid line, and
/// consecutive window points joined by rising / falling segments.
inline std::string render_scatter(const AnalysisReport& rep) {
    const double zeta = rep.ssp_ls ? rep.ssp_ls->zeta : 0.0;
    detail::Range xr, yr;
    for (const auto& p : rep.rates.points) {
        xr.add(p.d);
        yr.add(p.f);
    }
    for (const auto& p : rep.context) {
        xr.add(p.d);
        yr.add(p.f);
    }
    auto xpad = xr.padded();
    constexpr int kCurve = 64;
    std::vector<double> cx, cy;
    for (int i = 0; i <= kCurve; ++i) {
        double dv = std::clamp(xpad.lo + (xpad.hi - xpad.lo) * i / kCurve, 0.0, 0.999);
        cx.push_back(dv);
        cy.push_back(steady_state::expected_growth(dv, zeta));
    }
    detail::Canvas c(xr, yr);
    std::string s = c.open("Credit growth rate vs default rate (zeta = " + detail::fmt_tick(zeta) + ")");
    s += c.axes("default rate d", "credit growth rate f");
    // Keep the curve inside the plot's y range.
    detail::Range ypad = yr.padded();
    std::vector<double> kx, ky;
    for (std::size_t i = 0; i < cx.size(); ++i)
        if (cy[i] >= ypad.lo && cy[i] <= ypad.hi) {
            kx.push_back(cx[i]);
            ky.push_back(cy[i]);
        }
    if (kx.size() >= 2) s += c.polyline("ssf", kx, ky);
    for (std::size_t k = 1; k < rep.rates.size(); ++k) {
        const auto& a = rep.rates[k - 1];
        const auto& b = rep.rates[k];
        if (b.f == a.f) continue;
        s += "<line class=\"" + std::string(b.f > a.f ? "rising" : "falling") + "\" x1=\"" + detail::fmt(c.px(a.d)) +
             "\" y1=\"" + detail::fmt(c.py(a.f)) + "\" x2=\"" + detail::fmt(c.px(b.d)) + "\" y2=\"" +
             detail::fmt(c.py(b.f)) + "\"/>\n";
    }
    for (const auto& p : rep.context)
        s += "<circle class=\"out\" cx=\"" + detail::fmt(c.px(p.d)) + "\" cy=\"" + detail::fmt(c.py(p.f)) +
             "\" r=\"4.00\"/>\n";
    for (const auto& p : rep.rates.points)
        s += "<circle class=\"in\" cx=\"" + detail::fmt(c.px(p.d)) + "\" cy=\"" + detail::fmt(c.py(p.f)) +
             "\" r=\"4.00\"><title>" + p.interval_end.str() + "</title></circle>\n";
    s += "</svg>\n";
    return s;
}

/// Time-series panel of observed f, d and expected f over the window.
inline std::string render_time_series(const AnalysisReport& rep) {
    const double zeta = rep.ssp_ls ? rep.ssp_ls->zeta : 0.0;
    std::vector<double> t, f, d, fe;
    detail::Range xr, yr;
    for (std::size_t k = 0; k < rep.rates.size(); ++k) {
        const auto& p = rep.rates[k];
        t.push_back(static_cast<double>(k));
        f.push_back(p.f);
        d.push_back(p.d);
        fe.push_back(steady_state::expected_growth(p.d, zeta));
        xr.add(static_cast<double>(k));
        yr.add(p.f);
        yr.add(p.d);
        yr.add(fe.back());
    }
    detail::Canvas c(xr, yr);
    std::string s = c.open("Observed and expected credit growth, " + rep.rates.first.str() + " to " +
                           rep.rates.last.str());
    s += c.axes("interval (quarters from " + rep.rates.first.str() + ")", "rate");
    s += c.polyline("d", t, d);
    s += c.polyline("fexp", t, fe);
    s += c.polyline("f", t, f);
    s += "</svg>\n";
    return s;
}

inline std::string render_svg(const AnalysisReport& rep, Exhibit kind) {
    return kind == Exhibit::Scatter ? render_scatter(rep) : render_time_series(rep);
}

}  // namespace steadycredit::svg
