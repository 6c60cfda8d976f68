#include "csep/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace csep {
namespace svg {

namespace {

constexpr double kW = 820.0, kH = 560.0;
constexpr double kMarginL = 70.0, kMarginR = 25.0, kMarginT = 25.0, kMarginB = 55.0;

struct Mapper {
    double x0, x1, y0, y1;
    double px(double x) const {
        return kMarginL + (x - x0) / (x1 - x0) * (kW - kMarginL - kMarginR);
    }
    double py(double y) const {
        return kH - kMarginB - (y - y0) / (y1 - y0) * (kH - kMarginT - kMarginB);
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void open_svg(std::ostringstream& os) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
       << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes(std::ostringstream& os, const Mapper& m, const std::string& x_label,
          const std::string& y_label) {
    os << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">\n"
       << "<path d=\"M" << m.px(m.x0) << " " << m.py(m.y0) << " L" << m.px(m.x1) << " "
       << m.py(m.y0) << "\"/>\n"
       << "<path d=\"M" << m.px(m.x0) << " " << m.py(m.y0) << " L" << m.px(m.x0) << " "
       << m.py(m.y1) << "\"/>\n</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = m.x0 + (m.x1 - m.x0) * k / 5.0;
        const double yv = m.y0 + (m.y1 - m.y0) * k / 5.0;
        os << "<text x=\"" << m.px(xv) << "\" y=\"" << kH - kMarginB + 18
           << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
        os << "<text x=\"" << kMarginL - 8 << "\" y=\"" << m.py(yv) + 4
           << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    os << "<text x=\"" << (kMarginL + kW - kMarginR) / 2 << "\" y=\"" << kH - 12
       << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << (kMarginT + kH - kMarginB) / 2
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << (kMarginT + kH - kMarginB) / 2 << ")\">" << y_label << "</text>\n</g>\n";
}

} // namespace

std::string line_chart(const std::vector<Series>& series, const std::string& x_label,
                       const std::string& y_label, bool log_y) {
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
    std::vector<Series> plotted = series;
    for (auto& s : plotted) {
        if (log_y)
            for (auto& v : s.y) v = v > 0.0 ? std::log10(v) : std::nan("");
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.y[k])) continue;
            x0 = std::min(x0, s.x[k]);
            x1 = std::max(x1, s.x[k]);
            y0 = std::min(y0, s.y[k]);
            y1 = std::max(y1, s.y[k]);
        }
    }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    const Mapper m{x0, x1, y0, y1};

    std::ostringstream os;
    open_svg(os);
    axes(os, m, x_label, log_y ? "log10 " + y_label : y_label);
    for (const auto& s : plotted) {
        os << "<path fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" d=\"";
        bool pen_up = true;
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.y[k])) {
                pen_up = true;
                continue;
            }
            os << (pen_up ? 'M' : 'L') << fmt(m.px(s.x[k])) << ' ' << fmt(m.py(s.y[k]));
            pen_up = false;
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string domain_sketch(const DomainSpec& spec) {
    std::vector<Series> curves;
    const auto polyline = [&](std::vector<double> xs, std::vector<double> ys) {
        curves.push_back({std::move(xs), std::move(ys), "#b22222"});
    };
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, HalfPlane>) {
                polyline({-3, 3}, {0, 0});
            } else if constexpr (std::is_same_v<T, StripRe>) {
                polyline({d.a, d.a}, {-3, 3});
                polyline({d.b, d.b}, {-3, 3});
            } else if constexpr (std::is_same_v<T, StripIm>) {
                polyline({-3, 3}, {d.c, d.c});
                polyline({-3, 3}, {d.d, d.d});
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                polyline({d.x0, d.x1, d.x1, d.x0, d.x0}, {d.y0, d.y0, d.y1, d.y1, d.y0});
            } else if constexpr (std::is_same_v<T, Disk>) {
                std::vector<double> xs, ys;
                for (int k = 0; k <= 256; ++k) {
                    const double a = 2.0 * 3.14159265358979323846 * k / 256;
                    xs.push_back(d.center.x + d.r * std::cos(a));
                    ys.push_back(d.center.y + d.r * std::sin(a));
                }
                polyline(std::move(xs), std::move(ys));
            } else if constexpr (std::is_same_v<T, GrimReaperU> ||
                                 std::is_same_v<T, TruncatedU>) {
                double scale, top;
                if constexpr (std::is_same_v<T, TruncatedU>) {
                    scale = d.scale;
                    top = d.height;
                } else {
                    scale = d.scale;
                    top = 4.0 * d.scale;
                }
                std::vector<double> xs, ys;
                for (int k = 1; k < 512; ++k) {
                    const double x = -scale + 2.0 * scale * k / 512;
                    const double y = grim_reaper_height(x, scale);
                    if (y > top) continue;
                    xs.push_back(x);
                    ys.push_back(y);
                }
                polyline(std::move(xs), std::move(ys));
                if constexpr (std::is_same_v<T, TruncatedU>)
                    polyline({-scale, scale}, {top, top});
            } else if constexpr (std::is_same_v<T, Parabola>) {
                std::vector<double> xs, ys;
                for (int k = 0; k <= 256; ++k) {
                    const double x = -3.0 + 6.0 * k / 256;
                    xs.push_back(x);
                    ys.push_back(x * x / 2.0 - 0.5);
                }
                polyline(std::move(xs), std::move(ys));
            } else {
                std::vector<double> xs, ys;
                for (const auto& v : d.vertices) {
                    xs.push_back(v.x);
                    ys.push_back(v.y);
                }
                if (!xs.empty()) {
                    xs.push_back(xs.front());
                    ys.push_back(ys.front());
                }
                polyline(std::move(xs), std::move(ys));
            }
        },
        spec);
    return line_chart(curves, "Re", "Im", false);
}

std::string heat_map(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& v, double dx) {
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf, v1 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        x0 = std::min(x0, x[k]);
        x1 = std::max(x1, x[k]);
        y0 = std::min(y0, y[k]);
        y1 = std::max(y1, y[k]);
        v1 = std::max(v1, std::abs(v[k]));
    }
    if (v1 == 0.0) v1 = 1.0;
    const Mapper m{x0 - dx, x1 + dx, y0 - dx, y1 + dx};
    const double cell = std::max(1.0, m.px(x0 + dx) - m.px(x0));

    std::ostringstream os;
    open_svg(os);
    axes(os, m, "Re", "Im");
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double t = std::abs(v[k]) / v1;
        // Two-segment blue->yellow->red ramp.
        int r, g, b;
        if (t < 0.5) {
            r = static_cast<int>(30 + 2 * t * 225);
            g = static_cast<int>(60 + 2 * t * 180);
            b = static_cast<int>(150 - 2 * t * 100);
        } else {
            r = 255;
            g = static_cast<int>(240 - 2 * (t - 0.5) * 200);
            b = static_cast<int>(50 - 2 * (t - 0.5) * 40);
        }
        os << "<rect x=\"" << fmt(m.px(x[k]) - cell / 2) << "\" y=\""
           << fmt(m.py(y[k]) - cell / 2) << "\" width=\"" << fmt(cell) << "\" height=\""
           << fmt(cell) << "\" fill=\"rgb(" << r << "," << g << "," << b << ")\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace svg
} // namespace csep
