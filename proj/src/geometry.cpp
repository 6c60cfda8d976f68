#include "csep/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csep {

namespace {

constexpr double pi = std::numbers::pi;

double hypot2(double dx, double dy) { return std::sqrt(dx * dx + dy * dy); }

double segment_distance(Point a, Point b, Point p) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double wx = p.x - a.x, wy = p.y - a.y;
    const double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return hypot2(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

Point segment_closest(Point a, Point b, Point p) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / vv : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return {a.x + t * vx, a.y + t * vy};
}

bool polygon_contains(const Polygon& poly, Point p) {
    // Even-odd crossing count; points on an edge land on either side
    // depending on rounding, which is acceptable for an open set.
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((v[i].y > p.y) != (v[j].y > p.y)) {
            const double xc =
                v[j].x + (v[i].x - v[j].x) * (p.y - v[j].y) / (v[i].y - v[j].y);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

double polygon_distance(const Polygon& poly, Point p) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    double best = kInf;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        best = std::min(best, segment_distance(v[j], v[i], p));
    return best;
}

// Largest certified radius r such that the open disk B_r(x,y) stays above the
// scaled grim reaper curve and inside |Re| < scale. Bisection on the
// self-consistency condition r <= d / sqrt(1 + L(r)^2), where d is the
// vertical clearance and L(r) = max |h'| over the horizontal window of
// half-width r (h'(t) = tan(pi t / 2) on the unit domain).
double grim_reaper_clearance(double scale, double x, double y) {
    const double ax = std::abs(x);
    const double lateral = scale - ax;
    const double d = y - grim_reaper_height(x, scale);
    if (!(d > 0.0) || !(lateral > 0.0)) return 0.0;

    const auto certified = [&](double r) {
        const double w = std::min(ax + r, scale * (1.0 - 1e-12));
        const double slope = std::tan(pi * w / (2.0 * scale));
        return r <= d / std::sqrt(1.0 + slope * slope);
    };

    double hi = std::min(lateral, d);
    if (certified(hi)) return hi;
    double lo = 0.0;
    for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        (certified(mid) ? lo : hi) = mid;
    }
    return lo;
}

// One-evaluation certified lower bound for the distance to the scaled grim
// reaper curve: boundary points outside the horizontal window [x-u, x+u] are
// at least u away, points inside obey the Lipschitz bound with the slope at
// the window edge.
double grim_reaper_clearance_fast(double scale, double x, double y) {
    const double ax = std::abs(x);
    const double lateral = scale - ax;
    const double d = y - grim_reaper_height(x, scale);
    if (!(d > 0.0) || !(lateral > 0.0)) return 0.0;
    const double u = std::min({0.8 * lateral, 0.35 * scale, d + 0.02 * scale});
    const double slope = std::tan(pi * std::min(ax + u, scale * (1.0 - 1e-12)) /
                                  (2.0 * scale));
    return std::min({u, d / std::sqrt(1.0 + slope * slope), lateral});
}

// Same construction for the parabola graph, whose slope at abscissa t is t.
double parabola_clearance_fast(Point p) {
    const double d = p.y - (p.x * p.x / 2.0 - 0.5);
    if (!(d > 0.0)) return 0.0;
    const double u = std::min(0.5, d + 0.02);
    const double slope = std::abs(p.x) + u;
    return std::min(u, d / std::sqrt(1.0 + slope * slope));
}

// Squared distance from p to the parabola point (t, t^2/2 - 1/2).
double parabola_sq_dist(double t, Point p) {
    const double dx = t - p.x;
    const double dy = t * t / 2.0 - 0.5 - p.y;
    return dx * dx + dy * dy;
}

// Distance from an interior point to the parabola y = x^2/2 - 1/2 by Newton
// iteration on the foot-point equation g(t) = t^3/2 + t(1/2 - y) - x = 0.
// Several seeds cover the multi-root regime above the evolute; a 0.9 safety
// factor absorbs the remaining foot-point tolerance.
double parabola_clearance(Point p) {
    const auto newton = [&](double t) {
        for (int it = 0; it < 60; ++it) {
            const double g = 0.5 * t * t * t + t * (0.5 - p.y) - p.x;
            const double dg = 1.5 * t * t + 0.5 - p.y;
            if (std::abs(dg) < 1e-300) break;
            const double step = g / dg;
            t -= step;
            if (std::abs(step) < 1e-14 * (1.0 + std::abs(t))) break;
        }
        return t;
    };

    const double wing = std::sqrt(std::max(0.0, 2.0 * (p.y + 0.5)));
    double best = parabola_sq_dist(newton(p.x), p);
    best = std::min(best, parabola_sq_dist(newton(wing), p));
    best = std::min(best, parabola_sq_dist(newton(-wing), p));
    return 0.9 * std::sqrt(best);
}

} // namespace

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

double grim_reaper_height(double x, double scale) {
    if (!(scale > 0.0)) throw std::domain_error("grim_reaper_height: scale must be positive");
    if (!(std::abs(x) < scale))
        throw std::domain_error("grim_reaper_height: |x| must be below the domain scale");
    const double u = x / scale;
    return scale * (-(2.0 / pi) * std::log(2.0 * std::cos(pi * u / 2.0)));
}

bool contains(const DomainSpec& spec, Point p) {
    return std::visit(
        [&](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, HalfPlane>) {
                return p.y > 0.0;
            } else if constexpr (std::is_same_v<T, StripRe>) {
                return p.x > d.a && p.x < d.b;
            } else if constexpr (std::is_same_v<T, StripIm>) {
                return p.y > d.c && p.y < d.d;
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                return p.x > d.x0 && p.x < d.x1 && p.y > d.y0 && p.y < d.y1;
            } else if constexpr (std::is_same_v<T, Disk>) {
                return hypot2(p.x - d.center.x, p.y - d.center.y) < d.r;
            } else if constexpr (std::is_same_v<T, GrimReaperU>) {
                return std::abs(p.x) < d.scale && p.y > grim_reaper_height(p.x, d.scale);
            } else if constexpr (std::is_same_v<T, TruncatedU>) {
                return std::abs(p.x) < d.scale && p.y < d.height &&
                       p.y > grim_reaper_height(p.x, d.scale);
            } else if constexpr (std::is_same_v<T, Parabola>) {
                return p.y > p.x * p.x / 2.0 - 0.5;
            } else {
                return polygon_contains(d, p);
            }
        },
        spec);
}

double dist_to_boundary(const DomainSpec& spec, Point p) {
    if (!contains(spec, p)) return 0.0;
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, HalfPlane>) {
                return p.y;
            } else if constexpr (std::is_same_v<T, StripRe>) {
                return std::min(p.x - d.a, d.b - p.x);
            } else if constexpr (std::is_same_v<T, StripIm>) {
                return std::min(p.y - d.c, d.d - p.y);
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                return std::min(std::min(p.x - d.x0, d.x1 - p.x),
                                std::min(p.y - d.y0, d.y1 - p.y));
            } else if constexpr (std::is_same_v<T, Disk>) {
                return d.r - hypot2(p.x - d.center.x, p.y - d.center.y);
            } else if constexpr (std::is_same_v<T, GrimReaperU>) {
                return grim_reaper_clearance(d.scale, p.x, p.y);
            } else if constexpr (std::is_same_v<T, TruncatedU>) {
                return std::min(grim_reaper_clearance(d.scale, p.x, p.y),
                                d.height - p.y);
            } else if constexpr (std::is_same_v<T, Parabola>) {
                return parabola_clearance(p);
            } else {
                return polygon_distance(d, p);
            }
        },
        spec);
}

double dist_to_boundary_fast(const DomainSpec& spec, Point p) {
    if (const auto* u = std::get_if<GrimReaperU>(&spec)) {
        if (!contains(spec, p)) return 0.0;
        return grim_reaper_clearance_fast(u->scale, p.x, p.y);
    }
    if (const auto* t = std::get_if<TruncatedU>(&spec)) {
        if (!contains(spec, p)) return 0.0;
        return std::min(grim_reaper_clearance_fast(t->scale, p.x, p.y),
                        t->height - p.y);
    }
    if (std::get_if<Parabola>(&spec)) {
        if (!contains(spec, p)) return 0.0;
        return parabola_clearance_fast(p);
    }
    return dist_to_boundary(spec, p);
}

Interval re_projection(const DomainSpec& spec) {
    return std::visit(
        [&](const auto& d) -> Interval {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, HalfPlane>) {
                return {-kInf, kInf};
            } else if constexpr (std::is_same_v<T, StripRe>) {
                return {d.a, d.b};
            } else if constexpr (std::is_same_v<T, StripIm>) {
                return {-kInf, kInf};
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                return {d.x0, d.x1};
            } else if constexpr (std::is_same_v<T, Disk>) {
                return {d.center.x - d.r, d.center.x + d.r};
            } else if constexpr (std::is_same_v<T, GrimReaperU>) {
                return {-d.scale, d.scale};
            } else if constexpr (std::is_same_v<T, TruncatedU>) {
                // The lid at Im z = height clips the curve at |x| = x*,
                // where scale*h(x*/scale) = height.
                const double u = (2.0 / pi) * std::acos(
                    0.5 * std::exp(-pi * d.height / (2.0 * d.scale)));
                return {-d.scale * u, d.scale * u};
            } else if constexpr (std::is_same_v<T, Parabola>) {
                return {-kInf, kInf};
            } else {
                double lo = kInf, hi = -kInf;
                for (const auto& v : d.vertices) {
                    lo = std::min(lo, v.x);
                    hi = std::max(hi, v.x);
                }
                return {lo, hi};
            }
        },
        spec);
}

DomainSpec truncate_u(double scale, double height) {
    if (!(scale > 0.0)) throw std::domain_error("truncate_u: scale must be positive");
    if (!(height > grim_reaper_height(0.0, scale)))
        throw std::domain_error("truncate_u: height must exceed the curve minimum");
    return TruncatedU{scale, height};
}

std::optional<Point> nearest_boundary_point(const DomainSpec& spec, Point p) {
    return std::visit(
        [&](const auto& d) -> std::optional<Point> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, HalfPlane>) {
                return Point{p.x, 0.0};
            } else if constexpr (std::is_same_v<T, StripRe>) {
                return Point{(p.x - d.a < d.b - p.x) ? d.a : d.b, p.y};
            } else if constexpr (std::is_same_v<T, StripIm>) {
                return Point{p.x, (p.y - d.c < d.d - p.y) ? d.c : d.d};
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                const double dl = p.x - d.x0, dr = d.x1 - p.x;
                const double db = p.y - d.y0, dt = d.y1 - p.y;
                const double m = std::min(std::min(dl, dr), std::min(db, dt));
                if (m == dl) return Point{d.x0, p.y};
                if (m == dr) return Point{d.x1, p.y};
                if (m == db) return Point{p.x, d.y0};
                return Point{p.x, d.y1};
            } else if constexpr (std::is_same_v<T, Disk>) {
                const double dx = p.x - d.center.x, dy = p.y - d.center.y;
                const double n = hypot2(dx, dy);
                if (n == 0.0) return Point{d.center.x + d.r, d.center.y};
                return Point{d.center.x + d.r * dx / n, d.center.y + d.r * dy / n};
            } else if constexpr (std::is_same_v<T, Polygon>) {
                const auto& v = d.vertices;
                const std::size_t n = v.size();
                double best = kInf;
                Point bp = p;
                for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                    const Point c = segment_closest(v[j], v[i], p);
                    const double dist = hypot2(p.x - c.x, p.y - c.y);
                    if (dist < best) {
                        best = dist;
                        bp = c;
                    }
                }
                return bp;
            } else {
                return std::nullopt;
            }
        },
        spec);
}

std::size_t polygon_nearest_edge(const Polygon& poly, Point p) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    double best = kInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dist = segment_distance(v[i], v[(i + 1) % n], p);
        if (dist < best) {
            best = dist;
            arg = i;
        }
    }
    return arg;
}

double domain_scale(const DomainSpec& spec) {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, HalfPlane>) {
                return 1.0;
            } else if constexpr (std::is_same_v<T, StripRe>) {
                return d.b - d.a;
            } else if constexpr (std::is_same_v<T, StripIm>) {
                return d.d - d.c;
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                return std::min(d.width(), d.height());
            } else if constexpr (std::is_same_v<T, Disk>) {
                return d.r;
            } else if constexpr (std::is_same_v<T, GrimReaperU>) {
                return d.scale;
            } else if constexpr (std::is_same_v<T, TruncatedU>) {
                return d.scale;
            } else if constexpr (std::is_same_v<T, Parabola>) {
                return 1.0;
            } else {
                Interval r = re_projection(DomainSpec{d});
                double lo = kInf, hi = -kInf;
                for (const auto& v : d.vertices) {
                    lo = std::min(lo, v.y);
                    hi = std::max(hi, v.y);
                }
                return std::min(r.width(), hi - lo);
            }
        },
        spec);
}

std::string domain_kind(const DomainSpec& spec) {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, HalfPlane>) return "half_plane";
            else if constexpr (std::is_same_v<T, StripRe>) return "strip_re";
            else if constexpr (std::is_same_v<T, StripIm>) return "strip_im";
            else if constexpr (std::is_same_v<T, Rectangle>) return "rectangle";
            else if constexpr (std::is_same_v<T, Disk>) return "disk";
            else if constexpr (std::is_same_v<T, GrimReaperU>) return "grim_reaper_u";
            else if constexpr (std::is_same_v<T, TruncatedU>) return "truncated_u";
            else if constexpr (std::is_same_v<T, Parabola>) return "parabola";
            else return "polygon";
        },
        spec);
}

} // namespace csep
