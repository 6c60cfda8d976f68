#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace csep {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Interval of real parts; endpoints may be +-infinity.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool bounded() const;
};

// Catalogue of planar domains. All are open sets; membership tests are
// strict, so boundary points count as outside.
struct HalfPlane {};                       // upper half-plane, Im z > 0

struct StripRe {                           // a < Re z < b
    double a;
    double b;
};

struct StripIm {                           // c < Im z < d
    double c;
    double d;
};

struct Rectangle {                         // x0 < Re z < x1, y0 < Im z < y1
    double x0, x1, y0, y1;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

struct Disk {
    Point center;
    double r;
};

// Region above the grim reaper curve: |Re z| < scale, Im z > scale*h(Re z/scale)
// with h(x) = -(2/pi) log(2 cos(pi x / 2)).
struct GrimReaperU {
    double scale = 1.0;
};

// GrimReaperU cut off by a horizontal Dirichlet lid at Im z = height.
struct TruncatedU {
    double scale;
    double height;
};

// Region above the parabola y = x^2/2 - 1/2.
struct Parabola {};

// Simple, positively oriented polygon.
struct Polygon {
    std::vector<Point> vertices;
};

using DomainSpec = std::variant<HalfPlane, StripRe, StripIm, Rectangle, Disk,
                                GrimReaperU, TruncatedU, Parabola, Polygon>;

// Height of the grim reaper boundary curve at abscissa x, for the scaled
// domain: scale * h(x/scale). Throws std::domain_error when |x| >= scale.
double grim_reaper_height(double x, double scale);

// Strict membership in the open domain.
bool contains(const DomainSpec& spec, Point p);

// Positive lower bound on the distance from an interior point to the
// boundary (exact for half-plane, strips, rectangles, disks and polygons;
// a certified lower bound for the curved domains). Returns 0 for points
// outside or on the boundary.
double dist_to_boundary(const DomainSpec& spec, Point p);

// Cheaper certified lower bound: tight near the boundary, possibly crude
// deep inside. Equals dist_to_boundary except for the curved-graph domains,
// where it costs a single slope evaluation. Used in inner sampling loops to
// decide whether the boundary is far enough to skip crossing corrections.
double dist_to_boundary_fast(const DomainSpec& spec, Point p);

// Open interval of real parts {Re z : z in D}.
Interval re_projection(const DomainSpec& spec);

// Finite computational domain for the spectral solver. Requires
// height > grim_reaper_height(0, scale) so the domain is nonempty.
DomainSpec truncate_u(double scale, double height);

// Nearest boundary point where a closed form exists (half-plane, strips,
// rectangle, disk, polygon); nullopt for the curved domains.
std::optional<Point> nearest_boundary_point(const DomainSpec& spec, Point p);

// Index of the polygon edge closest to p (edge k joins vertex k to k+1).
std::size_t polygon_nearest_edge(const Polygon& poly, Point p);

// Characteristic length used to size default shell widths and step caps.
double domain_scale(const DomainSpec& spec);

// Short lowercase tag matching the JSON "kind" field ("strip_re", ...).
std::string domain_kind(const DomainSpec& spec);

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace csep
