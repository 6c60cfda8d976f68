#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csep/geometry.hpp"

namespace csep {

// Node-based rasterization of a domain: grid points origin + (i,j)*dx for
// 0 <= i < nx, 0 <= j < ny, flagged inside when the point lies in the open
// domain. Immutable after construction.
struct GridMask {
    double dx = 0.0;
    Point origin;
    int nx = 0;
    int ny = 0;
    std::vector<std::uint8_t> inside;

    bool is_inside(int i, int j) const {
        return i >= 0 && i < nx && j >= 0 && j < ny &&
               inside[static_cast<std::size_t>(j) * nx + i] != 0;
    }
    Point node(int i, int j) const { return {origin.x + i * dx, origin.y + j * dx}; }
    long inside_count() const;
    // Grid indices of the node nearest to (0,0), or nullopt when the origin
    // node is outside the mask.
    std::optional<std::pair<int, int>> origin_node() const;
};

// Rasterize the domain over bbox. When the origin node is inside, only its
// 4-connected component is kept. Throws EmptyMask when nothing is inside.
GridMask rasterize(const DomainSpec& spec, double dx, const Rectangle& bbox);

struct EigResult {
    double rate = 0.0;            // eigenvalue of -(1/2) Laplacian
    double raw_eigenvalue = 0.0;  // eigenvalue of -Laplacian, = 2 * rate
    int iterations = 0;
    double residual = 0.0;        // ||A v - lambda v||_2 with ||v|| = 1
    std::vector<double> eigenvector;  // on inside nodes, row-major order
};

// Smallest Dirichlet eigenvalue of the 5-point -Laplacian on the mask,
// by inverse power iteration with conjugate-gradient inner solves
// (inner relative residual 1e-8). Deterministic for any thread count.
EigResult principal_rate(const GridMask& mask, int threads = 0);

struct TorsionField {
    std::vector<double> values;   // full grid, zero on outside nodes
    double sup_norm = 0.0;
    double value_at_origin = 0.0;
    double residual = 0.0;
};

// Discrete torsion function: -(1/2) Laplacian u = 1 with Dirichlet walls,
// solved by CG to relative residual 1e-10.
TorsionField torsion(const GridMask& mask, int threads = 0);

struct TruncationSweep {
    std::vector<double> heights;
    std::vector<double> rates;     // rate at each truncation height
    double rate_at_max_height = 0.0;
    double extrapolated = 0.0;     // limit of the truncation sweep
};

// Rate of the scaled grim reaper domain via truncated solves at each height
// in h_list (ascending, >= 2 entries), with extrapolation in the truncation
// height. Verifies the sweep is nonincreasing (domain monotonicity) and that
// the result lands between pi^2/(8 scale^2) and the inscribed-rectangle
// values valid at the largest height.
TruncationSweep rate_of_u(double scale, double dx, const std::vector<double>& h_list,
                          int threads = 0);

// Explicit upper bound for the torsion-spectral constant in dimension d:
// d/8 + (1/4) sqrt(5 (1 + log(2)/4) d) + 1.
double vogt_constant(int d);

// Sharper planar constant quoted from the literature; preferred over
// vogt_constant(2) in certificates.
double best_known_c2();

// Exact rate for strips, rectangles and disks; nullopt otherwise.
std::optional<double> closed_form_rate(const DomainSpec& spec);

// First positive zero of the Bessel function J0, used by the disk rate.
// Reproduced at build-test time by bisection on the power series of J0.
inline constexpr double kBesselJ0FirstZero = 2.404825557695773;

// Closed-form rate of the inscribed rectangle R_n of the unit grim reaper
// domain: (pi^2/2) (1/(4(1-1/n)^2) + 1/n^2).
double inscribed_rectangle_rate(int n);

} // namespace csep
