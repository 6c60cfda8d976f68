#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "csep/errors.hpp"
#include "csep/sampler.hpp"
#include "csep/spectral.hpp"

using namespace csep;

namespace {

constexpr double pi = std::numbers::pi;

// Power series of the Bessel function J0; converges fast for |x| <= 4.
long double bessel_j0_series(long double x) {
    long double term = 1.0L, sum = 1.0L;
    const long double q = x * x / 4.0L;
    for (int k = 1; k < 40; ++k) {
        term *= -q / (static_cast<long double>(k) * k);
        sum += term;
    }
    return sum;
}

} // namespace

TEST_CASE("bessel zero constant reproduced by bisection on the J0 series") {
    long double lo = 2.0L, hi = 3.0L;
    REQUIRE(bessel_j0_series(lo) > 0.0L);
    REQUIRE(bessel_j0_series(hi) < 0.0L);
    for (int it = 0; it < 200; ++it) {
        const long double mid = 0.5L * (lo + hi);
        (bessel_j0_series(mid) > 0.0L ? lo : hi) = mid;
    }
    CHECK(std::abs(static_cast<double>(lo) - kBesselJ0FirstZero) < 1e-13);
}

TEST_CASE("rasterize: node counts and bounding boxes") {
    // Open strip: nodes strictly inside, walls excluded.
    const GridMask strip = rasterize(StripRe{-1, 1}, 0.01, Rectangle{-1, 1, 0, 1});
    int row_width = 0;
    for (int i = 0; i < strip.nx; ++i) row_width += strip.is_inside(i, 0) ? 1 : 0;
    CHECK(row_width == 199);

    // Disk area converges: count * dx^2 ~ pi.
    const GridMask disk = rasterize(Disk{{0, 0}, 1}, 0.005, Rectangle{-1, 1, -1, 1});
    CHECK(static_cast<double>(disk.inside_count()) * 0.005 * 0.005 ==
          doctest::Approx(pi).epsilon(0.01));

    CHECK_THROWS_AS(rasterize(Disk{{0, 0}, 0.001}, 0.01, Rectangle{0.5, 1, 0.5, 1}),
                    EmptyMask);
}

TEST_CASE("rasterize: truncated grim reaper mask area matches quadrature") {
    const double dx = 0.01, H = 6.0;
    const GridMask m = rasterize(TruncatedU{1.0, H}, dx,
                                 Rectangle{-1, 1, grim_reaper_height(0.0, 1.0) - 2 * dx, H});
    // Midpoint quadrature of the integral of (H - h(x))^+ over (-1,1).
    const int q = 200000;
    double area = 0.0;
    for (int k = 0; k < q; ++k) {
        const double x = -1.0 + 2.0 * (k + 0.5) / q;
        area += std::max(0.0, H - grim_reaper_height(x, 1.0)) * (2.0 / q);
    }
    const double mask_area = static_cast<double>(m.inside_count()) * dx * dx;
    const double perimeter = 2.0 * (H + 0.45) + 2.0 + 2.0;  // walls + lid + curve slack
    CHECK(std::abs(mask_area - area) < 2.0 * dx * perimeter);
}

TEST_CASE("rasterize: keeps only the component connected to the origin") {
    const GridMask m = rasterize(Disk{{0, 0}, 1}, 0.05, Rectangle{-3, 3, -1, 1});
    for (int j = 0; j < m.ny; ++j)
        for (int i = 0; i < m.nx; ++i)
            if (m.is_inside(i, j)) {
                const Point p = m.node(i, j);
                CHECK(std::hypot(p.x, p.y) < 1.0);
            }
    CHECK(m.origin_node().has_value());
}

TEST_CASE("principal rate: tall strip mask recovers the strip rate") {
    const GridMask m = rasterize(StripRe{-1, 1}, 0.01, Rectangle{-1, 1, 0, 40});
    const EigResult e = principal_rate(m, 2);
    CHECK(e.raw_eigenvalue == 2.0 * e.rate);  // exact identity
    CHECK(std::abs(e.rate - pi * pi / 8.0) / (pi * pi / 8.0) < 0.005);
}

TEST_CASE("principal rate: rectangle separation-of-variables formula") {
    const DomainSpec rect = Rectangle{0, 1.5, 0, 4};
    const GridMask m = rasterize(rect, 1.5 / 200, Rectangle{0, 1.5, 0, 4});
    const EigResult e = principal_rate(m, 2);
    const double exact = *closed_form_rate(rect);
    CHECK(exact == doctest::Approx((pi * pi / 2.0) * (1.0 / 2.25 + 1.0 / 16.0)));
    CHECK(std::abs(e.rate - exact) / exact < 0.005);

    // Inscribed-rectangle family value at n = 10.
    CHECK(inscribed_rectangle_rate(10) == doctest::Approx(1.5724351209389897));
}

TEST_CASE("principal rate: disk against the Bessel oracle") {
    const GridMask m = rasterize(Disk{{0, 0}, 1}, 0.01, Rectangle{-1, 1, -1, 1});
    const EigResult e = principal_rate(m, 2);
    const double exact = kBesselJ0FirstZero * kBesselJ0FirstZero / 2.0;
    CHECK(std::abs(e.rate - exact) / exact < 0.01);
    CHECK(e.residual <= 1e-6 * std::max(1.0, e.raw_eigenvalue));
}

TEST_CASE("principal rate: domain monotonicity at the grid level") {
    const GridMask small = rasterize(Disk{{0, 0}, 0.8}, 0.02, Rectangle{-1, 1, -1, 1});
    const GridMask big = rasterize(Disk{{0, 0}, 1.0}, 0.02, Rectangle{-1, 1, -1, 1});
    const double r_small = principal_rate(small, 2).rate;
    const double r_big = principal_rate(big, 2).rate;
    CHECK(r_small >= r_big - 1e-9);
}

TEST_CASE("principal rate: stencil error is second order on lattice-aligned boxes") {
    const DomainSpec rect = Rectangle{0, 1, 0, 2};
    const double exact = *closed_form_rate(rect);
    std::vector<double> errs;
    for (double dx : {1.0 / 25, 1.0 / 50, 1.0 / 100}) {
        const GridMask m = rasterize(rect, dx, Rectangle{0, 1, 0, 2});
        errs.push_back(std::abs(principal_rate(m, 2).rate - exact));
    }
    CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.2));
    CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("torsion: strip sup norm and disk centre value") {
    const GridMask strip = rasterize(StripRe{-1, 1}, 0.01, Rectangle{-1, 1, 0, 10});
    const TorsionField fs = torsion(strip, 2);
    CHECK(std::abs(fs.sup_norm - 1.0) < 0.01);  // w^2/4 with w = 2

    const GridMask disk = rasterize(Disk{{0, 0}, 1}, 0.005, Rectangle{-1, 1, -1, 1});
    const TorsionField fd = torsion(disk, 2);
    CHECK(std::abs(fd.value_at_origin - 0.5) < 0.005);  // (1 - r^2)/2 at 0

    // Maximum principle: nonnegative, sup attained away from the walls.
    double sup = 0.0;
    int sup_i = -1, sup_j = -1;
    for (int j = 0; j < disk.ny; ++j)
        for (int i = 0; i < disk.nx; ++i) {
            const double v = fd.values[static_cast<std::size_t>(j) * disk.nx + i];
            CHECK(v >= 0.0);
            if (v > sup) {
                sup = v;
                sup_i = i;
                sup_j = j;
            }
        }
    CHECK(sup == fd.sup_norm);
    CHECK(disk.is_inside(sup_i + 1, sup_j));
    CHECK(disk.is_inside(sup_i - 1, sup_j));
    CHECK(disk.is_inside(sup_i, sup_j + 1));
    CHECK(disk.is_inside(sup_i, sup_j - 1));
}

TEST_CASE("torsion: grim reaper origin value cross-checks the Euler sampler") {
    const double dx = 0.02;
    const GridMask m = rasterize(TruncatedU{1.0, 8.0}, dx,
                                 Rectangle{-1, 1, grim_reaper_height(0.0, 1.0) - 2 * dx, 8});
    const TorsionField f = torsion(m, 2);

    const auto samples = euler_batch(GrimReaperU{1.0}, {0, 0}, 20000, 1e-4, 50.0, 37, 2);
    double mean_t = 0.0, sq = 0.0;
    for (const auto& s : samples) {
        mean_t += s.time;
        sq += s.time * s.time;
    }
    mean_t /= static_cast<double>(samples.size());
    const double se = std::sqrt((sq / samples.size() - mean_t * mean_t) / samples.size());
    CHECK(std::abs(f.value_at_origin - mean_t) < 3.0 * se + 0.01);
}

TEST_CASE("torsion-spectral product stays under the planar constant") {
    const std::vector<std::pair<DomainSpec, Rectangle>> cases = {
        {StripRe{-1, 1}, Rectangle{-1, 1, 0, 10}},
        {Disk{{0, 0}, 1}, Rectangle{-1, 1, -1, 1}},
        {Rectangle{0, 1.5, 0, 4}, Rectangle{0, 1.5, 0, 4}},
        {TruncatedU{1.0, 6.0}, Rectangle{-1, 1, -0.5, 6}},
    };
    for (const auto& [spec, bbox] : cases) {
        const GridMask m = rasterize(spec, 0.02, bbox);
        const double product = principal_rate(m, 2).rate * torsion(m, 2).sup_norm;
        CAPTURE(domain_kind(spec));
        CHECK(product <= best_known_c2() + 0.01);
    }
}

TEST_CASE("truncation sweep: monotone, extrapolates to the strip bound") {
    const TruncationSweep sweep = rate_of_u(1.0, 0.04, {3, 5, 7}, 2);
    for (std::size_t k = 1; k < sweep.rates.size(); ++k)
        CHECK(sweep.rates[k] <= sweep.rates[k - 1] + 1e-9);
    CHECK(std::abs(sweep.extrapolated - pi * pi / 8.0) / (pi * pi / 8.0) < 0.02);
    CHECK(sweep.rate_at_max_height >= pi * pi / 8.0);
    CHECK(sweep.rate_at_max_height <= inscribed_rectangle_rate(10));

    CHECK_THROWS_AS(rate_of_u(1.0, 0.04, {4.0}, 2), std::domain_error);
    CHECK_THROWS_AS(rate_of_u(1.0, 0.04, {5, 3}, 2), std::domain_error);
}

TEST_CASE("truncation sweep: scale covariance") {
    const TruncationSweep sweep = rate_of_u(2.0, 0.08, {6, 10, 14}, 2);
    CHECK(std::abs(sweep.extrapolated - pi * pi / 32.0) / (pi * pi / 32.0) < 0.02);
}

TEST_CASE("explicit constants") {
    // d/8 + (1/4) sqrt(5 (1 + log(2)/4) d) + 1 evaluated directly.
    CHECK(vogt_constant(2) == doctest::Approx(2.1063318556275314).epsilon(1e-12));
    CHECK(vogt_constant(1) == doctest::Approx(1.7305180620602871).epsilon(1e-12));
    CHECK_THROWS_AS(vogt_constant(0), std::domain_error);
    CHECK(best_known_c2() == 2.0379);

    CHECK(*closed_form_rate(StripRe{-1, 1}) == doctest::Approx(pi * pi / 8.0));
    CHECK(*closed_form_rate(StripIm{0, 3}) == doctest::Approx(pi * pi / 18.0));
    CHECK(*closed_form_rate(Disk{{0, 0}, 1}) == doctest::Approx(2.8915929814733925));
    CHECK(*closed_form_rate(Disk{{0, 0}, 2}) ==
          doctest::Approx(2.8915929814733925 / 4.0));
    CHECK_FALSE(closed_form_rate(GrimReaperU{1.0}).has_value());
    CHECK_FALSE(closed_form_rate(HalfPlane{}).has_value());
    CHECK_FALSE(closed_form_rate(Parabola{}).has_value());
}
