#include "csep/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <numbers>
#include <thread>

#include "csep/errors.hpp"

namespace csep {

namespace {

constexpr double pi = std::numbers::pi;

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Run fn(k) for k in [0, count) over a fixed slice decomposition. The slice
// boundaries depend only on count and nthreads via the block size below, and
// each element is written by exactly one invocation, so results do not
// depend on scheduling.
template <typename Fn>
void parallel_for(long count, int nthreads, Fn&& fn) {
    if (nthreads <= 1 || count < 4096) {
        for (long k = 0; k < count; ++k) fn(k);
        return;
    }
    std::vector<std::thread> pool;
    const long block = (count + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
        const long lo = t * block;
        const long hi = std::min(count, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (long k = lo; k < hi; ++k) fn(k);
        });
    }
    for (auto& th : pool) th.join();
}

// Dot product with a fixed 8192-element block pairwise reduction; the block
// sums and their combination order are independent of the thread count, so
// the result is bit-identical for any parallel configuration.
constexpr long kDotBlock = 8192;

double deterministic_dot(const std::vector<double>& a, const std::vector<double>& b,
                         int nthreads) {
    const long n = static_cast<long>(a.size());
    const long nblocks = (n + kDotBlock - 1) / kDotBlock;
    std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
    parallel_for(nblocks, nthreads, [&](long blk) {
        const long lo = blk * kDotBlock;
        const long hi = std::min(n, lo + kDotBlock);
        double s = 0.0;
        for (long k = lo; k < hi; ++k) s += a[k] * b[k];
        partial[blk] = s;
    });
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

// Matrix-free 5-point -Laplacian restricted to inside nodes.
struct MaskOperator {
    const GridMask& mask;
    std::vector<long> unknown_of_node;  // -1 outside
    std::vector<int> node_i, node_j;
    long n = 0;
    double inv_dx2 = 0.0;

    explicit MaskOperator(const GridMask& m) : mask(m) {
        const long nodes = static_cast<long>(m.nx) * m.ny;
        unknown_of_node.assign(nodes, -1);
        for (int j = 0; j < m.ny; ++j)
            for (int i = 0; i < m.nx; ++i)
                if (m.is_inside(i, j)) {
                    unknown_of_node[static_cast<long>(j) * m.nx + i] = n++;
                    node_i.push_back(i);
                    node_j.push_back(j);
                }
        inv_dx2 = 1.0 / (m.dx * m.dx);
    }

    long neighbor(long u, int di, int dj) const {
        const int i = node_i[u] + di;
        const int j = node_j[u] + dj;
        if (i < 0 || i >= mask.nx || j < 0 || j >= mask.ny) return -1;
        return unknown_of_node[static_cast<long>(j) * mask.nx + i];
    }

    // y = A x. Element-wise parallel: deterministic for any thread count.
    void apply(const std::vector<double>& x, std::vector<double>& y, int nthreads) const {
        const int nx = mask.nx;
        parallel_for(n, nthreads, [&](long u) {
            const int i = node_i[u];
            const int j = node_j[u];
            const long base = static_cast<long>(j) * nx + i;
            double acc = 4.0 * x[u];
            long v;
            if (i > 0 && (v = unknown_of_node[base - 1]) >= 0) acc -= x[v];
            if (i + 1 < nx && (v = unknown_of_node[base + 1]) >= 0) acc -= x[v];
            if (j > 0 && (v = unknown_of_node[base - nx]) >= 0) acc -= x[v];
            if (j + 1 < mask.ny && (v = unknown_of_node[base + nx]) >= 0) acc -= x[v];
            y[u] = acc * inv_dx2;
        });
    }
};

// Conjugate gradient for A x = b, starting from x (warm start allowed).
// Stops when ||r|| <= rel_tol * ||b||. Returns iterations used.
int conjugate_gradient(const MaskOperator& op, const std::vector<double>& b,
                       std::vector<double>& x, double rel_tol, long max_iter,
                       int nthreads) {
    const long n = op.n;
    std::vector<double> r(n), p(n), ap(n);
    op.apply(x, ap, nthreads);
    parallel_for(n, nthreads, [&](long k) { r[k] = b[k] - ap[k]; });
    p = r;
    double rr = deterministic_dot(r, r, nthreads);
    const double bb = deterministic_dot(b, b, nthreads);
    const double stop = rel_tol * rel_tol * (bb > 0.0 ? bb : 1.0);
    int it = 0;
    while (rr > stop && it < max_iter) {
        op.apply(p, ap, nthreads);
        const double pap = deterministic_dot(p, ap, nthreads);
        if (!(pap > 0.0)) break;  // should not happen for SPD A
        const double alpha = rr / pap;
        parallel_for(n, nthreads, [&](long k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        });
        const double rr_new = deterministic_dot(r, r, nthreads);
        const double beta = rr_new / rr;
        parallel_for(n, nthreads, [&](long k) { p[k] = r[k] + beta * p[k]; });
        rr = rr_new;
        ++it;
    }
    if (rr > stop)
        throw ConvergenceFailure("conjugate gradient stalled after " +
                                 std::to_string(it) + " iterations");
    return it;
}

double norm2(const std::vector<double>& v, int nthreads) {
    return std::sqrt(deterministic_dot(v, v, nthreads));
}

} // namespace

long GridMask::inside_count() const {
    long c = 0;
    for (auto b : inside) c += b;
    return c;
}

std::optional<std::pair<int, int>> GridMask::origin_node() const {
    const int i = static_cast<int>(std::lround(-origin.x / dx));
    const int j = static_cast<int>(std::lround(-origin.y / dx));
    if (is_inside(i, j)) return std::make_pair(i, j);
    return std::nullopt;
}

GridMask rasterize(const DomainSpec& spec, double dx, const Rectangle& bbox) {
    if (!(dx > 0.0)) throw std::domain_error("rasterize: dx must be positive");
    GridMask m;
    m.dx = dx;
    m.origin = {bbox.x0, bbox.y0};
    m.nx = static_cast<int>(std::floor((bbox.x1 - bbox.x0) / dx + 1e-9)) + 1;
    m.ny = static_cast<int>(std::floor((bbox.y1 - bbox.y0) / dx + 1e-9)) + 1;
    if (m.nx <= 0 || m.ny <= 0) throw EmptyMask("rasterize: degenerate bbox");
    m.inside.assign(static_cast<std::size_t>(m.nx) * m.ny, 0);
    for (int j = 0; j < m.ny; ++j)
        for (int i = 0; i < m.nx; ++i)
            if (contains(spec, m.node(i, j)))
                m.inside[static_cast<std::size_t>(j) * m.nx + i] = 1;

    if (m.inside_count() == 0) throw EmptyMask("rasterize: no interior nodes in bbox");

    // Keep the 4-connected component of the origin when it is inside.
    const auto origin = m.origin_node();
    if (origin) {
        std::vector<std::uint8_t> keep(m.inside.size(), 0);
        std::deque<std::pair<int, int>> queue{*origin};
        keep[static_cast<std::size_t>(origin->second) * m.nx + origin->first] = 1;
        while (!queue.empty()) {
            const auto [i, j] = queue.front();
            queue.pop_front();
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                const int ii = i + di[k], jj = j + dj[k];
                if (!m.is_inside(ii, jj)) continue;
                auto& flag = keep[static_cast<std::size_t>(jj) * m.nx + ii];
                if (flag) continue;
                flag = 1;
                queue.emplace_back(ii, jj);
            }
        }
        m.inside = std::move(keep);
    }
    return m;
}

EigResult principal_rate(const GridMask& mask, int threads) {
    const int nthreads = resolve_threads(threads);
    MaskOperator op(mask);
    if (op.n == 0) throw EmptyMask("principal_rate: empty mask");

    // Seed with the half-sine bump of the mask's bounding box: exact for
    // full-rectangle masks, a good overlap with the ground state otherwise.
    int i_lo = mask.nx, i_hi = -1, j_lo = mask.ny, j_hi = -1;
    for (long u = 0; u < op.n; ++u) {
        i_lo = std::min(i_lo, op.node_i[u]);
        i_hi = std::max(i_hi, op.node_i[u]);
        j_lo = std::min(j_lo, op.node_j[u]);
        j_hi = std::max(j_hi, op.node_j[u]);
    }
    std::vector<double> v(op.n);
    const double wx = std::max(1, i_hi - i_lo + 2);
    const double wy = std::max(1, j_hi - j_lo + 2);
    for (long u = 0; u < op.n; ++u)
        v[u] = std::sin(pi * (op.node_i[u] - i_lo + 1) / wx) *
               std::sin(pi * (op.node_j[u] - j_lo + 1) / wy);
    double nv = norm2(v, nthreads);
    for (auto& x : v) x /= nv;

    std::vector<double> y(op.n), av(op.n);
    op.apply(v, av, nthreads);
    double lambda = deterministic_dot(v, av, nthreads);

    const int max_outer = 600;
    const double inner_tol = 1e-8;
    int outer = 0;
    double residual = kInf;
    for (; outer < max_outer; ++outer) {
        // Warm start from the current eigenvector estimate scaled by 1/lambda.
        parallel_for(op.n, nthreads, [&](long k) { y[k] = v[k] / lambda; });
        conjugate_gradient(op, v, y, inner_tol, 200000, nthreads);
        const double ny = norm2(y, nthreads);
        parallel_for(op.n, nthreads, [&](long k) { v[k] = y[k] / ny; });
        op.apply(v, av, nthreads);
        lambda = deterministic_dot(v, av, nthreads);
        double rsq = 0.0;
        {
            std::vector<double> resid(op.n);
            parallel_for(op.n, nthreads,
                         [&](long k) { resid[k] = av[k] - lambda * v[k]; });
            rsq = norm2(resid, nthreads);
        }
        residual = rsq;
        if (residual <= 1e-7 * std::max(1.0, lambda)) {
            ++outer;
            break;
        }
    }
    if (residual > 1e-6 * std::max(1.0, lambda))
        throw ConvergenceFailure("principal_rate: inverse power did not converge");

    EigResult out;
    out.rate = lambda / 2.0;
    out.raw_eigenvalue = 2.0 * out.rate;
    out.iterations = outer;
    out.residual = residual;
    out.eigenvector = std::move(v);
    return out;
}

TorsionField torsion(const GridMask& mask, int threads) {
    const int nthreads = resolve_threads(threads);
    MaskOperator op(mask);
    if (op.n == 0) throw EmptyMask("torsion: empty mask");

    // -(1/2) Lap u = 1  <=>  (-Lap) u = 2.
    std::vector<double> rhs(op.n, 2.0), u(op.n, 0.0);
    conjugate_gradient(op, rhs, u, 1e-10, 400000, nthreads);

    TorsionField field;
    field.values.assign(static_cast<std::size_t>(mask.nx) * mask.ny, 0.0);
    double sup = 0.0;
    for (long k = 0; k < op.n; ++k) {
        field.values[static_cast<std::size_t>(op.node_j[k]) * mask.nx + op.node_i[k]] = u[k];
        sup = std::max(sup, u[k]);
    }
    field.sup_norm = sup;
    const auto origin = mask.origin_node();
    field.value_at_origin =
        origin ? field.values[static_cast<std::size_t>(origin->second) * mask.nx +
                              origin->first]
               : std::numeric_limits<double>::quiet_NaN();
    std::vector<double> au(op.n);
    op.apply(u, au, nthreads);
    double rs = 0.0;
    for (long k = 0; k < op.n; ++k) rs += (au[k] - 2.0) * (au[k] - 2.0);
    field.residual = std::sqrt(rs) / std::sqrt(4.0 * op.n);
    return field;
}

double inscribed_rectangle_rate(int n) {
    if (n < 2) throw std::domain_error("inscribed_rectangle_rate: n >= 2 required");
    const double s = 1.0 - 1.0 / n;
    return (pi * pi / 2.0) * (1.0 / (4.0 * s * s) + 1.0 / (static_cast<double>(n) * n));
}

namespace {

// Fit rate(H) = limit + A/(H-c)^2 through the last three sweep points and
// return the limit; falls back to a two-point 1/H^2 extrapolation when the
// three-point fit has no admissible c.
double extrapolate_sweep(const std::vector<double>& h, const std::vector<double>& r) {
    const std::size_t m = h.size();
    if (m < 2) return r.back();
    const double h2 = h[m - 2], h3 = h[m - 1];
    const double r2 = r[m - 2], r3 = r[m - 1];

    const auto two_point = [&]() {
        const double a = (r2 - r3) / (1.0 / (h2 * h2) - 1.0 / (h3 * h3));
        return r3 - a / (h3 * h3);
    };
    if (m == 2) return two_point();

    const double h1 = h[m - 3], r1 = r[m - 3];
    const double d12 = r1 - r2, d23 = r2 - r3;
    if (!(d23 > 0.0) || !(d12 > 0.0)) return r3;
    const double target = d12 / d23;
    const auto ratio = [&](double c) {
        const double a1 = 1.0 / ((h1 - c) * (h1 - c));
        const double a2 = 1.0 / ((h2 - c) * (h2 - c));
        const double a3 = 1.0 / ((h3 - c) * (h3 - c));
        return (a1 - a2) / (a2 - a3);
    };
    double lo = -20.0, hi = h1 - 0.5;
    if ((ratio(lo) - target) * (ratio(hi) - target) > 0.0) return two_point();
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((ratio(mid) - target) * (ratio(lo) - target) <= 0.0 ? hi : lo) = mid;
    }
    const double c = 0.5 * (lo + hi);
    const double a = d23 / (1.0 / ((h2 - c) * (h2 - c)) - 1.0 / ((h3 - c) * (h3 - c)));
    return r3 - a / ((h3 - c) * (h3 - c));
}

} // namespace

TruncationSweep rate_of_u(double scale, double dx, const std::vector<double>& h_list,
                          int threads) {
    if (h_list.size() < 2)
        throw std::domain_error("rate_of_u: need at least two truncation heights");
    if (!std::is_sorted(h_list.begin(), h_list.end()))
        throw std::domain_error("rate_of_u: heights must be ascending");

    TruncationSweep sweep;
    sweep.heights = h_list;
    const double floor_y = grim_reaper_height(0.0, scale) - 2.0 * dx;
    for (double H : h_list) {
        const DomainSpec dom = truncate_u(scale, H);
        const GridMask mask =
            rasterize(dom, dx, Rectangle{-scale, scale, floor_y, H});
        sweep.rates.push_back(principal_rate(mask, threads).rate);
    }
    for (std::size_t k = 1; k < sweep.rates.size(); ++k)
        if (sweep.rates[k] > sweep.rates[k - 1] + 1e-6 * sweep.rates[k - 1])
            throw MonotonicityViolation("rate_of_u: rate increased with truncation height");

    sweep.rate_at_max_height = sweep.rates.back();
    sweep.extrapolated = extrapolate_sweep(sweep.heights, sweep.rates);

    // Sandwich from the containment chain: above the full-domain rate, below
    // every inscribed rectangle that fits under the tallest lid. The lower
    // side carries the staircase discretization bias, measured below 0.5%
    // for dx <= 0.04 with at least three heights in the asymptotic regime.
    const double lower = pi * pi / (8.0 * scale * scale);
    const double tol = 0.01 * lower;
    if (sweep.extrapolated < lower - tol)
        throw ConvergenceFailure("rate_of_u: extrapolated rate fell below the strip bound");
    const double h_max = h_list.back() / scale;
    for (int n = 2; n < 1000; ++n) {
        if (grim_reaper_height(1.0 - 1.0 / n, 1.0) + n > h_max) break;
        const double upper = inscribed_rectangle_rate(n) / (scale * scale);
        if (sweep.rate_at_max_height > upper + tol)
            throw ConvergenceFailure("rate_of_u: rate exceeded an inscribed rectangle bound");
    }
    return sweep;
}

double vogt_constant(int d) {
    if (d < 1) throw std::domain_error("vogt_constant: dimension must be >= 1");
    const double dd = d;
    return dd / 8.0 + 0.25 * std::sqrt(5.0 * (1.0 + 0.25 * std::log(2.0)) * dd) + 1.0;
}

double best_known_c2() { return 2.0379; }

std::optional<double> closed_form_rate(const DomainSpec& spec) {
    if (const auto* s = std::get_if<StripRe>(&spec)) {
        const double w = s->b - s->a;
        return pi * pi / (2.0 * w * w);
    }
    if (const auto* s = std::get_if<StripIm>(&spec)) {
        const double w = s->d - s->c;
        return pi * pi / (2.0 * w * w);
    }
    if (const auto* r = std::get_if<Rectangle>(&spec)) {
        const double w = r->width(), h = r->height();
        return (pi * pi / 2.0) * (1.0 / (w * w) + 1.0 / (h * h));
    }
    if (const auto* d = std::get_if<Disk>(&spec)) {
        return kBesselJ0FirstZero * kBesselJ0FirstZero / (2.0 * d->r * d->r);
    }
    return std::nullopt;
}

} // namespace csep
