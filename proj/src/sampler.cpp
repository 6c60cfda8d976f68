#include "csep/sampler.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "csep/errors.hpp"

namespace csep {

namespace {

constexpr double pi = std::numbers::pi;
constexpr long kChunk = 16384;

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Locate the boundary crossing on the segment inside -> outside by bisection
// on membership; returns the crossing fraction in (0, 1].
double crossing_fraction(const DomainSpec& spec, Point in, Point out) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Point q{in.x + mid * (out.x - in.x), in.y + mid * (out.y - in.y)};
        (contains(spec, q) ? lo : hi) = mid;
    }
    return hi;
}

Point lerp(Point a, Point b, double t) {
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

// Run chunked work over [0, n) samples; body(chunk_index, first, count, rng).
template <typename Body>
void for_each_chunk(long n, std::uint64_t seed, int threads, Body&& body) {
    const long nchunks = (n + kChunk - 1) / kChunk;
    const int nthreads = std::min<long>(resolve_threads(threads), std::max<long>(nchunks, 1));
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const long c = next.fetch_add(1);
            if (c >= nchunks) return;
            const long first = c * kChunk;
            const long count = std::min(kChunk, n - first);
            RandomStream rng(seed, static_cast<std::uint64_t>(c));
            try {
                body(c, first, count, rng);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
}

} // namespace

ExitSample wos_exit_position(const DomainSpec& spec, Point start, double shell_eps,
                             long max_steps, RandomStream& rng) {
    if (!(shell_eps > 0.0)) throw std::domain_error("wos: shell_eps must be positive");
    if (!contains(spec, start))
        throw std::domain_error("wos: start point is not inside the domain");

    Point p = start;
    long steps = 0;
    for (;;) {
        double r = dist_to_boundary(spec, p);
        if (r < shell_eps) break;
        if (steps >= max_steps)
            throw MaxStepsExceeded("wos: no boundary shell hit after " +
                                   std::to_string(max_steps) + " steps");
        r = std::min(r, kWosRadiusCap);
        const double theta = 2.0 * pi * rng.uniform01();
        p.x += r * std::cos(theta);
        p.y += r * std::sin(theta);
        ++steps;
    }
    if (const auto snap = nearest_boundary_point(spec, p)) p = *snap;
    return {p, kAbsentTime, steps, false};
}

ExitSample euler_exit(const DomainSpec& spec, Point start, double dt, double max_time,
                      RandomStream& rng) {
    if (!(dt > 0.0)) throw std::domain_error("euler: dt must be positive");
    if (!contains(spec, start))
        throw std::domain_error("euler: start point is not inside the domain");

    const double sdt = std::sqrt(dt);
    // exp(-2 d1 d2 / dt) < 4e-18 beyond this product. The skip test uses the
    // cheap certified lower bounds; the exact distances are only computed
    // once the walker is provably close to the boundary.
    const double bridge_cutoff = 20.0 * dt;
    Point p = start;
    double t = 0.0;
    long steps = 0;
    double lb_prev = dist_to_boundary_fast(spec, p);
    while (t < max_time) {
        const Point q{p.x + sdt * rng.gaussian(), p.y + sdt * rng.gaussian()};
        ++steps;
        if (!contains(spec, q)) {
            const double frac = crossing_fraction(spec, p, q);
            Point e = lerp(p, q, frac);
            if (const auto snap = nearest_boundary_point(spec, e)) e = *snap;
            return {e, t + frac * dt, steps, false};
        }
        const double lb_curr = dist_to_boundary_fast(spec, q);
        if (lb_prev * lb_curr < bridge_cutoff) {
            // Brownian bridge against the locally flat boundary: the unseen
            // excursion crossed with probability exp(-2 d1 d2 / dt).
            const double d1 = dist_to_boundary(spec, p);
            const double d2 = dist_to_boundary(spec, q);
            if (d1 * d2 < bridge_cutoff &&
                rng.uniform01() < std::exp(-2.0 * d1 * d2 / dt)) {
                Point e = d1 < d2 ? p : q;
                if (const auto snap = nearest_boundary_point(spec, e)) e = *snap;
                return {e, t + 0.5 * dt, steps, false};
            }
        }
        p = q;
        lb_prev = lb_curr;
        t += dt;
    }
    return {p, max_time, steps, true};
}

SurvivalCurve survival_curve(const DomainSpec& spec, Point start, double dt,
                             const std::vector<double>& grid, long n,
                             RandomStream& rng) {
    if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()))
        throw std::domain_error("survival_curve: grid must be ascending and nonempty");
    if (n < 1) throw std::domain_error("survival_curve: n >= 1 required");
    SurvivalCurve curve;
    curve.times = grid;
    curve.survivors.assign(grid.size(), 0);
    curve.n_total = n;
    const double max_time = grid.back();
    for (long k = 0; k < n; ++k) {
        const ExitSample s = euler_exit(spec, start, dt, max_time, rng);
        for (std::size_t j = 0; j < grid.size(); ++j)
            if (s.censored ? grid[j] <= max_time : s.time > grid[j])
                ++curve.survivors[j];
    }
    return curve;
}

std::vector<ExitSample> wos_batch(const DomainSpec& spec, Point start, long n,
                                  double shell_eps, long max_steps,
                                  std::uint64_t seed, int threads) {
    std::vector<ExitSample> out(static_cast<std::size_t>(n));
    for_each_chunk(n, seed, threads, [&](long, long first, long count, RandomStream& rng) {
        for (long k = 0; k < count; ++k)
            out[static_cast<std::size_t>(first + k)] =
                wos_exit_position(spec, start, shell_eps, max_steps, rng);
    });
    return out;
}

std::vector<ExitSample> euler_batch(const DomainSpec& spec, Point start, long n,
                                    double dt, double max_time, std::uint64_t seed,
                                    int threads) {
    std::vector<ExitSample> out(static_cast<std::size_t>(n));
    for_each_chunk(n, seed, threads, [&](long, long first, long count, RandomStream& rng) {
        for (long k = 0; k < count; ++k)
            out[static_cast<std::size_t>(first + k)] =
                euler_exit(spec, start, dt, max_time, rng);
    });
    return out;
}

SurvivalCurve survival_curve_parallel(const DomainSpec& spec, Point start, double dt,
                                      const std::vector<double>& grid, long n,
                                      std::uint64_t seed, int threads) {
    if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()))
        throw std::domain_error("survival_curve: grid must be ascending and nonempty");
    if (n < 1) throw std::domain_error("survival_curve: n >= 1 required");
    const long nchunks = (n + kChunk - 1) / kChunk;
    std::vector<std::vector<long>> partial(static_cast<std::size_t>(nchunks));
    const double max_time = grid.back();
    for_each_chunk(n, seed, threads, [&](long c, long, long count, RandomStream& rng) {
        std::vector<long> counts(grid.size(), 0);
        for (long k = 0; k < count; ++k) {
            const ExitSample s = euler_exit(spec, start, dt, max_time, rng);
            for (std::size_t j = 0; j < grid.size(); ++j)
                if (s.censored ? grid[j] <= max_time : s.time > grid[j]) ++counts[j];
        }
        partial[static_cast<std::size_t>(c)] = std::move(counts);
    });
    SurvivalCurve curve;
    curve.times = grid;
    curve.survivors.assign(grid.size(), 0);
    curve.n_total = n;
    for (const auto& counts : partial)
        for (std::size_t j = 0; j < grid.size(); ++j) curve.survivors[j] += counts[j];
    return curve;
}

std::vector<double> re_of(std::span<const ExitSample> samples) {
    std::vector<double> xs;
    xs.reserve(samples.size());
    for (const auto& s : samples) xs.push_back(s.position.x);
    return xs;
}

} // namespace csep
