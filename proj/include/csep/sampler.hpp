#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "csep/geometry.hpp"
#include "csep/rng.hpp"

namespace csep {

// One simulated Brownian exit. Walk-on-spheres does not observe the exit
// time, so it stores NaN there ("absent").
struct ExitSample {
    Point position;
    double time = 0.0;
    long steps = 0;
    bool censored = false;
};

inline constexpr double kAbsentTime = std::numeric_limits<double>::quiet_NaN();

// Default sampler parameters (relative shell width scales with the domain).
inline constexpr double kDefaultShellEpsRel = 1e-6;
inline constexpr double kDefaultDt = 1e-4;
inline constexpr long kDefaultMaxSteps = 1'000'000;
inline constexpr double kDefaultMaxTime = 50.0;
inline constexpr double kWosRadiusCap = 1e3;

// Exit position by walk-on-spheres: jump to a uniform point of the sphere of
// radius dist_to_boundary until within shell_eps of the boundary, then snap
// to the nearest boundary point where a closed form exists. Throws
// MaxStepsExceeded when the walk does not reach the shell in max_steps.
ExitSample wos_exit_position(const DomainSpec& spec, Point start, double shell_eps,
                             long max_steps, RandomStream& rng);

// Exit time and position by the Euler scheme with a Brownian-bridge
// correction for undetected crossings between interior endpoints. Paths
// alive past max_time come back flagged censored (time = max_time).
ExitSample euler_exit(const DomainSpec& spec, Point start, double dt, double max_time,
                      RandomStream& rng);

struct SurvivalCurve {
    std::vector<double> times;
    std::vector<long> survivors;
    long n_total = 0;
};

// Survival counts P(tau > t) on the given ascending grid from n independent
// Euler paths with max_time = grid.back(). Single-stream version.
SurvivalCurve survival_curve(const DomainSpec& spec, Point start, double dt,
                             const std::vector<double>& grid, long n,
                             RandomStream& rng);

// Parallel batches. Work is split into fixed-size chunks, chunk c drawing
// from RandomStream(seed, c); threads only schedule chunks, so results are
// identical for any thread count.
std::vector<ExitSample> wos_batch(const DomainSpec& spec, Point start, long n,
                                  double shell_eps, long max_steps,
                                  std::uint64_t seed, int threads = 0);

std::vector<ExitSample> euler_batch(const DomainSpec& spec, Point start, long n,
                                    double dt, double max_time, std::uint64_t seed,
                                    int threads = 0);

SurvivalCurve survival_curve_parallel(const DomainSpec& spec, Point start, double dt,
                                      const std::vector<double>& grid, long n,
                                      std::uint64_t seed, int threads = 0);

std::vector<double> re_of(std::span<const ExitSample> samples);

} // namespace csep
