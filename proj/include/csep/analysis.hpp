#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "csep/geometry.hpp"
#include "csep/sampler.hpp"

namespace csep {

// Reference laws the exit-position samplers are tested against.
struct Uniform {
    double a;
    double b;
};

// Hyperbolic secant law with density (1/2) sech(pi x / 2); variance 1.
struct SechDensity {};

struct CauchyLaw {
    double location = 0.0;
    double scale = 1.0;
};

using TargetDistribution = std::variant<Uniform, SechDensity, CauchyLaw>;

double target_cdf(const TargetDistribution& target, double x);
double target_mean(const TargetDistribution& target);
// Nullopt for Cauchy.
std::optional<double> target_variance(const TargetDistribution& target);
TargetDistribution parse_target(const std::string& text);
std::string target_name(const TargetDistribution& target);

// One-sample Kolmogorov-Smirnov statistic against the target CDF.
double ks_statistic(std::span<const double> samples, const TargetDistribution& target);

struct RateEstimate {
    double lambda = 0.0;
    double stderr_lambda = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    int n_points = 0;
};

// Exponential tail rate from a survival curve: weighted least-squares slope
// of -log(P_hat) over the window where P_hat is in [1e-3, 1e-1] and
// t <= max(grid)/2 (censoring guard). Weights from the binomial delta
// method. Throws WindowTooNarrow with fewer than 4 usable points.
RateEstimate estimate_rate(const SurvivalCurve& curve);

// Smallest interval containing the samples: point estimate of the support.
Interval empirical_support(std::span<const double> samples);

enum class Relation { LessEq, GreaterEq, Approx };

// One numeric theorem check: lhs RELATION rhs, with slack and provenance.
struct Certificate {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    Relation relation = Relation::LessEq;
    double slack = 0.0;
    bool holds = false;
    std::vector<std::pair<std::string, double>> inputs;
};

// Upper rate bound: rate <= c2 / Var(mu). Throws VarianceUndefined for
// variance-free targets.
Certificate check_upper_bound(double rate, const TargetDistribution& mu, double c2);

// Lower rate bound: rate >= pi^2 / (2 width(support)^2); trivial when the
// support is unbounded. numerical_margin loosens the comparison for rates
// carrying discretization error (recorded in the certificate inputs).
Certificate check_lower_bound(double rate, Interval support,
                              double numerical_margin = 0.0);

enum class Axis { Re, Im };

// Optional-stopping inequality E[(coordinate at exit)^2] <= E[exit time],
// tested at 3 paired standard errors; the gap statistic is also recorded
// since equality holds when the coordinate is bounded.
Certificate check_davis(std::span<const ExitSample> samples, Axis axis);

// Closed-form hitting lower bound 1 - (2/pi) atan(2 sqrt(r) / (1 - r)) for
// r in [0, 1).
double beurling_lower_bound(double r);

// Compare the empirical support of Re exit samples against the domain's
// real-axis projection. Finite endpoints must match within tol (defaults:
// 5 width/sqrt(N), or 3 width/N when the boundary density is bounded
// below); infinite endpoints are checked qualitatively: the corresponding
// sample extreme must exceed growth_threshold in magnitude.
Certificate check_support_theorem(const DomainSpec& spec,
                                  std::span<const double> re_samples,
                                  std::optional<double> tol = std::nullopt,
                                  bool density_bounded_below = false,
                                  double growth_threshold = 2.0);

} // namespace csep
