#include "csep/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "csep/errors.hpp"

namespace csep {

namespace {
constexpr double pi = std::numbers::pi;
} // namespace

double target_cdf(const TargetDistribution& target, double x) {
    if (const auto* u = std::get_if<Uniform>(&target)) {
        if (x <= u->a) return 0.0;
        if (x >= u->b) return 1.0;
        return (x - u->a) / (u->b - u->a);
    }
    if (std::get_if<SechDensity>(&target)) {
        // Antiderivative of (1/2) sech(pi x / 2).
        return (2.0 / pi) * std::atan(std::exp(pi * x / 2.0));
    }
    const auto& c = std::get<CauchyLaw>(target);
    return 0.5 + std::atan((x - c.location) / c.scale) / pi;
}

double target_mean(const TargetDistribution& target) {
    if (const auto* u = std::get_if<Uniform>(&target)) return 0.5 * (u->a + u->b);
    if (std::get_if<SechDensity>(&target)) return 0.0;
    throw VarianceUndefined("mean undefined for the Cauchy law");
}

std::optional<double> target_variance(const TargetDistribution& target) {
    if (const auto* u = std::get_if<Uniform>(&target)) {
        const double w = u->b - u->a;
        return w * w / 12.0;
    }
    if (std::get_if<SechDensity>(&target)) return 1.0;
    return std::nullopt;
}

TargetDistribution parse_target(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.empty()) throw std::invalid_argument("empty target spec");
    const std::string& kind = parts[0];
    if (kind == "uniform") {
        if (parts.size() != 3) throw std::invalid_argument("uniform target needs a,b");
        return Uniform{std::stod(parts[1]), std::stod(parts[2])};
    }
    if (kind == "sech") return SechDensity{};
    if (kind == "cauchy") {
        CauchyLaw c;
        if (parts.size() >= 2) c.location = std::stod(parts[1]);
        if (parts.size() >= 3) c.scale = std::stod(parts[2]);
        return c;
    }
    throw std::invalid_argument("unknown target '" + kind + "'");
}

std::string target_name(const TargetDistribution& target) {
    if (const auto* u = std::get_if<Uniform>(&target)) {
        std::ostringstream os;
        os << "uniform[" << u->a << "," << u->b << "]";
        return os.str();
    }
    if (std::get_if<SechDensity>(&target)) return "sech";
    return "cauchy";
}

double ks_statistic(std::span<const double> samples, const TargetDistribution& target) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = target_cdf(target, sorted[i]);
        ks = std::max(ks, std::max(f - static_cast<double>(i) / n,
                                   static_cast<double>(i + 1) / n - f));
    }
    return ks;
}

RateEstimate estimate_rate(const SurvivalCurve& curve) {
    const double t_guard = curve.times.empty() ? 0.0 : curve.times.back() / 2.0;
    std::vector<double> ts, ys, ws;
    for (std::size_t j = 0; j < curve.times.size(); ++j) {
        const double p = static_cast<double>(curve.survivors[j]) / curve.n_total;
        if (p < 1e-3 || p > 1e-1) continue;
        if (curve.times[j] > t_guard) continue;
        ts.push_back(curve.times[j]);
        ys.push_back(-std::log(p));
        // Var(-log p_hat) ~ (1-p)/(n p) by the delta method.
        ws.push_back(curve.n_total * p / (1.0 - p));
    }
    if (ts.size() < 4)
        throw WindowTooNarrow("estimate_rate: fewer than 4 points with survivor "
                              "fraction in [1e-3, 1e-1] before the censoring guard");

    double sw = 0.0, st = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        sw += ws[k];
        st += ws[k] * ts[k];
        sy += ws[k] * ys[k];
    }
    const double tbar = st / sw, ybar = sy / sw;
    double stt = 0.0, sty = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        stt += ws[k] * (ts[k] - tbar) * (ts[k] - tbar);
        sty += ws[k] * (ts[k] - tbar) * (ys[k] - ybar);
    }
    RateEstimate est;
    est.lambda = sty / stt;
    est.stderr_lambda = std::sqrt(1.0 / stt);
    est.t_lo = ts.front();
    est.t_hi = ts.back();
    est.n_points = static_cast<int>(ts.size());
    return est;
}

Interval empirical_support(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("empirical_support: empty sample");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    return {*lo, *hi};
}

namespace {

Certificate make_certificate(std::string name, double lhs, double rhs, Relation rel,
                             double tolerance = 0.0) {
    Certificate c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.relation = rel;
    switch (rel) {
        case Relation::LessEq:
            c.slack = rhs - lhs;
            c.holds = lhs <= rhs + tolerance;
            break;
        case Relation::GreaterEq:
            c.slack = lhs - rhs;
            c.holds = lhs >= rhs - tolerance;
            break;
        case Relation::Approx:
            c.slack = std::abs(lhs - rhs);
            c.holds = c.slack <= tolerance;
            break;
    }
    return c;
}

} // namespace

Certificate check_upper_bound(double rate, const TargetDistribution& mu, double c2) {
    const auto var = target_variance(mu);
    if (!var) throw VarianceUndefined("check_upper_bound: target has no variance");
    Certificate c = make_certificate("rate_upper_bound", rate, c2 / *var, Relation::LessEq);
    c.inputs = {{"rate", rate}, {"c2", c2}, {"variance", *var}};
    return c;
}

Certificate check_lower_bound(double rate, Interval support, double numerical_margin) {
    const double width = support.hi - support.lo;
    const double bound = std::isfinite(width) && width > 0.0
                             ? pi * pi / (2.0 * width * width)
                             : 0.0;
    Certificate c = make_certificate("rate_lower_bound", rate, bound, Relation::GreaterEq,
                                     numerical_margin);
    c.inputs = {{"rate", rate},
                {"support_lo", support.lo},
                {"support_hi", support.hi},
                {"numerical_margin", numerical_margin}};
    return c;
}

Certificate check_davis(std::span<const ExitSample> samples, Axis axis) {
    if (samples.empty()) throw std::invalid_argument("check_davis: empty sample");
    for (const auto& s : samples)
        if (s.censored || !std::isfinite(s.time))
            throw CensoredData("check_davis: requires uncensored samples with times");

    const double n = static_cast<double>(samples.size());
    double mean_sq = 0.0, mean_t = 0.0;
    for (const auto& s : samples) {
        const double c = axis == Axis::Re ? s.position.x : s.position.y;
        mean_sq += c * c;
        mean_t += s.time;
    }
    mean_sq /= n;
    mean_t /= n;
    // Paired standard error of mean(c^2 - t).
    double var_d = 0.0;
    for (const auto& s : samples) {
        const double c = axis == Axis::Re ? s.position.x : s.position.y;
        const double d = c * c - s.time - (mean_sq - mean_t);
        var_d += d * d;
    }
    var_d /= n * (n - 1.0);
    const double se = std::sqrt(var_d);

    Certificate c = make_certificate("optional_stopping_second_moment", mean_sq, mean_t,
                                     Relation::LessEq, 3.0 * se);
    c.inputs = {{"n", n},
                {"paired_se", se},
                {"gap_sigma", se > 0.0 ? (mean_t - mean_sq) / se : 0.0}};
    return c;
}

double beurling_lower_bound(double r) {
    if (!(r >= 0.0 && r < 1.0))
        throw std::domain_error("beurling_lower_bound: requires 0 <= r < 1");
    return 1.0 - (2.0 / pi) * std::atan(2.0 * std::sqrt(r) / (1.0 - r));
}

Certificate check_support_theorem(const DomainSpec& spec,
                                  std::span<const double> re_samples,
                                  std::optional<double> tol,
                                  bool density_bounded_below,
                                  double growth_threshold) {
    const Interval proj = re_projection(spec);
    const Interval emp = empirical_support(re_samples);
    const double n = static_cast<double>(re_samples.size());

    Certificate c;
    c.name = "support_theorem";
    c.relation = Relation::Approx;
    c.inputs = {{"n", n},
                {"proj_lo", proj.lo},
                {"proj_hi", proj.hi},
                {"emp_lo", emp.lo},
                {"emp_hi", emp.hi}};

    if (proj.bounded()) {
        const double width = proj.width();
        const double tolerance =
            tol.value_or(density_bounded_below ? 3.0 * width / n
                                               : 5.0 * width / std::sqrt(n));
        const double worst_gap =
            std::max(std::abs(emp.lo - proj.lo), std::abs(emp.hi - proj.hi));
        c.lhs = worst_gap;
        c.rhs = 0.0;
        c.slack = tolerance - worst_gap;
        c.holds = worst_gap <= tolerance;
        c.inputs.emplace_back("tolerance", tolerance);
        return c;
    }

    // Infinite endpoints admit only the qualitative growth check: each
    // unbounded side's sample extreme must already exceed the threshold,
    // each finite side must match as above.
    c.relation = Relation::GreaterEq;
    double weakest = kInf;
    if (!std::isfinite(proj.lo)) weakest = std::min(weakest, -emp.lo);
    if (!std::isfinite(proj.hi)) weakest = std::min(weakest, emp.hi);
    bool finite_sides_ok = true;
    if (std::isfinite(proj.lo))
        finite_sides_ok = finite_sides_ok &&
                          std::abs(emp.lo - proj.lo) <= tol.value_or(growth_threshold);
    if (std::isfinite(proj.hi))
        finite_sides_ok = finite_sides_ok &&
                          std::abs(emp.hi - proj.hi) <= tol.value_or(growth_threshold);
    c.lhs = weakest;
    c.rhs = growth_threshold;
    c.slack = weakest - growth_threshold;
    c.holds = finite_sides_ok && weakest >= growth_threshold;
    c.inputs.emplace_back("growth_threshold", growth_threshold);
    return c;
}

} // namespace csep
