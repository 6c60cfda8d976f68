// Command-line driver for the planar Brownian exit laboratory: samplers,
// spectral solvers, certificate suite and SVG plots, all reproducible from
// (domain, seed) with deterministic multithreading.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "csep/analysis.hpp"
#include "csep/conformal.hpp"
#include "csep/errors.hpp"
#include "csep/geometry.hpp"
#include "csep/sampler.hpp"
#include "csep/serialize.hpp"
#include "csep/spectral.hpp"
#include "csep/svg.hpp"

namespace fs = std::filesystem;
using namespace csep;

namespace {

constexpr double pi = std::numbers::pi;

struct CommonOpts {
    std::string domain_text = "grim_reaper_u";
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_domain = true) {
    if (with_domain)
        cmd->add_option("--domain", o.domain_text,
                        "domain: inline (e.g. strip_re,-1,1) or JSON file path");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
}

void apply_env(CommonOpts& o) {
    if (const char* dir = std::getenv("CSEP_OUT_DIR"); dir && o.out_dir == ".")
        o.out_dir = dir;
    if (const char* th = std::getenv("CSEP_THREADS"); th && o.threads == 0)
        o.threads = std::atoi(th);
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

// Natural rasterization box for the spectral solvers; strips get walls far
// enough that the closed ends contribute well under the solver tolerances.
Rectangle spectral_bbox(const DomainSpec& spec, double dx) {
    if (const auto* s = std::get_if<StripRe>(&spec)) {
        const double w = s->b - s->a;
        return {s->a, s->b, 0.0, 20.0 * w};
    }
    if (const auto* s = std::get_if<StripIm>(&spec)) {
        const double w = s->d - s->c;
        return {-10.0 * w, 10.0 * w, s->c, s->d};
    }
    if (const auto* r = std::get_if<Rectangle>(&spec)) return *r;
    if (const auto* d = std::get_if<Disk>(&spec))
        return {d->center.x - d->r, d->center.x + d->r, d->center.y - d->r,
                d->center.y + d->r};
    if (const auto* t = std::get_if<TruncatedU>(&spec))
        return {-t->scale, t->scale, grim_reaper_height(0.0, t->scale) - 2.0 * dx,
                t->height};
    throw std::invalid_argument("no finite rasterization box for domain kind '" +
                                domain_kind(spec) + "'");
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

// ---------------------------------------------------------------- sample --

int run_sample(const CommonOpts& o, const std::string& method, long n,
               double shell_eps, double dt, double max_time,
               const std::string& target_text) {
    const DomainSpec spec = parse_domain_argument(o.domain_text);
    const double eps = shell_eps > 0.0 ? shell_eps
                                       : kDefaultShellEpsRel * domain_scale(spec);
    std::vector<ExitSample> samples;
    if (method == "wos")
        samples = wos_batch(spec, {0, 0}, n, eps, kDefaultMaxSteps, o.seed, o.threads);
    else if (method == "euler")
        samples = euler_batch(spec, {0, 0}, n, dt, max_time, o.seed, o.threads);
    else
        throw std::invalid_argument("unknown sampling method '" + method + "'");

    const fs::path dir(o.out_dir);
    {
        std::ostringstream os;
        write_samples_csv(os, samples);
        write_text(dir / "samples.csv", os.str());
    }
    const std::vector<double> xs = re_of(samples);
    {
        std::ostringstream os;
        write_ecdf_csv(os, xs);
        write_text(dir / "ecdf.csv", os.str());
    }

    Json report;
    report["domain"] = domain_to_json(spec);
    report["method"] = method;
    report["n"] = n;
    report["seed"] = o.seed;
    if (method == "wos") report["shell_eps"] = eps;
    if (method == "euler") {
        report["dt"] = dt;
        long censored = 0;
        for (const auto& s : samples) censored += s.censored;
        report["censored"] = censored;
    }
    const Interval support = empirical_support(xs);
    report["support"] = {{"lo", support.lo}, {"hi", support.hi}};
    if (!target_text.empty()) {
        const TargetDistribution target = parse_target(target_text);
        report["target"] = target_name(target);
        report["ks"] = ks_statistic(xs, target);
    }
    write_json(dir / "sample_report.json", report);
    return 0;
}

// ---------------------------------------------------------------- rate-mc --

int run_rate_mc(const CommonOpts& o, long n, double dt, double grid_max,
                double grid_step) {
    const DomainSpec spec = parse_domain_argument(o.domain_text);
    if (grid_max <= 0.0) {
        // Place the fit window well inside the censoring guard using the
        // closed-form rate when one exists.
        const auto cf = closed_form_rate(spec);
        grid_max = cf ? 2.2 * (std::log(1e3) + 1.0) / *cf : 20.0;
    }
    if (grid_step <= 0.0) grid_step = grid_max / 200.0;
    std::vector<double> grid;
    for (double t = grid_step; t <= grid_max + 1e-12; t += grid_step) grid.push_back(t);

    const SurvivalCurve curve =
        survival_curve_parallel(spec, {0, 0}, dt, grid, n, o.seed, o.threads);
    const RateEstimate est = estimate_rate(curve);

    const fs::path dir(o.out_dir);
    {
        std::ostringstream os;
        write_survival_csv(os, curve);
        write_text(dir / "survival.csv", os.str());
    }
    Json j;
    j["domain"] = domain_to_json(spec);
    j["n"] = n;
    j["dt"] = dt;
    j["seed"] = o.seed;
    j["estimate"] = rate_estimate_to_json(est);
    if (const auto cf = closed_form_rate(spec)) j["closed_form_rate"] = *cf;
    write_json(dir / "rate_mc.json", j);
    return 0;
}

// --------------------------------------------------------------- rate-eig --

int run_rate_eig(const CommonOpts& o, double dx, const std::string& heights_text) {
    const DomainSpec spec = parse_domain_argument(o.domain_text);
    const fs::path dir(o.out_dir);
    Json j;
    j["domain"] = domain_to_json(spec);
    j["grid_dx"] = dx;

    if (const auto* u = std::get_if<GrimReaperU>(&spec)) {
        std::vector<double> heights =
            heights_text.empty() ? std::vector<double>{2, 4, 6, 8} : parse_double_list(heights_text);
        for (auto& h : heights) h *= u->scale;
        const TruncationSweep sweep = rate_of_u(u->scale, dx, heights, o.threads);
        j["sweep"] = sweep_to_json(sweep);
        j["rate"] = sweep.extrapolated;
        write_json(dir / "rate_eig.json", j);
        return 0;
    }

    const GridMask mask = rasterize(spec, dx, spectral_bbox(spec, dx));
    const EigResult eig = principal_rate(mask, o.threads);
    j["eig"] = eig_to_json(eig);
    j["rate"] = eig.rate;
    if (const auto cf = closed_form_rate(spec)) j["closed_form_rate"] = *cf;
    write_json(dir / "rate_eig.json", j);
    {
        std::ostringstream os;
        std::vector<double> full(static_cast<std::size_t>(mask.nx) * mask.ny, 0.0);
        long k = 0;
        for (int jj = 0; jj < mask.ny; ++jj)
            for (int ii = 0; ii < mask.nx; ++ii)
                if (mask.is_inside(ii, jj))
                    full[static_cast<std::size_t>(jj) * mask.nx + ii] =
                        eig.eigenvector[static_cast<std::size_t>(k++)];
        write_field_csv(os, mask, full);
        write_text(dir / "eigenvector.csv", os.str());
    }
    return 0;
}

// ---------------------------------------------------------------- torsion --

int run_torsion(const CommonOpts& o, double dx) {
    DomainSpec spec = parse_domain_argument(o.domain_text);
    if (const auto* u = std::get_if<GrimReaperU>(&spec))
        spec = truncate_u(u->scale, 8.0 * u->scale);
    const GridMask mask = rasterize(spec, dx, spectral_bbox(spec, dx));
    const TorsionField field = torsion(mask, o.threads);

    const fs::path dir(o.out_dir);
    {
        std::ostringstream os;
        write_field_csv(os, mask, field.values);
        write_text(dir / "torsion.csv", os.str());
    }
    Json j;
    j["domain"] = domain_to_json(spec);
    j["grid_dx"] = dx;
    j["sup_norm"] = field.sup_norm;
    j["value_at_origin"] = field.value_at_origin;
    j["residual"] = field.residual;
    write_json(dir / "torsion.json", j);
    return 0;
}

// ----------------------------------------------------------------- verify --

int run_verify(const CommonOpts& o, long n_wos, long n_euler, double dx,
               const std::string& heights_text) {
    const DomainSpec spec = parse_domain_argument(o.domain_text);
    Json report;
    report["domain"] = domain_to_json(spec);
    report["seed"] = o.seed;
    report["n_wos"] = n_wos;
    report["n_euler"] = n_euler;
    report["grid_dx"] = dx;
    std::vector<Json> certs;

    // Rate of the domain: truncation sweep for the grim reaper domain,
    // closed form or eigensolve elsewhere; known zero for domains with
    // unbounded inradius.
    double rate = 0.0;
    bool rate_known = true;
    std::optional<GridMask> mask;
    if (const auto* u = std::get_if<GrimReaperU>(&spec)) {
        std::vector<double> heights = heights_text.empty()
                                          ? std::vector<double>{2, 4, 6, 8}
                                          : parse_double_list(heights_text);
        for (auto& h : heights) h *= u->scale;
        const TruncationSweep sweep = rate_of_u(u->scale, dx, heights, o.threads);
        rate = sweep.extrapolated;
        report["rate"] = {{"method", "truncation_sweep"}, {"value", rate},
                          {"sweep", sweep_to_json(sweep)}};
        mask = rasterize(truncate_u(u->scale, heights.back()), dx,
                         Rectangle{-u->scale, u->scale,
                                   grim_reaper_height(0.0, u->scale) - 2.0 * dx,
                                   heights.back()});
    } else if (const auto cf = closed_form_rate(spec)) {
        rate = *cf;
        report["rate"] = {{"method", "closed_form"}, {"value", rate}};
        mask = rasterize(spec, dx, spectral_bbox(spec, dx));
    } else if (std::holds_alternative<HalfPlane>(spec) ||
               std::holds_alternative<Parabola>(spec)) {
        rate = 0.0;  // unbounded inradius
        report["rate"] = {{"method", "known_zero"}, {"value", 0.0}};
    } else {
        try {
            mask = rasterize(spec, dx, spectral_bbox(spec, dx));
            rate = principal_rate(*mask, o.threads).rate;
            report["rate"] = {{"method", "eigensolver"}, {"value", rate}};
        } catch (const std::exception&) {
            rate_known = false;
            report["rate"] = {{"method", "unavailable"}};
        }
    }

    // Exit-position sample and its law.
    const double eps = kDefaultShellEpsRel * domain_scale(spec);
    const auto samples =
        wos_batch(spec, {0, 0}, n_wos, eps, kDefaultMaxSteps, o.seed, o.threads);
    const std::vector<double> xs = re_of(samples);

    std::optional<TargetDistribution> mu;
    if (const auto* u = std::get_if<GrimReaperU>(&spec))
        mu = Uniform{-u->scale, u->scale};
    else if (const auto* s = std::get_if<StripIm>(&spec))
        if (s->c == -1.0 && s->d == 1.0) mu = SechDensity{};
    if (mu) {
        const double ks = ks_statistic(xs, *mu);
        const double threshold = 3.0 * 1.36 / std::sqrt(static_cast<double>(n_wos));
        Certificate c;
        c.name = "embedded_law_ks";
        c.lhs = ks;
        c.rhs = threshold;
        c.relation = Relation::LessEq;
        c.slack = threshold - ks;
        c.holds = ks <= threshold;
        c.inputs = {{"n", static_cast<double>(n_wos)}};
        certs.push_back(certificate_to_json(c));
    }

    // Upper rate bound from the variance of the embedded law (exact when the
    // law is known, empirical otherwise).
    if (rate_known) {
        double variance;
        std::string variance_source;
        if (mu && target_variance(*mu)) {
            variance = *target_variance(*mu);
            variance_source = "target";
        } else {
            double m = 0.0;
            for (double x : xs) m += x;
            m /= static_cast<double>(xs.size());
            variance = 0.0;
            for (double x : xs) variance += (x - m) * (x - m);
            variance /= static_cast<double>(xs.size() - 1);
            variance_source = "empirical";
        }
        Certificate upper =
            check_upper_bound(rate, Uniform{-std::sqrt(3.0 * variance),
                                            std::sqrt(3.0 * variance)},
                              best_known_c2());
        upper.inputs.emplace_back("variance_source",
                                  variance_source == "target" ? 1.0 : 0.0);
        certs.push_back(certificate_to_json(upper));

        // Lower rate bound from the supported width; the eigensolve carries
        // roughly first-order staircase bias, allow 1% of the bound.
        certs.push_back(certificate_to_json(
            check_lower_bound(rate, empirical_support(xs), 0.01 * rate)));
    }

    // Support theorem.
    certs.push_back(certificate_to_json(check_support_theorem(spec, xs)));

    // Optional stopping (needs uncensored exit times).
    const auto euler = euler_batch(spec, {0, 0}, n_euler, kDefaultDt, kDefaultMaxTime,
                                   o.seed + 1, o.threads);
    const bool any_censored =
        std::any_of(euler.begin(), euler.end(), [](const ExitSample& s) { return s.censored; });
    if (!any_censored) {
        certs.push_back(certificate_to_json(check_davis(euler, Axis::Re)));
        certs.push_back(certificate_to_json(check_davis(euler, Axis::Im)));
    } else {
        report["davis_skipped"] = "censored paths present (exit time heavy-tailed)";
    }

    // Monotonicity of the hitting estimate.
    {
        double min_drop = kInf;
        double prev = beurling_lower_bound(0.0);
        const int grid_n = 10000;
        for (int k = 1; k < grid_n; ++k) {
            const double r = static_cast<double>(k) / grid_n;
            const double v = beurling_lower_bound(r);
            min_drop = std::min(min_drop, prev - v);
            prev = v;
        }
        Certificate c;
        c.name = "hitting_bound_monotone";
        c.lhs = min_drop;
        c.rhs = 0.0;
        c.relation = Relation::GreaterEq;
        c.slack = min_drop;
        c.holds = min_drop > 0.0;
        c.inputs = {{"grid_points", static_cast<double>(grid_n)}};
        certs.push_back(certificate_to_json(c));
    }

    // Torsion-spectral product on the rasterized mask.
    if (mask && rate_known && rate > 0.0) {
        const TorsionField field = torsion(*mask, o.threads);
        Certificate c;
        c.name = "torsion_spectral_product";
        c.lhs = rate * field.sup_norm;
        c.rhs = best_known_c2();
        c.relation = Relation::LessEq;
        c.slack = c.rhs - c.lhs;
        c.holds = c.lhs <= c.rhs;
        c.inputs = {{"rate", rate}, {"torsion_sup", field.sup_norm}};
        certs.push_back(certificate_to_json(c));
    }

    bool all_hold = true;
    for (const auto& c : certs) all_hold = all_hold && c.at("holds").get<bool>();
    report["certificates"] = certs;
    report["all_hold"] = all_hold;
    write_json(fs::path(o.out_dir) / "verify.json", report);
    std::cout << (all_hold ? "verify: all certificates hold\n"
                           : "verify: CERTIFICATE FAILURE\n");
    return all_hold ? 0 : 1;
}

// ------------------------------------------------------------------- plot --

std::vector<std::vector<double>> read_csv_columns(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV " + path);
    std::vector<std::vector<double>> cols;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (cols.size() <= c) cols.emplace_back();
            cols[c].push_back(std::stod(cell));
            ++c;
        }
    }
    return cols;
}

int run_plot(const std::string& kind, const std::string& input,
             const std::string& output, const std::string& domain_text) {
    std::string svg_text;
    if (kind == "ecdf") {
        const auto cols = read_csv_columns(input);
        svg_text = svg::line_chart({{cols.at(0), cols.at(1), "#1f6fb2"}}, "x", "F", false);
    } else if (kind == "survival") {
        const auto cols = read_csv_columns(input);
        std::vector<double> frac(cols.at(1).size());
        for (std::size_t k = 0; k < frac.size(); ++k)
            frac[k] = cols.at(1)[k] / cols.at(2)[k];
        svg_text = svg::line_chart({{cols.at(0), frac, "#1f6fb2"}}, "t", "P(tau > t)", true);
    } else if (kind == "domain") {
        svg_text = svg::domain_sketch(parse_domain_argument(domain_text));
    } else if (kind == "field") {
        const auto cols = read_csv_columns(input);
        const auto& xs = cols.at(0);
        double dx = kInf;
        std::vector<double> ux = xs;
        std::sort(ux.begin(), ux.end());
        for (std::size_t k = 1; k < ux.size(); ++k)
            if (ux[k] > ux[k - 1] + 1e-15) dx = std::min(dx, ux[k] - ux[k - 1]);
        if (!std::isfinite(dx)) dx = 1.0;
        svg_text = svg::heat_map(xs, cols.at(1), cols.at(2), dx);
    } else {
        throw std::invalid_argument("unknown plot kind '" + kind + "'");
    }
    write_text(output, svg_text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planar Brownian exit laboratory"};
    app.require_subcommand(1);

    CommonOpts o;

    // sample
    auto* sample = app.add_subcommand("sample", "draw exit positions / exit times");
    std::string method = "wos", target_text;
    long n = 100000;
    double shell_eps = 0.0, dt = kDefaultDt, max_time = kDefaultMaxTime;
    add_common(sample, o);
    sample->add_option("--method", method, "wos | euler");
    sample->add_option("--n", n, "number of samples")->check(CLI::PositiveNumber);
    sample->add_option("--shell-eps", shell_eps, "WoS stopping shell (0 = default)");
    sample->add_option("--dt", dt, "Euler time step");
    sample->add_option("--max-time", max_time, "Euler censoring horizon");
    sample->add_option("--target", target_text, "reference law for the KS report");

    // rate-mc
    auto* rate_mc = app.add_subcommand("rate-mc", "tail rate from a survival curve");
    long n_mc = 1000000;
    double mc_dt = kDefaultDt, grid_max = 0.0, grid_step = 0.0;
    add_common(rate_mc, o);
    rate_mc->add_option("--n", n_mc, "number of paths")->check(CLI::PositiveNumber);
    rate_mc->add_option("--dt", mc_dt, "Euler time step");
    rate_mc->add_option("--grid-max", grid_max, "largest grid time (0 = auto)");
    rate_mc->add_option("--grid-step", grid_step, "grid spacing (0 = auto)");

    // rate-eig
    auto* rate_eig = app.add_subcommand("rate-eig", "principal Dirichlet rate");
    double eig_dx = 0.01;
    std::string heights_text;
    add_common(rate_eig, o);
    rate_eig->add_option("--grid-dx", eig_dx, "grid spacing");
    rate_eig->add_option("--heights", heights_text,
                         "truncation heights for the grim reaper sweep (comma list)");

    // torsion
    auto* tors = app.add_subcommand("torsion", "expected exit time field");
    double tors_dx = 0.01;
    add_common(tors, o);
    tors->add_option("--grid-dx", tors_dx, "grid spacing");

    // verify
    auto* verify = app.add_subcommand("verify", "run the certificate suite");
    long n_wos = 200000, n_euler = 20000;
    double verify_dx = 0.02;
    std::string verify_heights;
    add_common(verify, o);
    verify->add_option("--n-wos", n_wos, "exit-position samples")->check(CLI::PositiveNumber);
    verify->add_option("--n-euler", n_euler, "exit-time samples")->check(CLI::PositiveNumber);
    verify->add_option("--grid-dx", verify_dx, "grid spacing for the spectral checks");
    verify->add_option("--heights", verify_heights, "truncation heights (comma list)");

    // plot
    auto* plot = app.add_subcommand("plot", "render a CSV artifact as SVG");
    std::string plot_kind = "ecdf", plot_in, plot_out = "plot.svg", plot_domain;
    plot->add_option("--kind", plot_kind, "ecdf | survival | domain | field");
    plot->add_option("--in", plot_in, "input CSV");
    plot->add_option("--out", plot_out, "output SVG file");
    plot->add_option("--domain", plot_domain, "domain (for --kind domain)");

    CLI11_PARSE(app, argc, argv);
    apply_env(o);

    try {
        if (sample->parsed())
            return run_sample(o, method, n, shell_eps, dt, max_time, target_text);
        if (rate_mc->parsed()) return run_rate_mc(o, n_mc, mc_dt, grid_max, grid_step);
        if (rate_eig->parsed()) return run_rate_eig(o, eig_dx, heights_text);
        if (tors->parsed()) return run_torsion(o, tors_dx);
        if (verify->parsed())
            return run_verify(o, n_wos, n_euler, verify_dx, verify_heights);
        if (plot->parsed()) return run_plot(plot_kind, plot_in, plot_out, plot_domain);
    } catch (const std::exception& e) {
        Json err;
        err["error"] = {{"type", typeid(e).name()}, {"message", e.what()}};
        std::cout << err.dump(2) << std::endl;
        return 1;
    }
    return 0;
}
