#include "csep/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace csep {

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json domain_to_json(const DomainSpec& spec) {
    Json j;
    j["kind"] = domain_kind(spec);
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, StripRe>) {
                j["a"] = d.a;
                j["b"] = d.b;
            } else if constexpr (std::is_same_v<T, StripIm>) {
                j["c"] = d.c;
                j["d"] = d.d;
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                j["x0"] = d.x0;
                j["x1"] = d.x1;
                j["y0"] = d.y0;
                j["y1"] = d.y1;
            } else if constexpr (std::is_same_v<T, Disk>) {
                j["center"] = {{"x", d.center.x}, {"y", d.center.y}};
                j["r"] = d.r;
            } else if constexpr (std::is_same_v<T, GrimReaperU>) {
                j["scale"] = d.scale;
            } else if constexpr (std::is_same_v<T, TruncatedU>) {
                j["scale"] = d.scale;
                j["H"] = d.height;
            } else if constexpr (std::is_same_v<T, Polygon>) {
                Json verts = Json::array();
                for (const auto& v : d.vertices)
                    verts.push_back({{"x", v.x}, {"y", v.y}});
                j["vertices"] = std::move(verts);
            }
        },
        spec);
    return j;
}

DomainSpec domain_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "half_plane") return HalfPlane{};
    if (kind == "strip_re") return StripRe{j.at("a").get<double>(), j.at("b").get<double>()};
    if (kind == "strip_im") return StripIm{j.at("c").get<double>(), j.at("d").get<double>()};
    if (kind == "rectangle")
        return Rectangle{j.at("x0").get<double>(), j.at("x1").get<double>(),
                         j.at("y0").get<double>(), j.at("y1").get<double>()};
    if (kind == "disk")
        return Disk{{j.at("center").at("x").get<double>(),
                     j.at("center").at("y").get<double>()},
                    j.at("r").get<double>()};
    if (kind == "grim_reaper_u") return GrimReaperU{j.value("scale", 1.0)};
    if (kind == "truncated_u")
        return TruncatedU{j.at("scale").get<double>(), j.at("H").get<double>()};
    if (kind == "parabola") return Parabola{};
    if (kind == "polygon") {
        Polygon p;
        for (const auto& v : j.at("vertices"))
            p.vertices.push_back({v.at("x").get<double>(), v.at("y").get<double>()});
        return p;
    }
    throw std::invalid_argument("unknown domain kind '" + kind + "'");
}

DomainSpec parse_inline_domain(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.empty()) throw std::invalid_argument("empty domain spec");
    const std::string& kind = parts[0];
    const auto need = [&](std::size_t n) {
        if (parts.size() != n + 1)
            throw std::invalid_argument("domain '" + kind + "' expects " +
                                        std::to_string(n) + " parameters");
    };
    if (kind == "half_plane") {
        need(0);
        return HalfPlane{};
    }
    if (kind == "strip_re") {
        need(2);
        return StripRe{std::stod(parts[1]), std::stod(parts[2])};
    }
    if (kind == "strip_im") {
        need(2);
        return StripIm{std::stod(parts[1]), std::stod(parts[2])};
    }
    if (kind == "rectangle") {
        need(4);
        return Rectangle{std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3]),
                         std::stod(parts[4])};
    }
    if (kind == "disk") {
        need(3);
        return Disk{{std::stod(parts[1]), std::stod(parts[2])}, std::stod(parts[3])};
    }
    if (kind == "grim_reaper_u") {
        if (parts.size() == 1) return GrimReaperU{1.0};
        need(1);
        return GrimReaperU{std::stod(parts[1])};
    }
    if (kind == "truncated_u") {
        need(2);
        return TruncatedU{std::stod(parts[1]), std::stod(parts[2])};
    }
    if (kind == "parabola") {
        need(0);
        return Parabola{};
    }
    throw std::invalid_argument("unknown domain kind '" + kind +
                                "' (polygons require a JSON file)");
}

DomainSpec parse_domain_argument(const std::string& text) {
    if (text.find(".json") != std::string::npos || text.front() == '@') {
        const std::string path = text.front() == '@' ? text.substr(1) : text;
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open domain file '" + path + "'");
        Json j;
        in >> j;
        return domain_from_json(j);
    }
    return parse_inline_domain(text);
}

namespace {

const char* relation_symbol(Relation r) {
    switch (r) {
        case Relation::LessEq: return "<=";
        case Relation::GreaterEq: return ">=";
        default: return "~=";
    }
}

} // namespace

Json certificate_to_json(const Certificate& cert) {
    Json j;
    j["name"] = cert.name;
    j["relation"] = relation_symbol(cert.relation);
    j["lhs"] = cert.lhs;
    j["rhs"] = cert.rhs;
    j["slack"] = cert.slack;
    j["holds"] = cert.holds;
    Json inputs;
    for (const auto& [k, v] : cert.inputs) inputs[k] = v;
    j["inputs"] = std::move(inputs);
    return j;
}

Json eig_to_json(const EigResult& eig) {
    Json j;
    j["rate"] = eig.rate;
    j["raw_eigenvalue"] = eig.raw_eigenvalue;
    j["iterations"] = eig.iterations;
    j["residual"] = eig.residual;
    return j;
}

Json sweep_to_json(const TruncationSweep& sweep) {
    Json j;
    j["heights"] = sweep.heights;
    j["rates"] = sweep.rates;
    j["rate_at_max_height"] = sweep.rate_at_max_height;
    j["extrapolated"] = sweep.extrapolated;
    return j;
}

Json rate_estimate_to_json(const RateEstimate& est) {
    Json j;
    j["lambda"] = est.lambda;
    j["stderr"] = est.stderr_lambda;
    j["window"] = {{"t_lo", est.t_lo}, {"t_hi", est.t_hi}};
    j["n_points"] = est.n_points;
    return j;
}

void write_samples_csv(std::ostream& os, std::span<const ExitSample> samples) {
    os << "re,im,time,steps,censored\n";
    for (const auto& s : samples)
        os << format_double(s.position.x) << ',' << format_double(s.position.y) << ','
           << format_double(s.time) << ',' << s.steps << ',' << (s.censored ? 1 : 0)
           << '\n';
}

void write_survival_csv(std::ostream& os, const SurvivalCurve& curve) {
    os << "t,survivors,n_total\n";
    for (std::size_t j = 0; j < curve.times.size(); ++j)
        os << format_double(curve.times[j]) << ',' << curve.survivors[j] << ','
           << curve.n_total << '\n';
}

void write_ecdf_csv(std::ostream& os, std::span<const double> samples) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    os << "x,F\n";
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        os << format_double(sorted[i]) << ',' << format_double((i + 1) / n) << '\n';
}

void write_field_csv(std::ostream& os, const GridMask& mask,
                     std::span<const double> values_full_grid) {
    os << "x,y,value\n";
    for (int j = 0; j < mask.ny; ++j)
        for (int i = 0; i < mask.nx; ++i) {
            if (!mask.is_inside(i, j)) continue;
            const Point p = mask.node(i, j);
            os << format_double(p.x) << ',' << format_double(p.y) << ','
               << format_double(values_full_grid[static_cast<std::size_t>(j) * mask.nx + i])
               << '\n';
        }
}

} // namespace csep
