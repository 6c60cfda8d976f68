#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "csep/analysis.hpp"
#include "csep/geometry.hpp"
#include "csep/sampler.hpp"
#include "csep/spectral.hpp"

namespace csep {

using Json = nlohmann::ordered_json;

// Print a double with 17 significant digits (lossless round trip).
std::string format_double(double v);

Json domain_to_json(const DomainSpec& spec);
DomainSpec domain_from_json(const Json& j);

// Inline comma syntax, e.g. "strip_re,-1,1" or "disk,0,0,1"; normalizes to
// the same DomainSpec the JSON form produces.
DomainSpec parse_inline_domain(const std::string& text);

// Accepts inline syntax or a path to a JSON file.
DomainSpec parse_domain_argument(const std::string& text);

Json certificate_to_json(const Certificate& cert);
Json eig_to_json(const EigResult& eig);
Json sweep_to_json(const TruncationSweep& sweep);
Json rate_estimate_to_json(const RateEstimate& est);

// CSV writers; all floating point at 17 significant digits.
void write_samples_csv(std::ostream& os, std::span<const ExitSample> samples);
void write_survival_csv(std::ostream& os, const SurvivalCurve& curve);
void write_ecdf_csv(std::ostream& os, std::span<const double> samples);
void write_field_csv(std::ostream& os, const GridMask& mask,
                     std::span<const double> values_full_grid);

} // namespace csep
