#pragma once

#include <string>
#include <vector>

#include "csep/geometry.hpp"

namespace csep {

// Standalone SVG renderers for the CSV artifacts the CLI produces. The
// numeric payload is carried verbatim in the path data; styling is fixed.
namespace svg {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb2";
};

// Line chart with axes; set log_y to plot log10 of the y values.
std::string line_chart(const std::vector<Series>& series, const std::string& x_label,
                       const std::string& y_label, bool log_y = false);

// Boundary sketch of a domain (curves sampled at plotting resolution).
std::string domain_sketch(const DomainSpec& spec);

// Heat map of scattered grid values (x, y, v) with square cells of side dx.
std::string heat_map(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& v, double dx);

} // namespace svg
} // namespace csep
