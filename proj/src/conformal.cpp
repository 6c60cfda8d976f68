#include "csep/conformal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csep {

namespace {
constexpr double pi = std::numbers::pi;
const std::complex<double> I{0.0, 1.0};
} // namespace

std::complex<double> map_u_to_h(std::complex<double> z) {
    return 2.0 * I * std::exp(-0.5 * pi * I * z) - I;
}

std::complex<double> map_u_to_h_derivative(std::complex<double> z) {
    return pi * std::exp(-0.5 * pi * I * z);
}

std::complex<double> foliation_image(double x, double y) {
    if (!(std::abs(x) < 1.0) || !(y >= 0.0))
        throw std::domain_error("foliation_image: requires |x| < 1 and y >= 0");
    const double lift = std::exp(pi * y / 2.0);
    return {lift * std::tan(pi * x / 2.0), lift - 1.0};
}

std::complex<double> inverse_map_h_to_u(std::complex<double> w) {
    if (!(w.imag() > 0.0))
        throw std::domain_error("inverse_map_h_to_u: requires Im w > 0");
    return (2.0 * I / pi) * std::log((w + I) / (2.0 * I));
}

double exact_cdf_re_exit_u(double x) {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return 0.5 * (x + 1.0);
}

double exact_exit_sampler_u(RandomStream& rng) {
    return (2.0 / pi) * std::atan(rng.cauchy());
}

} // namespace csep
