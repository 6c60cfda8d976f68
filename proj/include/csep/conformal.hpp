#pragma once

#include <complex>

#include "csep/rng.hpp"

namespace csep {

// Conformal map f(z) = 2i exp(-i pi z / 2) - i taking the unit grim reaper
// domain onto the upper half-plane with f(0) = i; boundary goes to the real
// line. Entire as a formula, so no domain checks here.
std::complex<double> map_u_to_h(std::complex<double> z);

// Analytic derivative f'(z) = pi exp(-i pi z / 2).
std::complex<double> map_u_to_h_derivative(std::complex<double> z);

// Image of the point of the curve foliation at abscissa x lifted by y >= 0:
// exp(pi y/2) tan(pi x/2) + i (exp(pi y/2) - 1). Agrees with
// map_u_to_h(x + i(h(x)+y)). Requires |x| < 1, y >= 0.
std::complex<double> foliation_image(double x, double y);

// Principal-branch inverse z = (2i/pi) log((w+i)/(2i)); requires Im w > 0.
std::complex<double> inverse_map_h_to_u(std::complex<double> w);

// CDF of Re of the exit position from the unit grim reaper domain started
// at 0: the uniform law on [-1,1].
double exact_cdf_re_exit_u(double x);

// Push one standard Cauchy draw back through the map: (2/pi) atan(C).
// Distributed exactly as Re of the exit position from the unit domain.
double exact_exit_sampler_u(RandomStream& rng);

} // namespace csep
