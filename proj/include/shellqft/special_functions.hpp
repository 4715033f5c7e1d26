#pragma once

#include <vector>

namespace shellqft {

//! Spherical Bessel function j_l(x), x >= 0.
double sph_bessel_j(int l, double x);

//! Derivative d/dx j_l(x).
double sph_bessel_j_prime(int l, double x);

//! j_0(x) .. j_lmax(x) in one sweep.
std::vector<double> sph_bessel_j_array(int lmax, double x);

} // namespace shellqft
