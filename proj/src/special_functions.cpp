#include "shellqft/special_functions.hpp"
#include "shellqft/errors.hpp"

#include <algorithm>
#include <cmath>

namespace shellqft {

namespace {

// Power series, used for x < 1 where it converges quickly for every l.
double series_j(int l, double x) {
  double lead = 1.0;
  for (int k = 1; k <= l; ++k) {
    lead *= x / double(2 * k + 1);
    if (lead == 0.0)
      return 0.0;
  }
  const double z = -0.5 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= z / (double(k) * double(2 * l + 2 * k + 1));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum))
      break;
  }
  return lead * sum;
}

double j0_closed(double x) { return std::sin(x) / x; }
double j1_closed(double x) {
  return (std::sin(x) / x - std::cos(x)) / x;
}

// Miller's algorithm: recur downward from well above max(l, x), normalise
// against whichever of the closed forms j_0, j_1 is better conditioned.
void downward(int lmax, double x, std::vector<double> &out) {
  const int start =
      std::max(lmax, int(x)) + 20 + int(std::sqrt(40.0 * (std::max(lmax, int(x)) + 1)));
  std::vector<double> tmp(std::size_t(start) + 2, 0.0);
  tmp[std::size_t(start) + 1] = 0.0;
  tmp[std::size_t(start)] = 1e-300;
  for (int k = start; k >= 1; --k) {
    tmp[std::size_t(k) - 1] =
        double(2 * k + 1) / x * tmp[std::size_t(k)] - tmp[std::size_t(k) + 1];
    if (std::abs(tmp[std::size_t(k) - 1]) > 1e250) {
      for (int m = k - 1; m <= start; ++m)
        tmp[std::size_t(m)] *= 1e-250;
    }
  }
  const double j0 = j0_closed(x);
  const double j1 = j1_closed(x);
  const double scale =
      std::abs(j0) >= std::abs(j1) ? j0 / tmp[0] : j1 / tmp[1];
  for (int k = 0; k <= lmax; ++k)
    out[std::size_t(k)] = tmp[std::size_t(k)] * scale;
}

} // namespace

std::vector<double> sph_bessel_j_array(int lmax, double x) {
  if (lmax < 0)
    throw DomainError("spherical Bessel order must be nonnegative");
  if (!(x >= 0.0))
    throw DomainError("spherical Bessel argument must be nonnegative");
  std::vector<double> out(std::size_t(lmax) + 1, 0.0);
  if (x < 1.0) {
    for (int l = 0; l <= lmax; ++l)
      out[std::size_t(l)] = series_j(l, x);
    return out;
  }
  out[0] = j0_closed(x);
  if (lmax == 0)
    return out;
  out[1] = j1_closed(x);
  if (lmax == 1)
    return out;
  // upward recurrence is stable while l < x
  const int up_to = std::min(lmax, int(x));
  for (int k = 1; k < up_to; ++k)
    out[std::size_t(k) + 1] =
        double(2 * k + 1) / x * out[std::size_t(k)] - out[std::size_t(k) - 1];
  if (up_to < lmax) {
    std::vector<double> down(std::size_t(lmax) + 1, 0.0);
    downward(lmax, x, down);
    for (int k = std::max(up_to, 2); k <= lmax; ++k)
      out[std::size_t(k)] = down[std::size_t(k)];
  }
  return out;
}

double sph_bessel_j(int l, double x) {
  if (l < 0)
    throw DomainError("spherical Bessel order must be nonnegative");
  if (x < 1.0)
    return series_j(l, x);
  if (l == 0)
    return j0_closed(x);
  if (l == 1)
    return j1_closed(x);
  return sph_bessel_j_array(l, x)[std::size_t(l)];
}

double sph_bessel_j_prime(int l, double x) {
  if (l == 0)
    return -sph_bessel_j(1, x);
  if (x == 0.0)
    return l == 1 ? 1.0 / 3.0 : 0.0;
  const auto j = sph_bessel_j_array(l, x);
  return j[std::size_t(l) - 1] - double(l + 1) / x * j[std::size_t(l)];
}

} // namespace shellqft
