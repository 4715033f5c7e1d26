#include "shellqft/spline.hpp"
#include "shellqft/errors.hpp"

#include <algorithm>
#include <string>

namespace shellqft {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : m_x(std::move(x)), m_y(std::move(y)) {
  const std::size_t n = m_x.size();
  if (n < 4 || m_y.size() != n)
    throw DomainError("cubic spline needs at least 4 matching samples");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(m_x[i + 1] > m_x[i]))
      throw DomainError("spline knots must be strictly increasing");

  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = m_x[i + 1] - m_x[i];
    d[i] = (m_y[i + 1] - m_y[i]) / h[i];
  }
  // Tridiagonal system for M_1..M_{n-2}; not-a-knot conditions eliminate
  // M_0 and M_{n-1}.
  const std::size_t k = n - 2;
  std::vector<double> lo(k, 0.0), di(k, 0.0), up(k, 0.0), rhs(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t i = j + 1;
    lo[j] = h[i - 1];
    di[j] = 2.0 * (h[i - 1] + h[i]);
    up[j] = h[i];
    rhs[j] = 6.0 * (d[i] - d[i - 1]);
  }
  const double h0 = h[0], h1 = h[1];
  di[0] += h0 * (h0 + h1) / h1;
  up[0] -= h0 * h0 / h1;
  const double ha = h[n - 3], hb = h[n - 2];
  di[k - 1] += hb * (ha + hb) / ha;
  lo[k - 1] -= hb * hb / ha;

  for (std::size_t j = 1; j < k; ++j) {
    const double w = lo[j] / di[j - 1];
    di[j] -= w * up[j - 1];
    rhs[j] -= w * rhs[j - 1];
  }
  std::vector<double> inner(k);
  inner[k - 1] = rhs[k - 1] / di[k - 1];
  for (std::size_t j = k - 1; j-- > 0;)
    inner[j] = (rhs[j] - up[j] * inner[j + 1]) / di[j];

  m_m.assign(n, 0.0);
  for (std::size_t j = 0; j < k; ++j)
    m_m[j + 1] = inner[j];
  m_m[0] = ((h0 + h1) * m_m[1] - h0 * m_m[2]) / h1;
  m_m[n - 1] = ((ha + hb) * m_m[n - 2] - hb * m_m[n - 3]) / ha;
}

std::size_t CubicSpline::interval(double x) const {
  if (!(x >= m_x.front() && x <= m_x.back()))
    throw DomainError("spline evaluated outside [" +
                      std::to_string(m_x.front()) + ", " +
                      std::to_string(m_x.back()) + "] at " +
                      std::to_string(x));
  auto it = std::upper_bound(m_x.begin(), m_x.end(), x);
  std::size_t i = std::size_t(it - m_x.begin());
  if (i == 0)
    return 0;
  return std::min(i - 1, m_x.size() - 2);
}

double CubicSpline::operator()(double x) const {
  const std::size_t i = interval(x);
  const double h = m_x[i + 1] - m_x[i];
  const double a = (m_x[i + 1] - x) / h;
  const double b = (x - m_x[i]) / h;
  return a * m_y[i] + b * m_y[i + 1] +
         ((a * a * a - a) * m_m[i] + (b * b * b - b) * m_m[i + 1]) * h * h /
             6.0;
}

} // namespace shellqft
