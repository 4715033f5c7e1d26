#pragma once

#include <cstddef>
#include <vector>

namespace shellqft {

//! Not-a-knot cubic spline through (x_i, y_i), x strictly increasing, n >= 4.
//! Evaluation outside [x_0, x_{n-1}] throws DomainError.
class CubicSpline {
public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double front() const { return m_x.front(); }
  double back() const { return m_x.back(); }
  const std::vector<double> &knots() const { return m_x; }
  bool empty() const { return m_x.empty(); }

private:
  std::size_t interval(double x) const;
  std::vector<double> m_x, m_y, m_m; // m = second derivatives at knots
};

} // namespace shellqft
