#pragma once

#include "shellqft/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <sstream>
#include <span>
#include <vector>

namespace shellqft::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
};

struct Tolerance {
  double rel = 1e-10;
  double abs = 0.0;
  std::size_t max_panels = 200'000;
};

namespace detail {
struct Panel {
  double a, b, value, error;
  bool operator<(const Panel &o) const { return error < o.error; }
};

template <class F> Panel gk21(F &f, double a, double b) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
          f, a, b, 0, 0.0, &err);
  // with max_depth = 0 Boost reports |K - G| on the reference interval
  // [-1, 1]; rescale to [a, b]
  return {a, b, v, err * 0.5 * (b - a)};
}
} // namespace detail

/*!
  Globally adaptive Gauss-Kronrod (21-point) integration over the intervals
  between consecutive `breaks`. The panel with the largest error estimate is
  bisected until the summed error meets max(abs, rel*|I|).
*/
template <class F>
Result integrate(F &&f, std::span<const double> breaks, const Tolerance &tol) {
  if (breaks.size() < 2)
    return {};
  std::priority_queue<detail::Panel> queue;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i]))
      continue;
    auto p = detail::gk21(f, breaks[i], breaks[i + 1]);
    total += p.value;
    total_err += p.error;
    queue.push(p);
  }
  while (total_err > std::max(tol.abs, tol.rel * std::abs(total)) &&
         !queue.empty()) {
    if (queue.size() >= tol.max_panels) {
      std::ostringstream msg;
      msg << "quadrature did not converge: estimate " << total
          << " with error " << total_err << " after " << queue.size()
          << " panels";
      throw NumericalError(msg.str());
    }
    const auto worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      queue.push(worst); // cannot split further
      break;
    }
    auto left = detail::gk21(f, worst.a, mid);
    auto right = detail::gk21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // resum in interval order so the result does not depend on heap layout
  std::vector<detail::Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const auto &x, const auto &y) { return x.a < y.a; });
  Result out;
  out.panels = panels.size();
  for (const auto &p : panels) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

template <class F>
Result integrate(F &&f, double a, double b, const Tolerance &tol) {
  const double breaks[2] = {a, b};
  return integrate(std::forward<F>(f), std::span<const double>(breaks), tol);
}

} // namespace shellqft::quad
