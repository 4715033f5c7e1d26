#pragma once

#include "shellqft/errors.hpp"

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>

namespace shellqft::ode {

struct StepControl {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 20'000'000;
};

struct Statistics {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/*!
  @brief Embedded Runge-Kutta-Fehlberg 7(8) driver with caller-supplied error
  norm and step ceiling.

  The tableau comes from Boost.Odeint; step acceptance and sizing live here so the
  radial solver can measure the error against the local oscillation amplitude
  rather than per component (rho passes through zero every half wavelength).

  `System` is `void(const State&, State& dydt, double t)`.
  `Norm` is `double(const State& y, const State& err)` returning the error
  already scaled by the tolerances (accept when <= 1).
  `MaxStep` is `double(double t, const State& y)`.
*/
template <std::size_t N> class AdaptiveIntegrator {
public:
  using State = std::array<double, N>;

  explicit AdaptiveIntegrator(StepControl control) : m_control(control) {}

  const StepControl &control() const { return m_control; }
  const Statistics &statistics() const { return m_stats; }

  //! Integrate from t to t_end (either direction), landing exactly on t_end.
  //! `h` carries the suggested step size in and out between calls.
  template <class System, class Norm, class MaxStep>
  void advance(System &&system, Norm &&norm, MaxStep &&max_step, State &y,
               double &t, double t_end, double &h) {
    advance(system, norm, max_step, y, t, t_end, h,
            [](double, const State &) {});
  }

  //! As above; `observer(t, y)` is called after every accepted step.
  template <class System, class Norm, class MaxStep, class Observer>
  void advance(System &&system, Norm &&norm, MaxStep &&max_step, State &y,
               double &t, double t_end, double &h, Observer &&observer) {
    const double dir = t_end >= t ? 1.0 : -1.0;
    if (t == t_end)
      return;
    if (!(h > 0.0))
      h = std::min(std::abs(t_end - t), max_step(t, y)) * 0.1;
    State err{};
    while (dir * (t_end - t) > 0.0) {
      if (m_stats.accepted + m_stats.rejected >= m_control.max_steps) {
        std::ostringstream msg;
        msg << "step budget of " << m_control.max_steps
            << " exhausted at t=" << t << " (target " << t_end << ")";
        throw NumericalError(msg.str());
      }
      double step = std::min({h, max_step(t, y), std::abs(t_end - t)});
      const bool last = step >= std::abs(t_end - t);
      if (step <= 1e-14 * std::max(1.0, std::abs(t))) {
        std::ostringstream msg;
        msg << "step size underflow (h=" << step << ") at t=" << t;
        throw NumericalError(msg.str());
      }
      State trial = y;
      m_stepper.do_step(system, trial, t, dir * step, err);
      const double e = norm(trial, err);
      if (!std::isfinite(e)) {
        m_stats.rejected++;
        h = 0.25 * step;
        continue;
      }
      if (e <= 1.0) {
        y = trial;
        t = last ? t_end : t + dir * step;
        m_stats.accepted++;
        const double grow = e > 0.0 ? 0.9 * std::pow(e, -1.0 / 8.0) : 5.0;
        const double next = step * std::clamp(grow, 0.2, 5.0);
        // a step clipped to land on t_end says nothing about the natural size
        h = last ? std::max(h, next) : next;
        observer(t, y);
      } else {
        m_stats.rejected++;
        h = step * std::clamp(0.9 * std::pow(e, -1.0 / 7.0), 0.1, 0.9);
      }
    }
  }

private:
  StepControl m_control;
  Statistics m_stats;
  boost::numeric::odeint::runge_kutta_fehlberg78<State> m_stepper;
};

} // namespace shellqft::ode
