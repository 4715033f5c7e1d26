#pragma once

#include <memory>
#include <string>
#include <vector>

namespace shellqft {

/*!
  @brief Switching function chi(tau) of the detector coupling and its unitary
  Fourier transform chi^(Omega) = (2 pi)^(-1/2) int chi(tau) e^{-i Omega tau}.

  Gaussian     chi = exp(-tau^2 / 2 sigma^2)
  Lorentzian   chi = 1 / (1 + (tau/sigma)^2)
  CompactBump  the Gaussian multiplied by a smooth window that is 1 for
               |tau| <= (1 - taper) w and vanishes with all derivatives at
               |tau| = w (w = support_halfwidth)

  All three are real and even, so chi^ is real and even.
*/
class SwitchingSpec {
public:
  enum class Kind { Gaussian, Lorentzian, CompactBump };

  static SwitchingSpec gaussian(double sigma);
  static SwitchingSpec lorentzian(double sigma);
  //! support_halfwidth >= 3 sigma; taper in (0, 1].
  static SwitchingSpec compact_bump(double sigma, double support_halfwidth,
                                    double taper = 0.1);

  Kind kind() const { return m_kind; }
  double sigma() const { return m_sigma; }
  double support_halfwidth() const { return m_halfwidth; }
  double taper() const { return m_taper; }

  //! chi(tau)
  double profile(double tau) const;
  //! chi^(Omega)
  double ft(double omega) const;
  //! |chi^(Omega)|^2
  double ft_squared(double omega) const;

  //! |Omega| beyond which |chi^|^2 is negligible: Gaussian 12/sigma and
  //! Lorentzian 69/sigma (both ~1e-60 of the peak); CompactBump where it
  //! stays below 1e-20 of the peak.
  double tail_extent() const;
  //! int chi^2 dtau, analytic for Gaussian and Lorentzian.
  double energy() const;
  //! Omega values where |chi^|^2 is not smooth (the Lorentzian cusp at 0).
  bool has_cusp() const { return m_kind == Kind::Lorentzian; }

private:
  SwitchingSpec(Kind kind, double sigma) : m_kind(kind), m_sigma(sigma) {}
  double window(double tau) const;

  Kind m_kind;
  double m_sigma;
  double m_halfwidth = 0.0;
  double m_taper = 0.0;

  // CompactBump: chi^(Omega) = sum_k c_k cos(Omega tau_k)
  struct CosineTable {
    std::vector<double> nodes;
    std::vector<double> weights;
    double tail = 0.0;
    double energy = 0.0;
  };
  std::shared_ptr<const CosineTable> m_table;
};

const char *to_string(SwitchingSpec::Kind k);

//! |int chi^2 dtau - int |chi^|^2 dOmega| / int chi^2 dtau, both numerically.
double parseval_check(const SwitchingSpec &sw);

/*!
  Adiabatic (sigma -> infinity) reading of the response at gap Omega:
  |chi^(Omega + omega~)|^2 becomes proportional to delta(Omega + omega~), so
  only the mode omega~ = -Omega contributes, which exists when Omega < 0.
*/
struct AdiabaticWeight {
  bool excited;          //!< Omega < 0: some positive-frequency mode is selected
  double selected_omega; //!< -Omega when excited, otherwise 0
};
AdiabaticWeight adiabatic_limit_weight(double gap);

} // namespace shellqft
