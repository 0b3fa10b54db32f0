#pragma once

// Device description, transmon level structure and the multipoint
// (giant-atom) coupling model.

#include <string>
#include <vector>

#include "giant/common.hpp"

namespace ga::physcore {

/// Static description of one device. Energies are stored as E/hbar and
/// rates as angular frequencies, both in rad/s.
struct DeviceParams {
  double ej_max = 0.0;      // maximum Josephson energy / hbar
  double ec = 0.0;          // charging energy / hbar
  int n_points = 1;         // coupling points N
  double spacing = 0.0;     // distance between adjacent coupling points (m)
  double eps_eff = 1.0;     // effective dielectric constant
  double gamma1_max = 0.0;  // maximum |0>-|1> relaxation rate
  double flux = 0.0;        // external flux in units of the flux quantum

  /// Throws DomainError naming the first violated invariant.
  void validate() const;
  double phase_velocity() const;
  double omega_lambda() const;
};

/// Frequency-dependent relaxation rates on a grid.
struct RateProfile {
  std::vector<double> omega_grid;
  std::vector<double> gamma10;
  std::vector<double> gamma21;
  double omega_cen = 0.0;
  double fwhm = 0.0;  // NaN when the profile has no width (N = 1)
};

struct TransitionFrequencies {
  double omega10;
  double omega21;
};

/// 2*pi*v/spacing with v = c/sqrt(eps_eff).
double omega_lambda(double spacing, double eps_eff);

/// Symmetric-SQUID modulation ej_max*|cos(pi*flux)|.
double josephson_energy(const DeviceParams& params, double flux);

/// omega10 = sqrt(8*ej*ec) - ec, omega21 = omega10 - ec.
TransitionFrequencies transition_frequencies(double ej, double ec);

TransitionFrequencies transition_frequencies_at(const DeviceParams& params, double flux);

/// Interference factor [sin(N*theta/2) / (N*sin(theta/2))]^2 with
/// theta = 2*pi*omega/omega_lambda. Values at theta in 2*pi*Z are 1.
double array_factor(int n_points, double omega, double omega_lambda);

/// Gamma_{j,j-1}(omega) = j * gamma1_max * F_N(omega) for j in {1, 2}.
double relaxation_rate(int level_j, double omega, const DeviceParams& params);

/// Full width at half maximum of F_N around omega_lambda, found by
/// bracketed root finding on each flank.
double profile_fwhm(int n_points, double omega_lambda);

/// Gamma21(omega21) / Gamma10(omega10) at the given flux bias.
double beta_ratio(const DeviceParams& params, double flux);

/// (k21/k10)^2 * gamma10.
double gamma21_from_k_ratio(double k21, double k10, double gamma10);

/// Rabi frequency sqrt(2)*k*sqrt(power).
double rabi_from_power(double k, double power);

/// Samples Gamma10 and Gamma21 of the rate model on omega_grid.
RateProfile rate_profile(const DeviceParams& params, const std::vector<double>& omega_grid);

/// Shipped device presets: "3cp" (three coupling points) or "6cp".
DeviceParams preset(const std::string& name);

}  // namespace ga::physcore
