#pragma once

// Coherent scattering of a probe tone off the |0>-|1> transition of an
// emitter side-coupled to an open transmission line.

#include <vector>

#include "giant/common.hpp"
#include "giant/parallel.hpp"
#include "giant/physcore.hpp"

namespace ga::scatter2 {

struct TwoLevelParams {
  double omega10 = 0.0;
  double gamma10 = 0.0;    // radiative relaxation
  double gamma_phi = 0.0;  // dephasing (pure dephasing plus nonradiative decay)
  double omega_p_drive = 0.0;

  /// Total decoherence gamma10/2 + gamma_phi.
  double decoherence() const { return 0.5 * gamma10 + gamma_phi; }
  /// Gamma10 / (2 * decoherence()).
  double r0() const { return gamma10 / (2.0 * decoherence()); }
};

/// t = 1 - r0 (1 - i x) / (1 + x^2 + Omega_p^2/(Gamma10 gamma10)),
/// x = (probe_omega - omega10)/gamma10.
cplx transmission_two_level(double probe_omega, const TwoLevelParams& p);

/// |t|^2 on resonance for each drive power, Omega_p = sqrt(2) k10 sqrt(P).
std::vector<double> transmittance_on_resonance(const TwoLevelParams& p,
                                               const std::vector<double>& power_grid, double k10);

/// Background-free spectroscopy map. Rows follow flux_grid, columns
/// probe_grid (rad/s). Each row uses omega10(flux) and Gamma10(omega10)
/// from the device model with a fixed dephasing rate.
ComplexMap spectroscopy_map(const physcore::DeviceParams& device, const std::vector<double>& flux_grid,
                            const std::vector<double>& probe_grid, double gamma_phi,
                            double omega_p_drive = 0.0, Exec exec = Exec::parallel);

}  // namespace ga::scatter2
