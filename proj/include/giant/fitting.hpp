#pragma once

// Fitting pipelines built on nlls_solve: single-tone spectroscopy fits,
// Rabi-frequency calibrations and master-equation map fits.

#include <vector>

#include "giant/common.hpp"
#include "giant/lambda3.hpp"
#include "giant/nlls.hpp"
#include "giant/scatter2.hpp"

namespace ga::fitcore {

struct TwoLevelInit {
  double omega10 = 0.0;
  double gamma10 = 0.0;
  double gamma_phi = 0.0;
  double omega_p = 0.0;
};

/// Which transmission parameters are varied; the rest stay at their initial values.
struct TwoLevelMask {
  bool gamma10 = true;
  bool gamma_phi = true;
  bool omega10 = true;
  bool omega_p = true;
};

struct TwoLevelFit {
  FitReport report;  // parameters: gamma10, gamma_phi, omega10, omega_p_sq
  scatter2::TwoLevelParams params;
  double decoherence = 0.0;  // gamma10/2 + gamma_phi
  double r0 = 0.0;
  bool decoupled = false;  // Gamma10 consistent with zero
};

/// Starting point read off the deepest point and half-depth width of |1 - t|.
TwoLevelInit guess_two_level(const Spectrum& spectrum);

/// Fits the two-level transmission to a background-free spectrum. Real and
/// imaginary parts are weighted equally. A spectrum without a resolvable dip
/// returns with decoupled = true instead of throwing.
TwoLevelFit fit_two_level(const Spectrum& spectrum, const TwoLevelInit& init, const TwoLevelMask& mask = {});

struct AtsCalibration {
  std::vector<double> splitting;  // doublet separation per linecut (rad/s)
  double slope = 0.0;             // d splitting / d sqrt(P)
  double k = 0.0;                 // slope / sqrt(2)
  std::vector<FitReport> fits;
};

/// Doublet separation 2*delta0 of one linecut. The linecut frequency axis is
/// the probe detuning from the bare transition; the two-Lorentzian model is
/// fitted to the absorption -Re(t - 1). Throws NumericalError when the
/// separation is below the fitted linewidth.
double doublet_splitting(const Spectrum& linecut, FitReport* report = nullptr);

/// Per-power doublet splitting and the coupling constant from a line
/// through the origin of splitting versus sqrt(P).
AtsCalibration extract_ats_splitting(const std::vector<Spectrum>& linecuts, const std::vector<double>& powers);

/// k from a line through the origin of Rabi frequency versus sqrt(P),
/// Omega = sqrt(2) k sqrt(P).
double k_from_rabi_slope(const std::vector<double>& powers, const std::vector<double>& rabi);

struct PowerPoint {
  double power = 0.0;  // W
  double transmittance = 0.0;
};

struct SaturationFit {
  double k10 = 0.0;
  FitReport report;
};

/// k10 from on-resonance transmittance versus drive power at known Gamma10
/// and Gamma_phi. Needs at least five points spanning the saturation knee.
SaturationFit fit_saturation(const std::vector<PowerPoint>& points, double gamma10, double gamma_phi);

/// Which master-equation parameters are varied. Gamma10 and the probe
/// drive always come from the template.
struct MasterEqMask {
  bool g21 = true;
  bool g20 = false;
  bool g2phi = true;
  bool g1phi = false;
  bool om_c = true;
  bool scale = true;
};

struct MasterEqFit {
  FitReport report;  // parameters: g21, g20, g2phi, g1phi, om_c, scale
  lambda3::ThreeLevelRates rates;
  double scale = 1.0;
};

/// Fits scale * t(d_c, d_p) from the steady-state solver to a measured map.
/// Rows of the map are d_c, columns d_p.
MasterEqFit fit_master_equation(const ComplexMap& data, const lambda3::ThreeLevelRates& init,
                                const MasterEqMask& mask = {}, double init_scale = 1.0);

/// r = exp(i phase) t / scale - 1 at every sample.
std::vector<cplx> rotate_normalize(const Spectrum& spectrum, double phase, double scale);

/// Re(exp(i phase) t / scale - 1).
std::vector<double> preprocess(const Spectrum& spectrum, double phase, double scale);

}  // namespace ga::fitcore
