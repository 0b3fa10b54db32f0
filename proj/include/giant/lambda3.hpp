#pragma once

// Driven three-level system with a control tone on |0>-|2> and a probe on
// |1>-|2>. Density matrices are vectorised row-major: vec(rho)[3*i + j] =
// rho(i, j), so vec(A rho B) = (A kron B^T) vec(rho).

#include <Eigen/Dense>
#include <vector>

#include "giant/common.hpp"
#include "giant/parallel.hpp"

namespace ga::lambda3 {

using Matrix3 = Eigen::Matrix3cd;
using Superop = Eigen::Matrix<cplx, 9, 9>;
using Vec9 = Eigen::Matrix<cplx, 9, 1>;

/// Dissipation, drive and detuning parameters (all rad/s).
struct ThreeLevelRates {
  double g21 = 0.0;    // decay |2> -> |1>
  double g20 = 0.0;    // decay |2> -> |0>
  double g10 = 0.0;    // decay |1> -> |0>
  double g2phi = 0.0;  // pure dephasing of |2>
  double g1phi = 0.0;  // pure dephasing of |1>
  double om_c = 0.0;   // control drive on |0>-|2>
  double om_p = 0.0;   // probe drive on |1>-|2>
  double d_c = 0.0;    // omega20 - omega_c
  double d_p = 0.0;    // omega21 - omega_p
  // Optional incoherent |0> -> |1> pump. Pins the population of |0> so the
  // |1>-|2> pair can be studied as an isolated two-level scatterer.
  double repump = 0.0;

  /// Throws DomainError on a negative rate or drive.
  void validate() const;
};

struct SteadyState {
  Matrix3 rho;
  double residual = 0.0;  // ||L vec(rho)||_2
};

/// Rotating-frame Hamiltonian
///   H = d_c s22 + (d_c - d_p) s11 + i om_c/2 (s02 - s20) + i om_p/2 (s12 - s21).
/// Correction: the probe coupling is (s12 - s21). Written as (s12 - s12)
/// it vanishes identically and the probe would not couple at all.
Matrix3 build_hamiltonian(const ThreeLevelRates& r);

/// Lindblad generator with collapse operators sqrt(g20) s02, sqrt(g21) s12,
/// sqrt(g10) s01, sqrt(2 g2phi) s22, sqrt(2 g1phi) s11, sqrt(repump) s10.
Superop build_liouvillian(const ThreeLevelRates& r);

/// Unique trace-one null vector of L, from a dense solve with the first
/// population equation replaced by the trace constraint. Throws
/// NumericalError when the stationary manifold is degenerate.
SteadyState steady_state(const Superop& L);

/// Field amplitude alpha of a probe with Rabi frequency om_p: om_p = sqrt(2 g21) alpha.
double probe_amplitude(double om_p, double g21);

/// Input-output relation t = 1 + sqrt(g21/2) <s12> / alpha.
cplx probe_transmission(const SteadyState& ss, double g21, double probe_amp);

/// Steady-state probe transmission for one parameter set.
cplx transmission(const ThreeLevelRates& r);

/// Pump-probe map. Rows follow dc_grid, columns dp_grid; every entry is
/// multiplied by the real factor scale.
ComplexMap eit_map(const ThreeLevelRates& tmpl, const std::vector<double>& dc_grid,
                   const std::vector<double>& dp_grid, double scale = 1.0, Exec exec = Exec::parallel);

/// Omega_t = g21/2 + g20/2 + g2phi.
double threshold_drive(double g21, double g20, double g2phi);

enum class Regime { eit, ats };

struct RegimeVerdict {
  Regime regime;
  bool boundary;  // om_c == om_t; poles coincide
};

/// EIT below threshold, ATS at or above it (boundary flagged at equality).
RegimeVerdict classify_regime(double om_c, double om_t);

const char* to_string(Regime r);

/// Decay rate of the coherence rho(j, k), j != k.
double coherence_decay(const ThreeLevelRates& r, int j, int k);

struct PoleReport {
  std::vector<cplx> poles;  // in the complex d_p plane
  int resonances = 1;       // distinct line centres (1: co-centred, 2: split)
  bool boundary = false;    // double pole
};

/// Poles of the first-order probe response in d_p.
PoleReport probe_poles(const ThreeLevelRates& r);

/// First-order (in om_p) probe transmission as a function of d_p. The
/// pump-only state is computed once at construction.
class WeakProbeResponse {
 public:
  explicit WeakProbeResponse(const ThreeLevelRates& r);

  cplx transmission(double d_p) const;
  const PoleReport& poles() const { return poles_; }
  const Matrix3& pump_state() const { return rho0_; }

 private:
  ThreeLevelRates r_;
  Matrix3 rho0_;
  double g21c_;  // decay of rho(2,1)
  double g01c_;  // decay of rho(0,1)
  PoleReport poles_;
};

struct WeakProbeResult {
  cplx t;
  PoleReport poles;
};

WeakProbeResult weak_probe_transmission(double d_p, const ThreeLevelRates& r);

}  // namespace ga::lambda3
