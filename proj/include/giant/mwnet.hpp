#pragma once

// Lossless circuit model of a multipoint-coupled transmon on a coplanar
// line: distributed line sections, lumped series inductors, a reduced
// capacitance network and a linear SQUID inductance. Solved by modified
// nodal analysis.

#include <array>
#include <string>
#include <vector>

#include "giant/common.hpp"
#include "giant/parallel.hpp"
#include "giant/physcore.hpp"

namespace ga::mwnet {

using Abcd = std::array<std::array<cplx, 2>, 2>;

/// Lossless line [[cos bl, i z0 sin bl], [i sin bl / z0, cos bl]], b = omega/v.
Abcd cpw_section_abcd(double length, double z0, double v, double omega);
/// [[1, i omega l], [0, 1]].
Abcd series_inductor_abcd(double l, double omega);
/// [[1, 0], [y, 1]].
Abcd shunt_branch_abcd(cplx y);
/// Matrix product a * b (a nearer the input port).
Abcd cascade(const Abcd& a, const Abcd& b);
cplx determinant(const Abcd& m);

enum class BranchKind { cpw_section, series_inductor, capacitor, inductor };

const char* to_string(BranchKind k);

/// One element between two nodes. "gnd" (or "0") is the ground node.
/// Line sections and series inductors are two-ports referenced to ground.
struct Branch {
  BranchKind kind;
  double value;  // length (m), inductance (H) or capacitance (F)
  std::string a;
  std::string b;
  double z0 = 0.0;  // line sections only; 0 takes the network value
  double v = 0.0;   // line sections only; 0 takes the network value
};

inline const std::string kGround = "gnd";

bool is_ground(const std::string& node);

struct NodalNetwork {
  std::string port1 = "p1";
  std::string port2 = "p2";
  std::string island;  // transmon island; empty for a bare line
  std::vector<Branch> branches;
  double z0 = 50.0;
  double v_phase = 0.0;

  void add_cpw(double length, const std::string& a, const std::string& b, double z0 = 0.0, double v = 0.0);
  void add_series_inductor(double l, const std::string& a, const std::string& b);
  void add_capacitor(double c, const std::string& a, const std::string& b);
  void add_inductor(double l, const std::string& a, const std::string& b);
  /// Island-to-ground SQUID inductance.
  void add_squid(double l);

  /// Non-ground nodes in first-appearance order, ports first.
  std::vector<std::string> nodes() const;
  /// Sum of capacitances attached to the island.
  double island_capacitance() const;

  /// Throws DomainError for non-positive element values (series inductors
  /// may be zero), unknown island, or ports not connected to each other.
  void validate() const;
};

/// Same network with every inductor on the island removed (floating island).
NodalNetwork without_squid(const NodalNetwork& net);
/// Replaces the island inductance (adds one if missing).
NodalNetwork with_squid(const NodalNetwork& net, double l);

struct SMatrix {
  cplx s11, s12, s21, s22;
  bool singular = false;
};

/// Two-port scattering matrix at one frequency, both ports terminated in z0.
SMatrix solve_s(const NodalNetwork& net, double omega);

struct S21Sweep {
  Spectrum spectrum;  // t = S21
  std::vector<cplx> s11;
  std::vector<bool> flagged;  // singular nodal matrix at this sample
};

S21Sweep solve_s21(const NodalNetwork& net, const std::vector<double>& omega_grid, Exec exec = Exec::parallel);

/// Element values of the reference device. Zero entries are derived:
/// c_sigma from ec, the per-point coupling capacitance from gamma1_max at
/// omega_lambda, the ground capacitance as c_sigma minus the coupling sum.
struct GiantTransmonOptions {
  int n_points = 3;
  double spacing = 20.54e-3;
  double eps_eff = 6.45;
  double z0 = 50.0;
  double lead_length = 5e-3;
  double ec = ghz_to_rad(0.460);
  double gamma1_max = mhz_to_rad(25.0);
  double c_sigma = 0.0;
  double c_coupling = 0.0;
  double c_ground = 0.0;
  double l_series = 0.0;  // in the line just before every coupling node
  double l_squid = 0.0;   // 0 tunes the island to omega_lambda
};

GiantTransmonOptions options_from_device(const physcore::DeviceParams& device);

/// Total island capacitance e^2 / (2 h Ec).
double c_sigma_from_ec(double ec);

/// p1 - lead - c1 - spacing - c2 ... cN - lead - p2, each c_k coupled to the
/// island through c_coupling; island to ground through c_ground and the SQUID.
NodalNetwork make_giant_transmon_network(const GiantTransmonOptions& opts);

struct SweepOptions {
  double window_rel = 0.03;  // coarse search half-width relative to the LC frequency
  int coarse_points = 801;
  int fit_points = 301;
  double fit_halfwidths = 10.0;  // fit window in decoherence rates
  double omega_ref = 0.0;        // flattening reference; 0 uses the flattened peak position
  bool flatten = true;           // divide out the omega^2 growth of capacitive coupling
  Exec exec = Exec::parallel;
};

struct NetworkProfile {
  physcore::RateProfile profile;  // omega10 per inductance; gamma21 = 2 gamma10
  std::vector<double> inductance;
  std::vector<double> raw_gamma10;  // before flattening
  std::vector<bool> flagged;        // no dip found or fit failed; entries are NaN
};

/// For each SQUID inductance: S21 divided by the floating-island
/// background, the two-level transmission fitted around the deepest dip,
/// and (omega10, Gamma10) recorded. FWHM and centre come from the
/// half-maximum crossings of the flattened profile.
NetworkProfile sweep_inductance(const NodalNetwork& net_template, const std::vector<double>& l_grid,
                                const SweepOptions& opts = {});

}  // namespace ga::mwnet
