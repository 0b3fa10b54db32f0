#include "giant/physcore.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

namespace ga::physcore {

void DeviceParams::validate() const {
  if (!(ej_max > 0.0)) throw DomainError("DeviceParams: ej_max must be positive");
  if (!(ec > 0.0)) throw DomainError("DeviceParams: ec must be positive");
  if (n_points < 1) throw DomainError("DeviceParams: n_points must be at least 1");
  if (!(spacing > 0.0)) throw DomainError("DeviceParams: spacing must be positive");
  if (!(eps_eff >= 1.0)) throw DomainError("DeviceParams: eps_eff must be >= 1");
  if (!(gamma1_max >= 0.0)) throw DomainError("DeviceParams: gamma1_max must be nonnegative");
}

double DeviceParams::phase_velocity() const { return kSpeedOfLight / std::sqrt(eps_eff); }

double DeviceParams::omega_lambda() const { return physcore::omega_lambda(spacing, eps_eff); }

double omega_lambda(double spacing, double eps_eff) {
  if (!(spacing > 0.0)) throw DomainError("omega_lambda: spacing must be positive");
  if (!(eps_eff >= 1.0)) throw DomainError("omega_lambda: eps_eff must be >= 1");
  return kTwoPi * (kSpeedOfLight / std::sqrt(eps_eff)) / spacing;
}

double josephson_energy(const DeviceParams& params, double flux) {
  return params.ej_max * std::abs(std::cos(std::numbers::pi * flux));
}

TransitionFrequencies transition_frequencies(double ej, double ec) {
  if (!(ej > 0.0) || !(ec > 0.0)) {
    throw DomainError("transition_frequencies: ej and ec must be positive");
  }
  const double omega10 = std::sqrt(8.0 * ej * ec) - ec;
  if (!(omega10 > 0.0)) {
    throw DomainError("transition_frequencies: ej/ec too small, omega10 <= 0 (outside transmon regime)");
  }
  return {omega10, omega10 - ec};
}

TransitionFrequencies transition_frequencies_at(const DeviceParams& params, double flux) {
  return transition_frequencies(josephson_energy(params, flux), params.ec);
}

double array_factor(int n_points, double omega, double omega_lambda) {
  if (n_points == 1) return 1.0;
  const double n = static_cast<double>(n_points);
  const double theta = kTwoPi * omega / omega_lambda;
  const double half = 0.5 * theta;
  const double denom = std::sin(half);
  if (std::abs(denom) < 1e-8) {
    // Series about the nearest multiple of 2*pi.
    const double eps = theta - kTwoPi * std::round(theta / kTwoPi);
    const double x = 0.5 * eps;
    return 1.0 - (n * n - 1.0) * x * x / 3.0;
  }
  const double ratio = std::sin(n * half) / (n * denom);
  return ratio * ratio;
}

double relaxation_rate(int level_j, double omega, const DeviceParams& params) {
  if (level_j != 1 && level_j != 2) throw DomainError("relaxation_rate: level_j must be 1 or 2");
  return level_j * params.gamma1_max * array_factor(params.n_points, omega, params.omega_lambda());
}

double profile_fwhm(int n_points, double omega_lambda) {
  if (n_points < 2) {
    throw DomainError("profile_fwhm: a single coupling point gives a flat profile with no width");
  }
  const double n = static_cast<double>(n_points);
  auto f = [&](double w) { return array_factor(n_points, w, omega_lambda) - 0.5; };
  boost::math::tools::eps_tolerance<double> tol(40);
  auto crossing = [&](double lo, double hi) {
    std::uintmax_t iters = 200;
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
    if (iters >= 200) throw NumericalError("profile_fwhm: root finder did not converge");
    return 0.5 * (a + b);
  };
  // F_N falls monotonically from 1 at omega_lambda to its first zero at
  // omega_lambda*(1 -+ 1/N) on either flank.
  const double lower = crossing(omega_lambda * (1.0 - 1.0 / n), omega_lambda);
  const double upper = crossing(omega_lambda, omega_lambda * (1.0 + 1.0 / n));
  return upper - lower;
}

double beta_ratio(const DeviceParams& params, double flux) {
  const auto freqs = transition_frequencies_at(params, flux);
  const double wl = params.omega_lambda();
  const double f10 = array_factor(params.n_points, freqs.omega10, wl);
  // Exact zeros of F_N evaluate to round-off (~1e-32), not to 0.
  if (f10 < 1e-24) {
    throw DomainError("beta_ratio: |0>-|1> transition is decoupled (F_N(omega10) = 0), ratio undefined");
  }
  return 2.0 * array_factor(params.n_points, freqs.omega21, wl) / f10;
}

double gamma21_from_k_ratio(double k21, double k10, double gamma10) {
  if (k10 == 0.0) throw DomainError("gamma21_from_k_ratio: k10 is zero");
  const double ratio = k21 / k10;
  return ratio * ratio * gamma10;
}

double rabi_from_power(double k, double power) {
  if (power < 0.0) throw DomainError("rabi_from_power: negative power");
  return std::sqrt(2.0) * k * std::sqrt(power);
}

RateProfile rate_profile(const DeviceParams& params, const std::vector<double>& omega_grid) {
  params.validate();
  RateProfile out;
  out.omega_grid = omega_grid;
  out.gamma10.reserve(omega_grid.size());
  out.gamma21.reserve(omega_grid.size());
  for (double w : omega_grid) {
    out.gamma10.push_back(relaxation_rate(1, w, params));
    out.gamma21.push_back(relaxation_rate(2, w, params));
  }
  out.omega_cen = params.omega_lambda();
  out.fwhm = params.n_points >= 2 ? profile_fwhm(params.n_points, out.omega_cen)
                                  : std::numeric_limits<double>::quiet_NaN();
  return out;
}

DeviceParams preset(const std::string& name) {
  DeviceParams p;
  p.ej_max = ghz_to_rad(32.13);
  p.spacing = 20.54e-3;
  p.eps_eff = 6.45;
  p.flux = 0.0;
  if (name == "3cp") {
    p.ec = ghz_to_rad(0.460);
    p.n_points = 3;
    p.gamma1_max = hz_to_rad(25e6);
  } else if (name == "6cp") {
    p.ec = ghz_to_rad(0.429);
    p.n_points = 6;
    p.gamma1_max = hz_to_rad(17e6);
  } else {
    throw DomainError("unknown device preset '" + name + "'");
  }
  return p;
}

}  // namespace ga::physcore
