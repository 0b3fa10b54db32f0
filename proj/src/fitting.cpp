#include "giant/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "giant/model_select.hpp"

namespace ga::fitcore {

std::vector<cplx> rotate_normalize(const Spectrum& spectrum, double phase, double scale) {
  if (!(scale > 0.0)) throw DomainError("preprocess: scale must be positive");
  const cplx rot = std::polar(1.0, phase);
  std::vector<cplx> r(spectrum.t.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rot * spectrum.t[i] / scale - 1.0;
  return r;
}

std::vector<double> preprocess(const Spectrum& spectrum, double phase, double scale) {
  const auto r = rotate_normalize(spectrum, phase, scale);
  std::vector<double> out(r.size());
  std::transform(r.begin(), r.end(), out.begin(), [](cplx v) { return v.real(); });
  return out;
}

// ---------------------------------------------------------------- two-level

namespace {

void check_spectrum(const Spectrum& s, std::size_t min_points) {
  if (s.omega.size() != s.t.size()) throw DomainError("spectrum: frequency and transmission sizes differ");
  if (s.size() < min_points) throw DomainError("spectrum: too few samples");
}

cplx two_level_model(double w, double g10, double gphi, double w10, double wp_sq) {
  const double gamma = std::max(0.5 * g10 + gphi, 1e-300);
  if (g10 == 0.0) return 1.0;
  const double r0 = g10 / (2.0 * gamma);
  const double x = (w - w10) / gamma;
  return 1.0 - r0 * cplx(1.0, -x) / (1.0 + x * x + wp_sq / (g10 * gamma));
}

}  // namespace

TwoLevelInit guess_two_level(const Spectrum& spectrum) {
  check_spectrum(spectrum, 5);
  const std::size_t n = spectrum.size();
  std::vector<double> depth(n);
  for (std::size_t i = 0; i < n; ++i) depth[i] = std::real(1.0 - spectrum.t[i]);
  const std::size_t peak = std::max_element(depth.begin(), depth.end()) - depth.begin();
  const double d = depth[peak];

  TwoLevelInit init;
  init.omega10 = spectrum.omega[peak];
  const double span = std::abs(spectrum.omega.back() - spectrum.omega.front());
  if (!(d > 0.0)) {
    init.gamma10 = 0.0;
    init.gamma_phi = 0.05 * span;
    return init;
  }
  // Re(1 - t) halves at one decoherence rate from the centre.
  std::size_t lo = peak, hi = peak;
  while (lo > 0 && depth[lo] > 0.5 * d) --lo;
  while (hi + 1 < n && depth[hi] > 0.5 * d) ++hi;
  double gamma = 0.25 * std::abs(spectrum.omega[hi] - spectrum.omega[lo]);
  if (!(gamma > 0.0)) gamma = std::abs(spectrum.omega[std::min(peak + 1, n - 1)] - spectrum.omega[peak]);
  if (!(gamma > 0.0)) gamma = 1e-3 * span;
  const double r0 = std::clamp(d, 1e-6, 0.999);
  init.gamma10 = 2.0 * r0 * gamma;
  init.gamma_phi = gamma * (1.0 - r0);
  return init;
}

TwoLevelFit fit_two_level(const Spectrum& spectrum, const TwoLevelInit& init, const TwoLevelMask& mask) {
  check_spectrum(spectrum, 5);
  const std::size_t n = spectrum.size();
  double max_dev = 0.0;
  for (const cplx& t : spectrum.t) max_dev = std::max(max_dev, std::abs(1.0 - t));

  const double gamma0 = 0.5 * init.gamma10 + init.gamma_phi;
  const double gscale = gamma0 > 0.0 ? gamma0 : 1e-3 * std::abs(spectrum.omega.back() - spectrum.omega.front());
  const double psq_scale = std::max(init.gamma10, 1e-3 * gscale) * gscale;

  std::vector<Parameter> p = {
      {"gamma10", init.gamma10, 0.0, INFINITY, gscale, !mask.gamma10},
      {"gamma_phi", init.gamma_phi, 0.0, INFINITY, gscale, !mask.gamma_phi},
      {"omega10", init.omega10, -INFINITY, INFINITY, gscale, !mask.omega10},
      {"omega_p_sq", init.omega_p * init.omega_p, 0.0, INFINITY, psq_scale, !mask.omega_p},
  };
  Problem prob{2 * n, [&spectrum, n](std::span<const double> v, std::span<double> out) {
                 for (std::size_t i = 0; i < n; ++i) {
                   const cplx d = two_level_model(spectrum.omega[i], v[0], v[1], v[2], v[3]) - spectrum.t[i];
                   out[i] = d.real();
                   out[n + i] = d.imag();
                 }
               },
               {}};

  TwoLevelFit fit;
  const bool weak = max_dev < 1e-3 || init.gamma10 < 1e-3 * gscale;
  try {
    fit.report = nlls_solve(prob, p);
  } catch (const FitError& e) {
    if (!weak || e.kind() == FitError::Kind::invalid_input) throw;
    fit.report = e.best();
    fit.decoupled = true;
  }
  const double g10 = fit.report.value("gamma10");
  fit.params.gamma10 = g10;
  fit.params.gamma_phi = fit.report.value("gamma_phi");
  fit.params.omega10 = fit.report.value("omega10");
  fit.params.omega_p_drive = std::sqrt(std::max(0.0, fit.report.value("omega_p_sq")));
  fit.decoherence = fit.params.decoherence();
  fit.r0 = fit.decoherence > 0.0 ? fit.params.r0() : 0.0;
  if (!fit.decoupled && (!(g10 > 0.0) || (mask.gamma10 && g10 < 2.0 * fit.report.sigma("gamma10")))) {
    fit.decoupled = true;
  }
  return fit;
}

// ---------------------------------------------------------------- calibrations

double doublet_splitting(const Spectrum& linecut, FitReport* report) {
  check_spectrum(linecut, 8);
  AbsorptionTrace trace;
  trace.delta = linecut.omega;
  trace.absorption.resize(linecut.size());
  for (std::size_t i = 0; i < linecut.size(); ++i) trace.absorption[i] = -std::real(linecut.t[i] - 1.0);
  FitReport fit = fit_ats_model(trace, Exec::serial);
  const double d0 = fit.value("delta0");
  const double g = fit.value("gamma");
  const double h = fit.value("height");
  if (report) *report = fit;
  if (!(h > 2.0 * fit.sigma("height"))) {
    throw NumericalError("doublet not resolved: no absorption above the noise");
  }
  if (2.0 * d0 < 2.0 * g) {
    throw NumericalError("doublet not resolved: separation below the fitted linewidth");
  }
  return 2.0 * d0;
}

namespace {

double slope_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
  }
  if (!(sxx > 0.0)) throw NumericalError("slope fit needs at least one nonzero power");
  return sxy / sxx;
}

std::vector<double> sqrt_powers(const std::vector<double>& powers) {
  std::vector<double> out(powers.size());
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (powers[i] < 0.0) throw DomainError("drive power must be non-negative");
    out[i] = std::sqrt(powers[i]);
  }
  return out;
}

}  // namespace

AtsCalibration extract_ats_splitting(const std::vector<Spectrum>& linecuts, const std::vector<double>& powers) {
  if (linecuts.size() != powers.size() || linecuts.empty()) {
    throw DomainError("extract_ats_splitting: need one power per linecut");
  }
  AtsCalibration cal;
  cal.splitting.resize(linecuts.size());
  cal.fits.resize(linecuts.size());
  for (std::size_t i = 0; i < linecuts.size(); ++i) cal.splitting[i] = doublet_splitting(linecuts[i], &cal.fits[i]);
  cal.slope = slope_through_origin(sqrt_powers(powers), cal.splitting);
  cal.k = cal.slope / std::sqrt(2.0);
  return cal;
}

double k_from_rabi_slope(const std::vector<double>& powers, const std::vector<double>& rabi) {
  if (powers.size() != rabi.size() || powers.empty()) throw DomainError("k_from_rabi_slope: size mismatch");
  return slope_through_origin(sqrt_powers(powers), rabi) / std::sqrt(2.0);
}

SaturationFit fit_saturation(const std::vector<PowerPoint>& points, double gamma10, double gamma_phi) {
  if (!(gamma10 > 0.0) || gamma_phi < 0.0) throw DomainError("fit_saturation: need gamma10 > 0 and gamma_phi >= 0");
  if (points.size() < 5) throw NumericalError("ill-conditioned saturation fit: fewer than five points");
  const double gamma = 0.5 * gamma10 + gamma_phi;
  const double r0 = gamma10 / (2.0 * gamma);
  const double t_low = (1.0 - r0) * (1.0 - r0);

  // Each point inverts to k through |t|^2 = (1 - r0/(1 + S))^2, S = 2 k^2 P/(G10 g).
  std::vector<double> k_est;
  int knee = 0;
  for (const auto& pt : points) {
    if (pt.power < 0.0) throw DomainError("fit_saturation: negative power");
    const bool near_low = std::abs(pt.transmittance - t_low) <= 0.02 * std::max(t_low, 1e-3);
    const bool near_one = std::abs(pt.transmittance - 1.0) <= 0.02;
    if (!near_low && !near_one) ++knee;
    if (pt.power <= 0.0 || pt.transmittance <= t_low || pt.transmittance >= 1.0) continue;
    const double s = r0 / (1.0 - std::sqrt(pt.transmittance)) - 1.0;
    if (s > 0.0) k_est.push_back(std::sqrt(s * gamma10 * gamma / (2.0 * pt.power)));
  }
  if (knee == 0 || k_est.empty()) {
    throw NumericalError("ill-conditioned saturation fit: no points on the saturation knee");
  }
  std::nth_element(k_est.begin(), k_est.begin() + k_est.size() / 2, k_est.end());
  const double k0 = k_est[k_est.size() / 2];

  Problem prob{points.size(), [&points, gamma10, gamma, r0](std::span<const double> v, std::span<double> out) {
                 for (std::size_t i = 0; i < out.size(); ++i) {
                   const double s = 2.0 * v[0] * v[0] * points[i].power / (gamma10 * gamma);
                   const double amp = 1.0 - r0 / (1.0 + s);
                   out[i] = amp * amp - points[i].transmittance;
                 }
               },
               {}};
  SaturationFit fit;
  fit.report = nlls_solve(prob, {{"k10", k0, 0.0, INFINITY, k0}});
  fit.k10 = fit.report.value("k10");
  return fit;
}

// ---------------------------------------------------------------- master equation

MasterEqFit fit_master_equation(const ComplexMap& data, const lambda3::ThreeLevelRates& init,
                                const MasterEqMask& mask, double init_scale) {
  if (data.values.size() != data.rows.size() * data.cols.size() || data.values.empty()) {
    throw DomainError("fit_master_equation: map shape mismatch");
  }
  init.validate();
  const double rate_scale = std::max({init.g21, init.g10, init.om_c, 1e-6});
  auto sc = [rate_scale](double v) { return v > 0.0 ? v : 0.1 * rate_scale; };
  std::vector<Parameter> p = {
      {"g21", init.g21, 0.0, INFINITY, sc(init.g21), !mask.g21},
      {"g20", init.g20, 0.0, INFINITY, sc(init.g20), !mask.g20},
      {"g2phi", init.g2phi, 0.0, INFINITY, sc(init.g2phi), !mask.g2phi},
      {"g1phi", init.g1phi, 0.0, INFINITY, sc(init.g1phi), !mask.g1phi},
      {"om_c", init.om_c, 0.0, INFINITY, sc(init.om_c), !mask.om_c},
      {"scale", init_scale, 0.0, INFINITY, init_scale > 0.0 ? init_scale : 1.0, !mask.scale},
  };
  const std::size_t nr = data.rows.size(), nc = data.cols.size(), m = nr * nc;
  Problem prob{2 * m, [&data, &init, nr, nc, m](std::span<const double> v, std::span<double> out) {
                 lambda3::ThreeLevelRates r = init;
                 r.g21 = v[0];
                 r.g20 = v[1];
                 r.g2phi = v[2];
                 r.g1phi = v[3];
                 r.om_c = v[4];
                 const auto model = lambda3::eit_map(r, data.rows, data.cols, v[5], Exec::serial);
                 for (std::size_t i = 0; i < nr * nc; ++i) {
                   const cplx d = model.values[i] - data.values[i];
                   out[i] = d.real();
                   out[m + i] = d.imag();
                 }
               },
               {}};
  MasterEqFit fit;
  fit.report = nlls_solve(prob, p);
  fit.rates = init;
  fit.rates.g21 = fit.report.value("g21");
  fit.rates.g20 = fit.report.value("g20");
  fit.rates.g2phi = fit.report.value("g2phi");
  fit.rates.g1phi = fit.report.value("g1phi");
  fit.rates.om_c = fit.report.value("om_c");
  fit.scale = fit.report.value("scale");
  return fit;
}

}  // namespace ga::fitcore
