#pragma once
// Synthetic data generators for round-trip tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "giant/common.hpp"
#include "giant/lambda3.hpp"
#include "giant/model_select.hpp"
#include "giant/scatter2.hpp"

namespace synth {

using ga::cplx;

// Complex Gaussian noise with per-component sigma = max|t - 1| 10^(-snr/20) / sqrt(2).
inline void add_noise(std::vector<cplx>& t, double snr_db, unsigned long long seed) {
  double peak = 0.0;
  for (const cplx& v : t) peak = std::max(peak, std::abs(v - 1.0));
  const double sigma = peak * std::pow(10.0, -snr_db / 20.0) / std::sqrt(2.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  for (cplx& v : t) {
    const double re = n(rng);
    const double im = n(rng);
    v += cplx(re, im);
  }
}

inline ga::Spectrum two_level_spectrum(const ga::scatter2::TwoLevelParams& p, double halfwidths, std::size_t n) {
  ga::Spectrum s;
  const double g = p.decoherence();
  s.omega = ga::linspace(p.omega10 - halfwidths * g, p.omega10 + halfwidths * g, n);
  for (double w : s.omega) s.t.push_back(ga::scatter2::transmission_two_level(w, p));
  return s;
}

// Probe linecut at the given control detuning, noise added, as an absorption trace.
inline ga::fitcore::AbsorptionTrace eit_trace(ga::lambda3::ThreeLevelRates r, double span, std::size_t n,
                                              double snr_db, unsigned long long seed) {
  ga::Spectrum s;
  s.omega = ga::linspace(-span, span, n);
  for (double d : s.omega) {
    r.d_p = d;
    s.t.push_back(ga::lambda3::transmission(r));
  }
  add_noise(s.t, snr_db, seed);
  return ga::fitcore::absorption_trace(s, 0.0, 1.0);
}

}  // namespace synth
