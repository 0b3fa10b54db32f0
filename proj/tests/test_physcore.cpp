#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "giant/physcore.hpp"

using namespace ga;
using namespace ga::physcore;

namespace {

// Interference factor as the normalised phasor sum over coupling points.
double phasor_factor(int n, double omega, double wl) {
  std::complex<double> s = 0.0;
  const double theta = kTwoPi * omega / wl;
  for (int k = 0; k < n; ++k) s += std::polar(1.0, k * theta);
  return std::norm(s) / (n * n);
}

// Half-maximum width of phasor_factor by plain bisection on each flank.
double bisect_fwhm(int n, double wl) {
  auto f = [&](double w) { return phasor_factor(n, w, wl) - 0.5; };
  auto root = [&](double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if ((f(lo) < 0.0) == (f(mid) < 0.0)) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  return root(wl, wl * (1.0 + 1.0 / n)) - root(wl * (1.0 - 1.0 / n), wl);
}

}  // namespace

TEST_CASE("omega_lambda examples") {
  CHECK(rad_to_ghz(omega_lambda(20.54e-3, 6.45)) == doctest::Approx(5.75).epsilon(2e-3));
  CHECK(rad_to_hz(omega_lambda(1.0, 1.0)) == doctest::Approx(299792458.0).epsilon(1e-15));
  CHECK(omega_lambda(10.27e-3, 6.45) == doctest::Approx(2.0 * omega_lambda(20.54e-3, 6.45)).epsilon(1e-14));
  CHECK_THROWS_AS(omega_lambda(0.0, 6.45), DomainError);
  CHECK_THROWS_AS(omega_lambda(1.0, 0.5), DomainError);
}

TEST_CASE("josephson_energy follows the symmetric SQUID") {
  auto p = preset("3cp");
  CHECK(josephson_energy(p, 0.0) == p.ej_max);
  CHECK(josephson_energy(p, 0.5) == doctest::Approx(0.0).scale(p.ej_max));
  CHECK(josephson_energy(p, 1.0 / 3.0) == doctest::Approx(0.5 * p.ej_max).epsilon(1e-14));
  CHECK(josephson_energy(p, 1.3) == doctest::Approx(josephson_energy(p, 0.3)).epsilon(1e-12));
}

TEST_CASE("transition_frequencies") {
  const auto f = transition_frequencies(ghz_to_rad(32.13), ghz_to_rad(0.460));
  CHECK(rad_to_ghz(f.omega10) == doctest::Approx(10.41).epsilon(1e-3));
  CHECK(rad_to_ghz(f.omega21) == doctest::Approx(9.95).epsilon(1e-3));
  CHECK(f.omega10 - f.omega21 == doctest::Approx(ghz_to_rad(0.460)).epsilon(1e-12));
  const auto h = transition_frequencies(ghz_to_rad(32.13), ghz_to_rad(1e-9));
  CHECK((h.omega10 - h.omega21) / h.omega10 < 1e-5);
  CHECK_THROWS_AS(transition_frequencies(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(transition_frequencies(0.1, 1.0), DomainError);
  CHECK_NOTHROW(transition_frequencies(1.0, 1.0));
}

TEST_CASE("array_factor examples") {
  const double wl = ghz_to_rad(5.75);
  CHECK(array_factor(3, wl, wl) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(array_factor(3, 2.0 * wl / 3.0, wl) == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
  for (double w : {0.1 * wl, 0.77 * wl, 1.9 * wl}) CHECK(array_factor(1, w, wl) == 1.0);
}

TEST_CASE("array_factor matches the phasor sum, bounded and periodic") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  const double wl = ghz_to_rad(5.75);
  for (int n = 1; n <= 8; ++n) {
    for (int i = 0; i < 500; ++i) {
      const double w = u(rng) * wl;
      const double f = array_factor(n, w, wl);
      CHECK(f >= 0.0);
      CHECK(f <= 1.0 + 1e-15);
      CHECK(f == doctest::Approx(phasor_factor(n, w, wl)).epsilon(1e-9).scale(1.0));
      CHECK(array_factor(n, w + wl, wl) == doctest::Approx(f).epsilon(1e-9).scale(1.0));
    }
    // Series branch right next to the removable singularity.
    CHECK(array_factor(n, wl * (1.0 + 1e-10), wl) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(array_factor(n, 2.0 * wl, wl) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("array_factor has N-1 zeros per period") {
  for (int n = 2; n <= 8; ++n) {
    int changes = 0;
    const int m = 20000;
    double prev = std::sin(n * 0.5 * (kTwoPi * 0.5 / m));
    for (int i = 1; i < m; ++i) {
      const double theta = kTwoPi * (i + 0.5) / m;
      const double s = std::sin(n * 0.5 * theta);
      if ((s < 0.0) != (prev < 0.0)) ++changes;
      prev = s;
    }
    CHECK(changes == n - 1);
    for (int k = 1; k < n; ++k) {
      CHECK(array_factor(n, static_cast<double>(k) / n, 1.0) < 1e-28);
    }
  }
}

TEST_CASE("relaxation_rate") {
  for (int n : {1, 3, 6}) {
    auto p = preset("3cp");
    p.n_points = n;
    const double wl = p.omega_lambda();
    for (double x = 0.3; x < 2.0; x += 0.013) {
      CHECK(relaxation_rate(2, x * wl, p) == 2.0 * relaxation_rate(1, x * wl, p));
    }
    CHECK(relaxation_rate(1, wl, p) == doctest::Approx(p.gamma1_max).epsilon(1e-14));
  }
  auto p = preset("3cp");
  CHECK(relaxation_rate(1, 4.0 / 3.0 * p.omega_lambda(), p) < 1e-20 * p.gamma1_max);
  CHECK_THROWS_AS(relaxation_rate(3, 1.0, p), DomainError);
  CHECK_THROWS_AS(relaxation_rate(0, 1.0, p), DomainError);
}

TEST_CASE("profile_fwhm against bisection on the phasor sum") {
  const double wl = ghz_to_rad(5.75);
  const double f3 = profile_fwhm(3, wl);
  const double f6 = profile_fwhm(6, wl);
  CHECK(f3 == doctest::Approx(bisect_fwhm(3, wl)).epsilon(1e-9));
  CHECK(f6 == doctest::Approx(bisect_fwhm(6, wl)).epsilon(1e-9));
  CHECK(rad_to_ghz(f3) == doctest::Approx(1.78).epsilon(0.01));
  CHECK(rad_to_mhz(f6) == doctest::Approx(853.0).epsilon(0.01));
  CHECK(f3 / f6 >= 2.0);
  CHECK(f3 / f6 <= 2.2);
  CHECK(f3 / f6 == doctest::Approx(2.09).epsilon(5e-3));
  CHECK_THROWS_AS(profile_fwhm(1, wl), DomainError);
}

TEST_CASE("beta_ratio") {
  auto p = preset("3cp");
  p.n_points = 1;
  for (double flux : {0.0, 0.2, 0.41}) CHECK(beta_ratio(p, flux) == doctest::Approx(2.0).epsilon(1e-14));

  auto q = preset("6cp");
  q.ec = ghz_to_rad(1e-9);
  CHECK(beta_ratio(q, 0.3) == doctest::Approx(2.0).epsilon(1e-6));

  // Invariant under scaling of gamma1_max.
  auto a = preset("6cp");
  auto b = a;
  b.gamma1_max *= 7.3;
  for (double flux = 0.3; flux < 0.45; flux += 0.01) {
    CHECK(beta_ratio(a, flux) == doctest::Approx(beta_ratio(b, flux)).epsilon(1e-14));
  }

  // Deep in a coupling null of |0>-|1> the ratio grows far above 2.
  double best = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double flux = 0.30 + 0.14 * i / 4000.0;
    best = std::max(best, beta_ratio(a, flux));
  }
  CHECK(best > 20.0);
}

TEST_CASE("beta_ratio rejects a decoupled transition") {
  // Two points with omega10 at omega_lambda/2 sit on the coupling null.
  auto p = preset("3cp");
  p.n_points = 2;
  const auto f = transition_frequencies_at(p, 0.0);
  p.spacing = kSpeedOfLight / std::sqrt(p.eps_eff) / rad_to_hz(2.0 * f.omega10);
  CHECK(array_factor(2, f.omega10, p.omega_lambda()) < 1e-28);
  CHECK_THROWS_AS(beta_ratio(p, 0.0), DomainError);
  CHECK(std::isfinite(beta_ratio(p, 0.05)));
}

TEST_CASE("gamma21_from_k_ratio and rabi_from_power") {
  CHECK(gamma21_from_k_ratio(1.5, 1.5, 3.0) == doctest::Approx(3.0));
  CHECK(gamma21_from_k_ratio(std::sqrt(2.0), 1.0, 3.0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(gamma21_from_k_ratio(std::sqrt(13.0), 1.0, 1.0) == doctest::Approx(13.0).epsilon(1e-14));
  CHECK_THROWS_AS(gamma21_from_k_ratio(1.0, 0.0, 1.0), DomainError);

  CHECK(rabi_from_power(1e9, 0.0) == 0.0);
  CHECK(rabi_from_power(1e9, 4e-15) == doctest::Approx(2.0 * rabi_from_power(1e9, 1e-15)).epsilon(1e-14));
  CHECK(rabi_from_power(1e9, 1e-14) / std::sqrt(1e-14) == doctest::Approx(std::sqrt(2.0) * 1e9).epsilon(1e-14));
  CHECK_THROWS_AS(rabi_from_power(1.0, -1.0), DomainError);
}

TEST_CASE("rate_profile invariants") {
  for (const char* name : {"3cp", "6cp"}) {
    const auto p = preset(name);
    const auto grid = linspace(ghz_to_rad(4.0), ghz_to_rad(8.0), 401);
    const auto prof = rate_profile(p, grid);
    std::size_t imax = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(prof.gamma10[i] >= 0.0);
      CHECK(prof.gamma21[i] == 2.0 * prof.gamma10[i]);
      if (prof.gamma10[i] > prof.gamma10[imax]) imax = i;
    }
    CHECK(std::abs(grid[imax] - p.omega_lambda()) <= grid[1] - grid[0]);
    CHECK(prof.fwhm == profile_fwhm(p.n_points, p.omega_lambda()));
  }
  auto one = preset("3cp");
  one.n_points = 1;
  const auto prof = rate_profile(one, linspace(ghz_to_rad(4.0), ghz_to_rad(8.0), 11));
  for (std::size_t i = 0; i < prof.gamma10.size(); ++i) {
    CHECK(prof.gamma10[i] == one.gamma1_max);
    CHECK(prof.gamma21[i] == 2.0 * one.gamma1_max);
  }
  CHECK(std::isnan(prof.fwhm));
}

TEST_CASE("DeviceParams::validate") {
  auto p = preset("3cp");
  CHECK_NOTHROW(p.validate());
  auto bad = p;
  bad.ec = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = p;
  bad.n_points = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = p;
  bad.eps_eff = 0.9;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = p;
  bad.gamma1_max = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(preset("9cp"), DomainError);
}
