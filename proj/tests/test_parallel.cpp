#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <omp.h>

#include <cmath>
#include <cstdlib>

#include "giant/io.hpp"
#include "giant/lambda3.hpp"
#include "giant/mwnet.hpp"
#include "giant/nlls.hpp"
#include "giant/parallel.hpp"
#include "giant/scatter2.hpp"

using namespace ga;

// Serial loops are the reference; every parallel kernel must reproduce them
// bit for bit regardless of thread count.

TEST_CASE("GA_THREADS caps the thread count") {
  ::setenv("GA_THREADS", "3", 1);
  CHECK(sweep_threads() == 3);
  ::setenv("GA_THREADS", "0", 1);
  CHECK(sweep_threads() == omp_get_max_threads());
  ::setenv("GA_THREADS", "many", 1);
  CHECK(sweep_threads() == omp_get_max_threads());
  ::unsetenv("GA_THREADS");
  CHECK(sweep_threads() == omp_get_max_threads());
}

TEST_CASE("spectroscopy map") {
  const auto dev = physcore::preset("6cp");
  const auto flux = linspace(0.0, 0.45, 23);
  const auto probe = linspace(ghz_to_rad(4.0), ghz_to_rad(7.5), 301);
  for (const char* threads : {"1", "4"}) {
    ::setenv("GA_THREADS", threads, 1);
    const auto a = scatter2::spectroscopy_map(dev, flux, probe, mhz_to_rad(1.0), 0.0, Exec::serial);
    const auto b = scatter2::spectroscopy_map(dev, flux, probe, mhz_to_rad(1.0), 0.0, Exec::parallel);
    CHECK(a.values == b.values);
    CHECK(a.rows == b.rows);
    CHECK(a.cols == b.cols);
  }
  ::unsetenv("GA_THREADS");
}

TEST_CASE("pump-probe map") {
  const auto r = io::load_rates("tableII_6cp_low.json");
  const auto dc = linspace(mhz_to_rad(-20.0), mhz_to_rad(20.0), 17);
  const auto dp = linspace(mhz_to_rad(-20.0), mhz_to_rad(20.0), 21);
  for (const char* threads : {"2", "5"}) {
    ::setenv("GA_THREADS", threads, 1);
    const auto a = lambda3::eit_map(r, dc, dp, 0.9, Exec::serial);
    const auto b = lambda3::eit_map(r, dc, dp, 0.9, Exec::parallel);
    CHECK(a.values == b.values);
  }
  ::unsetenv("GA_THREADS");
}

TEST_CASE("multistart") {
  std::vector<double> x, y;
  for (int i = 0; i < 301; ++i) {
    x.push_back(-6.0 + 0.04 * i);
    y.push_back(std::sin(1.7 * x.back()) * std::exp(-0.1 * x.back() * x.back()));
  }
  fitcore::Problem p;
  p.n_residuals = x.size();
  p.residuals = [&](std::span<const double> q, std::span<double> r) {
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::sin(q[0] * x[i]) * std::exp(-q[1] * x[i] * x[i]) - y[i];
  };
  std::vector<std::vector<fitcore::Parameter>> starts;
  for (int k = 0; k < 12; ++k) starts.push_back({{"w", 0.3 + 0.25 * k}, {"a", 0.05, 0.0}});
  ::setenv("GA_THREADS", "4", 1);
  const auto a = fitcore::nlls_multistart(p, starts, {}, Exec::serial);
  const auto b = fitcore::nlls_multistart(p, starts, {}, Exec::parallel);
  ::unsetenv("GA_THREADS");
  CHECK(a.values() == b.values());
  CHECK(a.cost == b.cost);
  CHECK(a.value("w") == doctest::Approx(1.7).epsilon(1e-8));
}

TEST_CASE("network sweeps") {
  const auto dev = physcore::preset("3cp");
  const auto net = mwnet::make_giant_transmon_network(mwnet::options_from_device(dev));
  const auto grid = linspace(ghz_to_rad(5.0), ghz_to_rad(6.5), 401);
  ::setenv("GA_THREADS", "3", 1);
  const auto a = mwnet::solve_s21(net, grid, Exec::serial);
  const auto b = mwnet::solve_s21(net, grid, Exec::parallel);
  CHECK(a.spectrum.t == b.spectrum.t);
  CHECK(a.s11 == b.s11);
  CHECK(a.flagged == b.flagged);

  std::vector<double> lg;
  for (int i = 0; i < 7; ++i) lg.push_back(1.2e-8 + 2e-9 * i);
  mwnet::SweepOptions serial;
  serial.exec = Exec::serial;
  mwnet::SweepOptions parallel;
  parallel.exec = Exec::parallel;
  const auto pa = mwnet::sweep_inductance(net, lg, serial);
  const auto pb = mwnet::sweep_inductance(net, lg, parallel);
  ::unsetenv("GA_THREADS");
  CHECK(pa.profile.omega_grid == pb.profile.omega_grid);
  CHECK(pa.profile.gamma10 == pb.profile.gamma10);
  CHECK(pa.raw_gamma10 == pb.raw_gamma10);
  CHECK(pa.flagged == pb.flagged);
}
