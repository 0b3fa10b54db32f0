// Serial reference loops against the OpenMP kernels on representative sweeps.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <string>

#include "giant/lambda3.hpp"
#include "giant/model_select.hpp"
#include "giant/mwnet.hpp"
#include "giant/parallel.hpp"
#include "giant/physcore.hpp"
#include "giant/scatter2.hpp"

using namespace ga;

namespace {

double seconds(const std::function<void()>& f, int repeat) {
  double best = 1e300;
  for (int r = 0; r < repeat; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, const std::function<void(Exec)>& kernel, int repeat) {
  const double ts = seconds([&] { kernel(Exec::serial); }, repeat);
  const double tp = seconds([&] { kernel(Exec::parallel); }, repeat);
  std::printf("%-22s %10.4f %10.4f %8.2fx\n", name, ts, tp, ts / tp);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeat = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads: %d\n", sweep_threads());
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial_s", "parallel_s", "speedup");

  const auto dev = physcore::preset("3cp");
  const auto flux = linspace(0.0, 0.45, 120);
  const auto probe = linspace(ghz_to_rad(4.0), ghz_to_rad(8.0), 800);
  row("spectroscopy_map", [&](Exec e) { scatter2::spectroscopy_map(dev, flux, probe, mhz_to_rad(1.0), 0.0, e); },
      repeat);

  lambda3::ThreeLevelRates r;
  r.g21 = mhz_to_rad(13.6);
  r.g10 = mhz_to_rad(1.07);
  r.g2phi = mhz_to_rad(0.94);
  r.g1phi = mhz_to_rad(0.35);
  r.om_c = mhz_to_rad(3.59);
  r.om_p = mhz_to_rad(0.05);
  const auto det = linspace(mhz_to_rad(-20.0), mhz_to_rad(20.0), 161);
  row("eit_map", [&](Exec e) { lambda3::eit_map(r, det, det, 1.0, e); }, repeat);

  fitcore::AbsorptionTrace trace;
  trace.delta = linspace(mhz_to_rad(-20.0), mhz_to_rad(20.0), 401);
  for (double d : trace.delta) {
    trace.absorption.push_back(fitcore::eit_model(d, 3e7, 2e7, 1.5e7, 5e6));
  }
  row("model_select", [&](Exec e) { fitcore::model_select(trace, e); }, repeat);

  const auto net = mwnet::make_giant_transmon_network({});
  const auto grid = linspace(ghz_to_rad(4.0), ghz_to_rad(8.0), 20000);
  row("solve_s21", [&](Exec e) { mwnet::solve_s21(net, grid, e); }, repeat);
  return 0;
}
