#include "giant/scatter2.hpp"

#include <algorithm>
#include <cmath>

namespace ga::scatter2 {

cplx transmission_two_level(double probe_omega, const TwoLevelParams& p) {
  const double gamma = p.decoherence();
  if (!(gamma > 0.0)) throw DomainError("transmission_two_level: total decoherence must be positive");
  const double x = (probe_omega - p.omega10) / gamma;
  // Omega_p^2/(Gamma10*gamma10) with Gamma10 = 0 is a decoupled emitter: r0 = 0.
  if (p.gamma10 == 0.0) return {1.0, 0.0};
  const double saturation = p.omega_p_drive * p.omega_p_drive / (p.gamma10 * gamma);
  return 1.0 - p.r0() * cplx(1.0, -x) / (1.0 + x * x + saturation);
}

std::vector<double> transmittance_on_resonance(const TwoLevelParams& p,
                                               const std::vector<double>& power_grid, double k10) {
  std::vector<double> out;
  out.reserve(power_grid.size());
  TwoLevelParams q = p;
  for (double power : power_grid) {
    q.omega_p_drive = physcore::rabi_from_power(k10, power);
    out.push_back(std::norm(transmission_two_level(q.omega10, q)));
  }
  return out;
}

namespace {

TwoLevelParams row_params(const physcore::DeviceParams& device, double flux, double gamma_phi,
                          double omega_p_drive) {
  const auto freqs = physcore::transition_frequencies_at(device, flux);
  return {freqs.omega10, physcore::relaxation_rate(1, freqs.omega10, device), gamma_phi, omega_p_drive};
}

}  // namespace

ComplexMap spectroscopy_map(const physcore::DeviceParams& device, const std::vector<double>& flux_grid,
                            const std::vector<double>& probe_grid, double gamma_phi,
                            double omega_p_drive, Exec exec) {
  device.validate();
  if (flux_grid.empty() || probe_grid.empty()) throw DomainError("spectroscopy_map: empty grid");
  if (!std::is_sorted(flux_grid.begin(), flux_grid.end()) ||
      !std::is_sorted(probe_grid.begin(), probe_grid.end())) {
    throw DomainError("spectroscopy_map: grids must be sorted");
  }
  ComplexMap map{flux_grid, probe_grid, std::vector<cplx>(flux_grid.size() * probe_grid.size())};
  const auto rows = static_cast<long>(flux_grid.size());

  if (exec == Exec::serial) {
    for (long i = 0; i < rows; ++i) {
      const auto p = row_params(device, flux_grid[i], gamma_phi, omega_p_drive);
      for (std::size_t j = 0; j < probe_grid.size(); ++j) {
        map.at(i, j) = transmission_two_level(probe_grid[j], p);
      }
    }
    return map;
  }

  // Rows are independent; errors are captured and rethrown outside the region.
  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(static) num_threads(sweep_threads())
  for (long i = 0; i < rows; ++i) {
    try {
      const auto p = row_params(device, flux_grid[i], gamma_phi, omega_p_drive);
      for (std::size_t j = 0; j < probe_grid.size(); ++j) {
        map.at(i, j) = transmission_two_level(probe_grid[j], p);
      }
    } catch (const std::exception& e) {
#pragma omp critical
      {
        if (!failed) message = e.what();
        failed = true;
      }
    }
  }
  if (failed) throw DomainError(message);
  return map;
}

}  // namespace ga::scatter2
