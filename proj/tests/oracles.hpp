#pragma once
// Reference computations shared by unit and acceptance tests. None of them
// call into the library's superoperator code.

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "giant/lambda3.hpp"

namespace oracle {

using ga::cplx;
using M3 = Eigen::Matrix3cd;

inline M3 ket_bra(int i, int j) {
  M3 m = M3::Zero();
  m(i, j) = 1.0;
  return m;
}

inline M3 hamiltonian(const ga::lambda3::ThreeLevelRates& r) {
  const cplx i(0.0, 1.0);
  M3 h = M3::Zero();
  h(1, 1) = r.d_c - r.d_p;
  h(2, 2) = r.d_c;
  h(0, 2) = i * r.om_c / 2.0;
  h(2, 0) = -i * r.om_c / 2.0;
  h(1, 2) = i * r.om_p / 2.0;
  h(2, 1) = -i * r.om_p / 2.0;
  return h;
}

// d rho / dt written out with commutators and dissipators on 3x3 matrices.
inline M3 rhs(const ga::lambda3::ThreeLevelRates& r, const M3& rho) {
  const cplx i(0.0, 1.0);
  const M3 h = hamiltonian(r);
  M3 out = -i * (h * rho - rho * h);
  auto diss = [&](double rate, const M3& c) {
    const M3 cd = c.adjoint();
    out += rate * (c * rho * cd - 0.5 * (cd * c * rho + rho * cd * c));
  };
  diss(r.g20, ket_bra(0, 2));
  diss(r.g21, ket_bra(1, 2));
  diss(r.g10, ket_bra(0, 1));
  diss(2.0 * r.g2phi, ket_bra(2, 2));
  diss(2.0 * r.g1phi, ket_bra(1, 1));
  diss(r.repump, ket_bra(1, 0));
  return out;
}

// Row-major vectorised generator assembled by applying rhs to basis matrices.
inline Eigen::Matrix<cplx, 9, 9> generator(const ga::lambda3::ThreeLevelRates& r) {
  Eigen::Matrix<cplx, 9, 9> g;
  for (int k = 0; k < 9; ++k) {
    const M3 e = ket_bra(k / 3, k % 3);
    const M3 d = rhs(r, e);
    for (int m = 0; m < 9; ++m) g(m, k) = d(m / 3, m % 3);
  }
  return g;
}

// Long-time limit of RK4 time stepping from |0><0|. The one-step RK4
// propagator is squared 40 times, i.e. 2^40 steps of size 0.05/|L|.
inline M3 rk4_long_time(const ga::lambda3::ThreeLevelRates& r) {
  using Mat9 = Eigen::Matrix<cplx, 9, 9>;
  const Mat9 g = generator(r);
  const double norm = g.cwiseAbs().rowwise().sum().maxCoeff();
  const double h = 0.05 / norm;
  const Mat9 a = h * g;
  const Mat9 a2 = a * a;
  const Mat9 a3 = a2 * a;
  Mat9 p = Mat9::Identity() + a + a2 / 2.0 + a3 / 6.0 + a3 * a / 24.0;
  for (int k = 0; k < 40; ++k) p = p * p;
  Eigen::Matrix<cplx, 9, 1> v = Eigen::Matrix<cplx, 9, 1>::Zero();
  v(0) = 1.0;
  v = p * v;
  M3 rho;
  for (int m = 0; m < 9; ++m) rho(m / 3, m % 3) = v(m);
  return rho / rho.trace();
}

// Random rates with a unique stationary state (g10 > 0).
inline ga::lambda3::ThreeLevelRates random_rates(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto mhz = [](double v) { return ga::mhz_to_rad(v); };
  ga::lambda3::ThreeLevelRates r;
  r.g21 = mhz(0.5 + 20.0 * u(rng));
  r.g20 = mhz(5.0 * u(rng));
  r.g10 = mhz(0.05 + 2.0 * u(rng));
  r.g2phi = mhz(3.0 * u(rng));
  r.g1phi = mhz(1.0 * u(rng));
  r.om_c = mhz(25.0 * u(rng));
  r.om_p = mhz(5.0 * u(rng));
  r.d_c = mhz(40.0 * (u(rng) - 0.5));
  r.d_p = mhz(40.0 * (u(rng) - 0.5));
  return r;
}

}  // namespace oracle
