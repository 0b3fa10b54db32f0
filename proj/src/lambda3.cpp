#include "giant/lambda3.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace ga::lambda3 {

namespace {

Matrix3 projector(int i, int j) {
  Matrix3 m = Matrix3::Zero();
  m(i, j) = 1.0;
  return m;
}

Superop kron(const Matrix3& a, const Matrix3& b) {
  Superop out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  return out;
}

void add_dissipator(Superop& L, double rate, const Matrix3& x) {
  if (rate == 0.0) return;
  const Matrix3 id = Matrix3::Identity();
  const Matrix3 xdx = x.adjoint() * x;
  L += rate * (kron(x, x.conjugate()) - 0.5 * kron(xdx, id) - 0.5 * kron(id, xdx.transpose()));
}

void check_rate(double v, const char* name) {
  if (!(v >= 0.0)) throw DomainError(std::string("ThreeLevelRates: ") + name + " must be nonnegative");
}

}  // namespace

void ThreeLevelRates::validate() const {
  check_rate(g21, "g21");
  check_rate(g20, "g20");
  check_rate(g10, "g10");
  check_rate(g2phi, "g2phi");
  check_rate(g1phi, "g1phi");
  check_rate(om_c, "om_c");
  check_rate(om_p, "om_p");
  check_rate(repump, "repump");
}

Matrix3 build_hamiltonian(const ThreeLevelRates& r) {
  const cplx i(0.0, 1.0);
  Matrix3 h = Matrix3::Zero();
  h(2, 2) = r.d_c;
  h(1, 1) = r.d_c - r.d_p;
  h += i * (0.5 * r.om_c) * (projector(0, 2) - projector(2, 0));
  h += i * (0.5 * r.om_p) * (projector(1, 2) - projector(2, 1));
  return h;
}

Superop build_liouvillian(const ThreeLevelRates& r) {
  r.validate();
  const Matrix3 h = build_hamiltonian(r);
  const Matrix3 id = Matrix3::Identity();
  Superop L = cplx(0.0, -1.0) * (kron(h, id) - kron(id, h.transpose()));
  add_dissipator(L, r.g20, projector(0, 2));
  add_dissipator(L, r.g21, projector(1, 2));
  add_dissipator(L, r.g10, projector(0, 1));
  add_dissipator(L, 2.0 * r.g2phi, projector(2, 2));
  add_dissipator(L, 2.0 * r.g1phi, projector(1, 1));
  add_dissipator(L, r.repump, projector(1, 0));
  return L;
}

SteadyState steady_state(const Superop& L) {
  const double norm = L.cwiseAbs().maxCoeff();
  if (!(norm > 0.0)) throw NumericalError("steady_state: Liouvillian is zero; every state is stationary");
  Superop a = L;
  Vec9 b = Vec9::Zero();
  // Row 0 is d rho00/dt, redundant with the other population equations
  // because the trace functional is a left null vector of L.
  a.row(0).setZero();
  for (int k = 0; k < 3; ++k) a(0, 4 * k) = norm;
  b(0) = norm;

  Eigen::FullPivLU<Superop> lu(a);
  lu.setThreshold(1e-11);
  if (lu.rank() < 9) {
    throw NumericalError("steady_state: constrained system is singular, steady state is not unique");
  }
  const Vec9 x = lu.solve(b);
  SteadyState out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.rho(i, j) = x(3 * i + j);
  out.residual = (L * x).norm();
  return out;
}

double probe_amplitude(double om_p, double g21) {
  if (!(g21 > 0.0)) throw DomainError("probe_amplitude: g21 must be positive");
  return om_p / std::sqrt(2.0 * g21);
}

cplx probe_transmission(const SteadyState& ss, double g21, double probe_amp) {
  if (probe_amp == 0.0) throw DomainError("probe_transmission: probe amplitude is zero");
  // <s12> = tr(|1><2| rho) = rho(2,1)
  return 1.0 + std::sqrt(0.5 * g21) * ss.rho(2, 1) / probe_amp;
}

cplx transmission(const ThreeLevelRates& r) {
  if (r.om_p == 0.0) throw DomainError("transmission: probe drive is zero");
  if (r.g21 == 0.0) return {1.0, 0.0};  // probe transition does not radiate into the line
  const SteadyState ss = steady_state(build_liouvillian(r));
  return probe_transmission(ss, r.g21, probe_amplitude(r.om_p, r.g21));
}

ComplexMap eit_map(const ThreeLevelRates& tmpl, const std::vector<double>& dc_grid,
                   const std::vector<double>& dp_grid, double scale, Exec exec) {
  tmpl.validate();
  if (dc_grid.empty() || dp_grid.empty()) throw DomainError("eit_map: empty grid");
  if (!std::is_sorted(dc_grid.begin(), dc_grid.end()) || !std::is_sorted(dp_grid.begin(), dp_grid.end())) {
    throw DomainError("eit_map: grids must be sorted");
  }
  ComplexMap map{dc_grid, dp_grid, std::vector<cplx>(dc_grid.size() * dp_grid.size())};
  const auto ncols = dp_grid.size();
  const auto cells = static_cast<long>(map.values.size());

  auto cell = [&](long idx) {
    ThreeLevelRates r = tmpl;
    r.d_c = dc_grid[static_cast<std::size_t>(idx) / ncols];
    r.d_p = dp_grid[static_cast<std::size_t>(idx) % ncols];
    return scale * transmission(r);
  };

  if (exec == Exec::serial) {
    for (long k = 0; k < cells; ++k) map.values[k] = cell(k);
    return map;
  }

  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(static) num_threads(sweep_threads())
  for (long k = 0; k < cells; ++k) {
    try {
      map.values[k] = cell(k);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        if (!failed) message = e.what();
        failed = true;
      }
    }
  }
  if (failed) throw NumericalError(message);
  return map;
}

double threshold_drive(double g21, double g20, double g2phi) { return 0.5 * g21 + 0.5 * g20 + g2phi; }

RegimeVerdict classify_regime(double om_c, double om_t) {
  if (om_t < 0.0) throw DomainError("classify_regime: negative threshold");
  if (om_c < om_t) return {Regime::eit, false};
  return {Regime::ats, om_c == om_t};
}

const char* to_string(Regime r) { return r == Regime::eit ? "EIT" : "ATS"; }

double coherence_decay(const ThreeLevelRates& r, int j, int k) {
  auto outflow = [&](int level) {
    switch (level) {
      case 0: return r.repump;
      case 1: return r.g10;
      default: return r.g21 + r.g20;
    }
  };
  auto dephasing = [&](int level) {
    switch (level) {
      case 1: return r.g1phi;
      case 2: return r.g2phi;
      default: return 0.0;
    }
  };
  return 0.5 * (outflow(j) + outflow(k)) + dephasing(j) + dephasing(k);
}

PoleReport probe_poles(const ThreeLevelRates& r) {
  PoleReport rep;
  const cplx i(0.0, 1.0);
  const double a = coherence_decay(r, 2, 1);
  if (r.om_c == 0.0) {
    // The rho(0,1) factor cancels between numerator and denominator.
    rep.poles = {i * a};
    rep.resonances = 1;
    return rep;
  }
  // Denominator (a + i x)(b + i x) + om_c^2/4 with b = g01 - i d_c.
  const cplx b = coherence_decay(r, 0, 1) - i * r.d_c;
  const cplx disc = r.om_c * r.om_c - (a - b) * (a - b);
  const cplx root = std::sqrt(disc);
  rep.poles = {0.5 * (i * (a + b) + root), 0.5 * (i * (a + b) - root)};
  const double s = std::abs(a) + std::abs(b) + r.om_c;
  const double tol = 1e-12 * s * s;
  rep.boundary = std::abs(disc) <= tol;
  // Real parts differ unless disc lies on the closed negative real axis.
  const bool split = !rep.boundary && (disc.real() > tol || std::abs(disc.imag()) > tol);
  rep.resonances = split ? 2 : 1;
  return rep;
}

WeakProbeResponse::WeakProbeResponse(const ThreeLevelRates& r) : r_(r) {
  if (!(r.g21 > 0.0)) throw DomainError("weak-probe response: g21 must be positive");
  ThreeLevelRates pump_only = r;
  pump_only.om_p = 0.0;
  rho0_ = steady_state(build_liouvillian(pump_only)).rho;
  g21c_ = coherence_decay(r, 2, 1);
  g01c_ = coherence_decay(r, 0, 1);
  poles_ = probe_poles(r);
}

cplx WeakProbeResponse::transmission(double d_p) const {
  const cplx i(0.0, 1.0);
  const double n = (rho0_(1, 1) - rho0_(2, 2)).real();
  const cplx b = g01c_ - i * (r_.d_c - d_p);
  const cplx num = -0.5 * n * b - 0.25 * r_.om_c * rho0_(0, 2);
  const cplx den = (g21c_ + i * d_p) * b + 0.25 * r_.om_c * r_.om_c;
  // t = 1 + g21 rho(2,1)/om_p and rho(2,1)/om_p = num/den to first order.
  return 1.0 + r_.g21 * num / den;
}

WeakProbeResult weak_probe_transmission(double d_p, const ThreeLevelRates& r) {
  const WeakProbeResponse resp(r);
  return {resp.transmission(d_p), resp.poles()};
}

}  // namespace ga::lambda3
