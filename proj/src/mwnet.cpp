#include "giant/mwnet.hpp"

#include <omp.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numeric>

#include "giant/fitting.hpp"

namespace ga::mwnet {

Abcd cpw_section_abcd(double length, double z0, double v, double omega) {
  const double bl = omega / v * length;
  const double c = std::cos(bl), s = std::sin(bl);
  return {{{cplx(c, 0.0), cplx(0.0, z0 * s)}, {cplx(0.0, s / z0), cplx(c, 0.0)}}};
}

Abcd series_inductor_abcd(double l, double omega) {
  return {{{cplx(1.0), cplx(0.0, omega * l)}, {cplx(0.0), cplx(1.0)}}};
}

Abcd shunt_branch_abcd(cplx y) { return {{{cplx(1.0), cplx(0.0)}, {y, cplx(1.0)}}}; }

Abcd cascade(const Abcd& a, const Abcd& b) {
  Abcd out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return out;
}

cplx determinant(const Abcd& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

const char* to_string(BranchKind k) {
  switch (k) {
    case BranchKind::cpw_section: return "cpw";
    case BranchKind::series_inductor: return "lser";
    case BranchKind::capacitor: return "cap";
    default: return "ind";
  }
}

bool is_ground(const std::string& node) { return node == kGround || node == "0"; }

void NodalNetwork::add_cpw(double length, const std::string& a, const std::string& b, double z, double v) {
  branches.push_back({BranchKind::cpw_section, length, a, b, z, v});
}
void NodalNetwork::add_series_inductor(double l, const std::string& a, const std::string& b) {
  branches.push_back({BranchKind::series_inductor, l, a, b});
}
void NodalNetwork::add_capacitor(double c, const std::string& a, const std::string& b) {
  branches.push_back({BranchKind::capacitor, c, a, b});
}
void NodalNetwork::add_inductor(double l, const std::string& a, const std::string& b) {
  branches.push_back({BranchKind::inductor, l, a, b});
}
void NodalNetwork::add_squid(double l) {
  if (island.empty()) throw DomainError("add_squid: network has no island");
  add_inductor(l, island, kGround);
}

std::vector<std::string> NodalNetwork::nodes() const {
  std::vector<std::string> out;
  auto push = [&out](const std::string& n) {
    if (!is_ground(n) && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  push(port1);
  push(port2);
  for (const auto& b : branches) {
    push(b.a);
    push(b.b);
  }
  return out;
}

double NodalNetwork::island_capacitance() const {
  double c = 0.0;
  for (const auto& b : branches)
    if (b.kind == BranchKind::capacitor && (b.a == island || b.b == island)) c += b.value;
  return c;
}

void NodalNetwork::validate() const {
  if (!(z0 > 0.0)) throw DomainError("network reference impedance must be positive");
  if (port1 == port2 || is_ground(port1) || is_ground(port2)) {
    throw DomainError("network ports must be two distinct non-ground nodes");
  }
  for (const auto& b : branches) {
    const std::string tag = std::string(to_string(b.kind)) + " " + b.a + "-" + b.b;
    if (b.a == b.b) throw DomainError(tag + ": both ends on the same node");
    if (b.kind == BranchKind::series_inductor ? !(b.value >= 0.0) : !(b.value > 0.0)) {
      throw DomainError(tag + ": element value must be positive");
    }
    if (b.kind == BranchKind::cpw_section) {
      const double z = b.z0 > 0.0 ? b.z0 : z0;
      const double v = b.v > 0.0 ? b.v : v_phase;
      if (!(z > 0.0) || !(v > 0.0)) throw DomainError(tag + ": line impedance and phase velocity must be positive");
    }
  }
  const auto names = nodes();
  if (!island.empty() && std::find(names.begin(), names.end(), island) == names.end()) {
    throw DomainError("island node '" + island + "' is not used by any element");
  }
  // Signal connectivity between the ports, ignoring paths through ground.
  std::map<std::string, std::string> parent;
  for (const auto& n : names) parent[n] = n;
  auto find = [&parent](std::string n) {
    while (parent[n] != n) n = parent[n] = parent[parent[n]];
    return n;
  };
  for (const auto& b : branches)
    if (!is_ground(b.a) && !is_ground(b.b)) parent[find(b.a)] = find(b.b);
  if (find(port1) != find(port2)) throw DomainError("ports are not connected");
}

NodalNetwork without_squid(const NodalNetwork& net) {
  NodalNetwork out = net;
  std::erase_if(out.branches, [&net](const Branch& b) {
    return b.kind == BranchKind::inductor && !net.island.empty() && (b.a == net.island || b.b == net.island);
  });
  return out;
}

NodalNetwork with_squid(const NodalNetwork& net, double l) {
  NodalNetwork out = without_squid(net);
  out.add_squid(l);
  return out;
}

namespace {

// Dense MNA system: node voltages followed by two branch currents per
// two-port (current into terminal a, current out of terminal b).
class Mna {
 public:
  explicit Mna(const NodalNetwork& net) : net_(net) {
    const auto names = net.nodes();
    for (std::size_t i = 0; i < names.size(); ++i) index_[names[i]] = static_cast<int>(i);
    size_ = static_cast<int>(names.size());
    for (const auto& b : net.branches)
      if (b.kind == BranchKind::cpw_section || b.kind == BranchKind::series_inductor) size_ += 2;
    p1_ = index_.at(net.port1);
    p2_ = index_.at(net.port2);
  }

  SMatrix solve(double omega) const {
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(size_, size_);
    int extra = static_cast<int>(index_.size());
    for (const auto& b : net_.branches) {
      const int a = node(b.a), c = node(b.b);
      switch (b.kind) {
        case BranchKind::capacitor:
          stamp_admittance(y, a, c, cplx(0.0, omega * b.value));
          break;
        case BranchKind::inductor:
          stamp_admittance(y, a, c, 1.0 / cplx(0.0, omega * b.value));
          break;
        case BranchKind::cpw_section: {
          const double z = b.z0 > 0.0 ? b.z0 : net_.z0;
          const double v = b.v > 0.0 ? b.v : net_.v_phase;
          stamp_two_port(y, a, c, extra, cpw_section_abcd(b.value, z, v, omega));
          extra += 2;
          break;
        }
        case BranchKind::series_inductor:
          stamp_two_port(y, a, c, extra, series_inductor_abcd(b.value, omega));
          extra += 2;
          break;
      }
    }
    const double g = 1.0 / net_.z0;
    y(p1_, p1_) += g;
    y(p2_, p2_) += g;

    // Norton sources of unit open-circuit voltage at each port in turn.
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(size_, 2);
    rhs(p1_, 0) = g;
    rhs(p2_, 1) = g;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(y);
    SMatrix s;
    if (singular(lu)) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      s.s11 = s.s12 = s.s21 = s.s22 = cplx(nan, nan);
      s.singular = true;
      return s;
    }
    const Eigen::MatrixXcd x = lu.solve(rhs);
    s.s11 = 2.0 * x(p1_, 0) - 1.0;
    s.s21 = 2.0 * x(p2_, 0);
    s.s12 = 2.0 * x(p1_, 1);
    s.s22 = 2.0 * x(p2_, 1) - 1.0;
    return s;
  }

 private:
  // Pivot below 1e-13 of the largest one: no unique solution.
  static bool singular(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu) {
    const auto d = lu.matrixLU().diagonal().cwiseAbs();
    return !(d.minCoeff() > 1e-13 * d.maxCoeff());
  }

  int node(const std::string& n) const { return is_ground(n) ? -1 : index_.at(n); }

  static void stamp_admittance(Eigen::MatrixXcd& y, int a, int b, cplx v) {
    if (a >= 0) y(a, a) += v;
    if (b >= 0) y(b, b) += v;
    if (a >= 0 && b >= 0) {
      y(a, b) -= v;
      y(b, a) -= v;
    }
  }

  // (V_a, I1) = ABCD (V_b, I2).
  static void stamp_two_port(Eigen::MatrixXcd& y, int a, int b, int k, const Abcd& m) {
    const int i1 = k, i2 = k + 1;
    if (a >= 0) y(a, i1) += 1.0;
    if (b >= 0) y(b, i2) -= 1.0;
    if (a >= 0) y(i1, a) += 1.0;
    if (b >= 0) y(i1, b) -= m[0][0];
    y(i1, i2) -= m[0][1];
    y(i2, i1) += 1.0;
    if (b >= 0) y(i2, b) -= m[1][0];
    y(i2, i2) -= m[1][1];
  }

  const NodalNetwork& net_;
  std::map<std::string, int> index_;
  int size_ = 0;
  int p1_ = 0, p2_ = 0;
};

}  // namespace

SMatrix solve_s(const NodalNetwork& net, double omega) {
  net.validate();
  return Mna(net).solve(omega);
}

S21Sweep solve_s21(const NodalNetwork& net, const std::vector<double>& omega_grid, Exec exec) {
  net.validate();
  const Mna mna(net);
  const std::size_t n = omega_grid.size();
  S21Sweep out;
  out.spectrum.omega = omega_grid;
  out.spectrum.t.resize(n);
  out.s11.resize(n);
  std::vector<char> flag(n, 0);
  auto one = [&](std::size_t i) {
    const SMatrix s = mna.solve(omega_grid[i]);
    out.spectrum.t[i] = s.s21;
    out.s11[i] = s.s11;
    flag[i] = s.singular ? 1 : 0;
  };
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) one(i);
  } else {
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(sweep_threads())
    for (long long i = 0; i < count; ++i) one(static_cast<std::size_t>(i));
  }
  out.flagged.assign(flag.begin(), flag.end());
  return out;
}

double c_sigma_from_ec(double ec) {
  if (!(ec > 0.0)) throw DomainError("charging energy must be positive");
  return kElementaryCharge * kElementaryCharge / (2.0 * kPlanck * rad_to_hz(ec));
}

GiantTransmonOptions options_from_device(const physcore::DeviceParams& device) {
  device.validate();
  GiantTransmonOptions o;
  o.n_points = device.n_points;
  o.spacing = device.spacing;
  o.eps_eff = device.eps_eff;
  o.ec = device.ec;
  o.gamma1_max = device.gamma1_max;
  return o;
}

NodalNetwork make_giant_transmon_network(const GiantTransmonOptions& opts) {
  if (opts.n_points < 1) throw DomainError("need at least one coupling point");
  if (!(opts.spacing > 0.0) || !(opts.eps_eff > 0.0) || !(opts.lead_length > 0.0)) {
    throw DomainError("spacing, eps_eff and lead length must be positive");
  }
  const double v = kSpeedOfLight / std::sqrt(opts.eps_eff);
  const double w_lambda = kTwoPi * v / opts.spacing;
  const double c_sigma = opts.c_sigma > 0.0 ? opts.c_sigma : c_sigma_from_ec(opts.ec);
  // Coherent sum at omega_lambda: Gamma = omega^2 (N Cc)^2 Z0 / (2 C_sigma).
  const double c_c = opts.c_coupling > 0.0
                         ? opts.c_coupling
                         : std::sqrt(2.0 * c_sigma * opts.gamma1_max / (w_lambda * w_lambda * opts.z0)) / opts.n_points;
  const double c_g = opts.c_ground > 0.0 ? opts.c_ground : c_sigma - opts.n_points * c_c;
  if (!(c_g > 0.0)) throw DomainError("coupling capacitors exceed the total island capacitance");
  const double l_j = opts.l_squid > 0.0 ? opts.l_squid : 1.0 / (w_lambda * w_lambda * c_sigma);

  NodalNetwork net;
  net.z0 = opts.z0;
  net.v_phase = v;
  net.island = "q";
  std::string prev = net.port1;
  for (int k = 1; k <= opts.n_points; ++k) {
    const std::string u = "u" + std::to_string(k);
    const std::string c = "c" + std::to_string(k);
    net.add_cpw(k == 1 ? opts.lead_length : opts.spacing, prev, u);
    net.add_series_inductor(opts.l_series, u, c);
    net.add_capacitor(c_c, c, net.island);
    prev = c;
  }
  net.add_cpw(opts.lead_length, prev, net.port2);
  net.add_capacitor(c_g, net.island, kGround);
  net.add_squid(l_j);
  net.validate();
  return net;
}

// ---------------------------------------------------------------- sweep

namespace {

struct DipFit {
  bool ok = false;
  double omega10 = 0.0;
  double gamma10 = 0.0;
};

class NormalisedLine {
 public:
  NormalisedLine(const NodalNetwork& net, const NodalNetwork& bg) : dev_(net), bg_(bg) {}

  cplx t(double w) const {
    const SMatrix a = dev_.solve(w);
    const SMatrix b = bg_.solve(w);
    if (a.singular || b.singular) throw NumericalError("singular nodal matrix");
    return a.s21 / b.s21;
  }
  double depth(double w) const { return 1.0 - std::norm(t(w)); }

 private:
  Mna dev_;
  Mna bg_;
};

// Distance from the dip centre at which 1 - |t|^2 falls to half its peak.
double half_width(const NormalisedLine& line, double w0, double d0, double step, double dir, double limit) {
  double inside = 0.0, outside = step;
  while (line.depth(w0 + dir * outside) > 0.5 * d0) {
    inside = outside;
    outside *= 2.0;
    if (outside > limit) return NAN;
  }
  for (int it = 0; it < 60 && outside - inside > 1e-9 * outside; ++it) {
    const double mid = 0.5 * (inside + outside);
    (line.depth(w0 + dir * mid) > 0.5 * d0 ? inside : outside) = mid;
  }
  return 0.5 * (inside + outside);
}

DipFit fit_dip(const NodalNetwork& net, const NodalNetwork& bg, double l, const SweepOptions& opts) {
  DipFit out;
  const NodalNetwork dev = with_squid(net, l);
  const NormalisedLine line(dev, bg);
  const double c_isl = dev.island_capacitance();
  const double w_lc = 1.0 / std::sqrt(l * c_isl);
  const auto coarse = linspace(w_lc * (1.0 - opts.window_rel), w_lc * (1.0 + opts.window_rel),
                               static_cast<std::size_t>(opts.coarse_points));
  std::size_t best = 0;
  double best_d = -INFINITY;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const double d = line.depth(coarse[i]);
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  if (best == 0 || best + 1 == coarse.size()) return out;
  const double h = coarse[1] - coarse[0];
  // Golden-section refinement of the depth maximum inside the bracketing steps.
  double a = coarse[best] - h, b = coarse[best] + h;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = line.depth(x1), f2 = line.depth(x2);
  for (int it = 0; it < 80 && b - a > 1e-13 * w_lc; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = line.depth(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = line.depth(x2);
    }
  }
  const double w0 = 0.5 * (a + b);
  const double d0 = line.depth(w0);
  if (!(d0 > 1e-6)) return out;
  const double limit = opts.window_rel * w_lc;
  const double step = std::max(1e-9 * w_lc, 1e-3 * h);
  const double lo = half_width(line, w0, d0, step, -1.0, limit);
  const double hi = half_width(line, w0, d0, step, +1.0, limit);
  if (!std::isfinite(lo) || !std::isfinite(hi)) return out;
  const double gamma = 0.5 * (lo + hi);

  Spectrum spec;
  spec.omega = linspace(w0 - opts.fit_halfwidths * gamma, w0 + opts.fit_halfwidths * gamma,
                        static_cast<std::size_t>(opts.fit_points));
  spec.t.resize(spec.omega.size());
  for (std::size_t i = 0; i < spec.omega.size(); ++i) spec.t[i] = line.t(spec.omega[i]);

  fitcore::TwoLevelInit init = fitcore::guess_two_level(spec);
  init.omega10 = w0;
  init.omega_p = 0.0;
  fitcore::TwoLevelMask mask;
  mask.omega_p = false;
  const auto fit = fitcore::fit_two_level(spec, init, mask);
  if (fit.decoupled || !fit.report.converged) return out;
  out.ok = true;
  out.omega10 = fit.params.omega10;
  out.gamma10 = fit.params.gamma10;
  return out;
}

}  // namespace

NetworkProfile sweep_inductance(const NodalNetwork& net_template, const std::vector<double>& l_grid,
                                const SweepOptions& opts) {
  net_template.validate();
  if (net_template.island.empty()) throw DomainError("sweep_inductance: template has no island");
  for (double l : l_grid)
    if (!(l > 0.0)) throw DomainError("sweep_inductance: inductances must be positive");
  if (opts.coarse_points < 5 || opts.fit_points < 8 || !(opts.window_rel > 0.0 && opts.window_rel < 1.0)) {
    throw DomainError("sweep_inductance: invalid sweep options");
  }
  const NodalNetwork bg = without_squid(net_template);
  const std::size_t n = l_grid.size();
  std::vector<DipFit> fits(n);
  auto one = [&](std::size_t i) {
    try {
      fits[i] = fit_dip(net_template, bg, l_grid[i], opts);
    } catch (const std::exception&) {
      fits[i] = DipFit{};
    }
  };
  if (opts.exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) one(i);
  } else {
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(sweep_threads())
    for (long long i = 0; i < count; ++i) one(static_cast<std::size_t>(i));
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  NetworkProfile out;
  out.inductance = l_grid;
  auto& p = out.profile;
  p.omega_grid.assign(n, nan);
  p.gamma10.assign(n, nan);
  p.gamma21.assign(n, nan);
  out.raw_gamma10.assign(n, nan);
  out.flagged.assign(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    if (!fits[i].ok) continue;
    out.flagged[i] = false;
    p.omega_grid[i] = fits[i].omega10;
    out.raw_gamma10[i] = fits[i].gamma10;
  }

  double w_ref = opts.omega_ref;
  if (opts.flatten && !(w_ref > 0.0)) {
    double best = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      if (out.flagged[i]) continue;
      const double v = out.raw_gamma10[i] / (p.omega_grid[i] * p.omega_grid[i]);
      if (v > best) {
        best = v;
        w_ref = p.omega_grid[i];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (out.flagged[i]) continue;
    const double f = opts.flatten ? std::pow(w_ref / p.omega_grid[i], 2) : 1.0;
    p.gamma10[i] = out.raw_gamma10[i] * f;
    p.gamma21[i] = 2.0 * p.gamma10[i];
  }

  // Width and centre from linear interpolation of the half-maximum crossings.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i)
    if (!out.flagged[i]) order.push_back(i);
  std::sort(order.begin(), order.end(), [&p](std::size_t a, std::size_t b) { return p.omega_grid[a] < p.omega_grid[b]; });
  p.fwhm = nan;
  p.omega_cen = nan;
  if (order.empty()) return out;
  std::size_t pk = 0;
  for (std::size_t k = 1; k < order.size(); ++k)
    if (p.gamma10[order[k]] > p.gamma10[order[pk]]) pk = k;
  const double half = 0.5 * p.gamma10[order[pk]];
  p.omega_cen = p.omega_grid[order[pk]];
  auto cross = [&](std::size_t inner, std::size_t outer) {
    const double g0 = p.gamma10[order[inner]], g1 = p.gamma10[order[outer]];
    const double w0 = p.omega_grid[order[inner]], w1 = p.omega_grid[order[outer]];
    return w0 + (half - g0) / (g1 - g0) * (w1 - w0);
  };
  double left = nan, right = nan;
  for (std::size_t k = pk; k > 0; --k) {
    if (p.gamma10[order[k - 1]] <= half) {
      left = cross(k, k - 1);
      break;
    }
  }
  for (std::size_t k = pk; k + 1 < order.size(); ++k) {
    if (p.gamma10[order[k + 1]] <= half) {
      right = cross(k, k + 1);
      break;
    }
  }
  if (std::isfinite(left) && std::isfinite(right)) {
    p.fwhm = right - left;
    p.omega_cen = 0.5 * (left + right);
  }
  return out;
}

}  // namespace ga::mwnet
