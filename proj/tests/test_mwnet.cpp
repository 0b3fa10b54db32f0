#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "giant/mwnet.hpp"
#include "giant/netlist.hpp"

using namespace ga;
using namespace ga::mwnet;

namespace {

double max_abs_diff(const Abcd& a, const Abcd& b) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

const Abcd kIdentity{{{cplx(1.0), cplx(0.0)}, {cplx(0.0), cplx(1.0)}}};

// Random ladder: line sections and series inductors along the through path,
// shunt capacitors to ground and to an optional island.
NodalNetwork random_network(std::mt19937_64& rng, bool with_island) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  NodalNetwork net;
  net.v_phase = 1.2e8;
  if (with_island) net.island = "q";
  std::string prev = "p1";
  const int stages = 2 + static_cast<int>(4.0 * u(rng));
  for (int k = 0; k < stages; ++k) {
    const std::string mid = "m" + std::to_string(k);
    const std::string next = k + 1 == stages ? "p2" : "n" + std::to_string(k);
    net.add_cpw(1e-3 + 2e-2 * u(rng), prev, mid, 30.0 + 40.0 * u(rng));
    net.add_series_inductor(u(rng) < 0.3 ? 0.0 : 5e-9 * u(rng), mid, next);
    if (u(rng) < 0.5) net.add_capacitor(1e-15 + 2e-14 * u(rng), next, kGround);
    if (with_island) net.add_capacitor(1e-15 + 5e-15 * u(rng), next, "q");
    prev = next;
  }
  if (with_island) {
    net.add_capacitor(2e-14 + 2e-14 * u(rng), "q", kGround);
    net.add_squid(5e-9 + 2e-8 * u(rng));
  }
  return net;
}

double squid_of(const NodalNetwork& net) {
  for (const auto& b : net.branches)
    if (b.kind == BranchKind::inductor) return b.value;
  return 0.0;
}

double analytic_fwhm_hz(const physcore::DeviceParams& d) {
  return physcore::profile_fwhm(d.n_points, d.omega_lambda()) / (2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("line section examples") {
  const double v = 1.2e8, z0 = 50.0;
  CHECK(max_abs_diff(cpw_section_abcd(0.01, z0, v, 0.0), kIdentity) == 0.0);
  const double len = 0.02;
  const double quarter = 0.5 * std::numbers::pi * v / len;
  const Abcd q = cpw_section_abcd(len, z0, v, quarter);
  CHECK(std::abs(q[0][0]) < 1e-15);
  CHECK(std::abs(q[1][1]) < 1e-15);
  CHECK(q[0][1].imag() == doctest::Approx(z0));
  CHECK(q[1][0].imag() == doctest::Approx(1.0 / z0));
  const Abcd full = cascade(cpw_section_abcd(0.01, z0, v, 3e10), cpw_section_abcd(0.015, z0, v, 3e10));
  CHECK(max_abs_diff(full, cpw_section_abcd(0.025, z0, v, 3e10)) < 1e-12);
}

TEST_CASE("series and shunt examples") {
  CHECK(max_abs_diff(series_inductor_abcd(0.0, 3e10), kIdentity) == 0.0);
  CHECK(max_abs_diff(cascade(series_inductor_abcd(2e-9, 3e10), series_inductor_abcd(2e-9, 3e10)),
                     series_inductor_abcd(4e-9, 3e10)) < 1e-12);
  CHECK(series_inductor_abcd(1e-9, 2e10)[0][1] == cplx(0.0, 20.0));
  const Abcd s = shunt_branch_abcd(cplx(0.0, 0.02));
  CHECK(s[1][0] == cplx(0.0, 0.02));
  CHECK(determinant(s) == cplx(1.0));
}

TEST_CASE("every building block has unit determinant") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double w = 2e11 * u(rng);
    const Abcd a = cpw_section_abcd(0.05 * u(rng) + 1e-6, 10.0 + 90.0 * u(rng), 5e7 + 2.5e8 * u(rng), w);
    const Abcd b = series_inductor_abcd(1e-8 * u(rng), w);
    const Abcd c = shunt_branch_abcd(cplx(0.0, (u(rng) - 0.5) * 0.1));
    CHECK(std::abs(determinant(a) - 1.0) < 1e-12);
    CHECK(std::abs(determinant(b) - 1.0) < 1e-12);
    CHECK(std::abs(determinant(c) - 1.0) < 1e-12);
    CHECK(std::abs(determinant(cascade(cascade(a, b), c)) - 1.0) < 1e-12);
  }
}

TEST_CASE("bare matched line transmits fully with propagation phase") {
  NodalNetwork net;
  net.v_phase = 1.2e8;
  net.add_cpw(0.012, "p1", "a");
  net.add_series_inductor(0.0, "a", "b");
  net.add_cpw(0.020, "b", "p2");
  for (double w : {1e9, 2.5e10, 3.6e10, 7e10}) {
    const SMatrix s = solve_s(net, w);
    CHECK_FALSE(s.singular);
    CHECK(std::abs(s.s21) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(s.s11) < 1e-12);
    const cplx expected = std::exp(cplx(0.0, -w * 0.032 / 1.2e8));
    CHECK(std::abs(s.s21 - expected) < 1e-10);
  }
}

TEST_CASE("reciprocity and energy conservation on random networks") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto net = random_network(rng, trial % 2 == 0);
    net.validate();
    for (int k = 0; k < 5; ++k) {
      const double w = 2.0 * std::numbers::pi * (1e9 + 1e10 * u(rng));
      const SMatrix s = solve_s(net, w);
      if (s.singular) continue;
      CHECK(std::abs(s.s12 - s.s21) < 1e-10 * std::max(1.0, std::abs(s.s21)));
      CHECK(std::norm(s.s11) + std::norm(s.s21) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(std::norm(s.s22) + std::norm(s.s12) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("reference network dips at the island LC frequency") {
  const auto dev = physcore::preset("3cp");
  const auto net = make_giant_transmon_network(options_from_device(dev));
  const double l = squid_of(net);
  REQUIRE(l > 0.0);
  const double w_lc = 1.0 / std::sqrt(l * net.island_capacitance());
  CHECK(w_lc == doctest::Approx(dev.omega_lambda()).epsilon(1e-6));
  CHECK(net.island_capacitance() == doctest::Approx(c_sigma_from_ec(dev.ec)).epsilon(1e-12));

  const auto grid = linspace(0.97 * w_lc, 1.03 * w_lc, 6001);
  const auto sweep = solve_s21(net, grid);
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::norm(sweep.s11[i]) + std::norm(sweep.spectrum.t[i]) == doctest::Approx(1.0).epsilon(1e-9));
    if (std::abs(sweep.spectrum.t[i]) < std::abs(sweep.spectrum.t[best])) best = i;
  }
  // At the intercoupling frequency the exchange shift of a giant atom vanishes.
  CHECK(std::abs(grid[best] - w_lc) / w_lc < 2e-3);
  CHECK(std::abs(sweep.spectrum.t[best]) < 0.05);
}

TEST_CASE("singular samples are flagged, not thrown") {
  NodalNetwork net;
  net.v_phase = 1.2e8;
  net.island = "q";
  net.add_cpw(0.01, "p1", "c");
  net.add_cpw(0.01, "c", "p2");
  net.add_capacitor(5e-15, "c", "q");
  const auto sweep = solve_s21(net, {1e10, 2e10});
  CHECK(sweep.flagged.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    if (!sweep.flagged[i]) CHECK(std::norm(sweep.spectrum.t[i]) + std::norm(sweep.s11[i]) == doctest::Approx(1.0));
  }
}

TEST_CASE("inductance sweep reproduces the analytic rate profile") {
  const auto dev = physcore::preset("3cp");
  const auto net = make_giant_transmon_network(options_from_device(dev));
  const double l0 = squid_of(net);
  std::vector<double> lg;
  for (int i = 0; i < 41; ++i) lg.push_back(l0 * std::pow(0.4, 1.0 - 2.0 * i / 40.0));
  const auto prof = sweep_inductance(net, lg);
  REQUIRE(prof.profile.omega_grid.size() == lg.size());

  // Larger junction inductance gives a lower transition frequency.
  for (std::size_t i = 1; i < lg.size(); ++i) {
    if (prof.flagged[i] || prof.flagged[i - 1]) continue;
    CHECK(prof.profile.omega_grid[i] < prof.profile.omega_grid[i - 1]);
  }

  const double fwhm_hz = prof.profile.fwhm / (2.0 * std::numbers::pi);
  CHECK(std::abs(fwhm_hz / analytic_fwhm_hz(dev) - 1.0) < 0.05);
  std::size_t pk = 0;
  for (std::size_t i = 0; i < lg.size(); ++i)
    if (!prof.flagged[i] && prof.profile.gamma10[i] > prof.profile.gamma10[pk]) pk = i;
  const double step = std::abs(prof.profile.omega_grid[pk + 1] - prof.profile.omega_grid[pk - 1]) / 2.0;
  CHECK(std::abs(prof.profile.omega_grid[pk] - dev.omega_lambda()) <= step);
  for (std::size_t i = 0; i < lg.size(); ++i) {
    if (prof.flagged[i]) continue;
    CHECK(prof.profile.gamma21[i] == 2.0 * prof.profile.gamma10[i]);
  }
}

TEST_CASE("series inductance distorts the profile") {
  const auto dev = physcore::preset("3cp");
  auto opts = options_from_device(dev);
  const auto ideal = make_giant_transmon_network(opts);
  opts.l_series = 2e-9;
  const auto loaded = make_giant_transmon_network(opts);
  const double l0 = squid_of(ideal);
  std::vector<double> lg;
  for (int i = 0; i < 25; ++i) lg.push_back(l0 * std::pow(0.4, 1.0 - 2.0 * i / 24.0));
  const double ref = analytic_fwhm_hz(dev);
  const double a = sweep_inductance(ideal, lg).profile.fwhm / (2.0 * std::numbers::pi);
  const double b = sweep_inductance(loaded, lg).profile.fwhm / (2.0 * std::numbers::pi);
  CHECK(std::abs(b / ref - 1.0) > 2.0 * std::abs(a / ref - 1.0));
  CHECK(std::abs(b / ref - 1.0) > 0.05);
}

TEST_CASE("network validation") {
  NodalNetwork ok;
  ok.v_phase = 1.2e8;
  ok.add_cpw(0.01, "p1", "p2");
  CHECK_NOTHROW(ok.validate());

  auto neg = ok;
  neg.add_capacitor(-1e-15, "p1", kGround);
  CHECK_THROWS_AS(neg.validate(), DomainError);

  auto zero_cap = ok;
  zero_cap.add_capacitor(0.0, "p1", kGround);
  CHECK_THROWS_AS(zero_cap.validate(), DomainError);

  auto lser = ok;
  lser.add_series_inductor(0.0, "p2", "x");
  CHECK_NOTHROW(lser.validate());

  NodalNetwork split;
  split.v_phase = 1.2e8;
  split.add_cpw(0.01, "p1", "a");
  split.add_cpw(0.01, "b", "p2");
  CHECK_THROWS_AS(split.validate(), DomainError);

  auto ghost = ok;
  ghost.island = "nowhere";
  CHECK_THROWS_AS(ghost.validate(), DomainError);

  CHECK(is_ground("gnd"));
  CHECK(is_ground("0"));
  CHECK_FALSE(is_ground("p1"));
}

TEST_CASE("squid helpers") {
  const auto net = make_giant_transmon_network(options_from_device(physcore::preset("6cp")));
  const auto floating = without_squid(net);
  CHECK(squid_of(floating) == 0.0);
  CHECK(floating.branches.size() + 1 == net.branches.size());
  const auto retuned = with_squid(floating, 7e-9);
  CHECK(squid_of(retuned) == 7e-9);
  CHECK(squid_of(with_squid(net, 3e-9)) == 3e-9);
  CHECK(with_squid(net, 3e-9).branches.size() == net.branches.size());
  std::size_t couplings = 0;
  for (const auto& b : net.branches)
    if (b.kind == BranchKind::capacitor && (b.a == net.island || b.b == net.island)) ++couplings;
  CHECK(couplings == 7);  // six coupling points plus the ground capacitor
}

TEST_CASE("netlist round trip") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto net = random_network(rng, trial % 2 == 1);
    std::istringstream in(format_netlist(net));
    const auto back = parse_netlist(in, "mem");
    CHECK(back.port1 == net.port1);
    CHECK(back.port2 == net.port2);
    CHECK(back.island == net.island);
    CHECK(back.z0 == net.z0);
    CHECK(back.v_phase == net.v_phase);
    REQUIRE(back.branches.size() == net.branches.size());
    for (double w : {2e10, 4e10}) {
      const SMatrix a = solve_s(net, w);
      const SMatrix b = solve_s(back, w);
      CHECK(a.s21 == b.s21);
      CHECK(a.s11 == b.s11);
    }
  }
  const auto ref = load_netlist(GA_DATA_DIR "/3cp.net");
  const auto gen = make_giant_transmon_network(options_from_device(physcore::preset("3cp")));
  CHECK(std::abs(solve_s(ref, 3.6e10).s21 - solve_s(gen, 3.6e10).s21) < 1e-9);
}

TEST_CASE("netlist errors carry line numbers") {
  const char* text =
      "ports p1 p2\n"
      "# a comment\n"
      "cpw 0.01 50 1.2e8 p1 p2\n"
      "cap abc p1 gnd\n";
  std::istringstream in(text);
  try {
    parse_netlist(in, "bad.net");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("bad.net:4:") != std::string::npos);
  }
  std::istringstream unknown("ports p1 p2\nresistor 50 p1 p2\n");
  CHECK_THROWS_AS(parse_netlist(unknown, "u.net"), ParseError);
  std::istringstream invalid("ports p1 p2\ncpw 0.01 50 1.2e8 p1 x\n");
  CHECK_THROWS_AS(parse_netlist(invalid, "v.net"), DomainError);
}
