#include "giant/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "giant/fitting.hpp"
#include "giant/io.hpp"
#include "giant/lambda3.hpp"
#include "giant/model_select.hpp"
#include "giant/mwnet.hpp"
#include "giant/netlist.hpp"
#include "giant/physcore.hpp"
#include "giant/scatter2.hpp"

namespace ga::cli {

using nlohmann::json;

std::vector<double> parse_grid(const std::string& text, bool allow_scalar) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  double v;
  if (parts.size() == 1 && allow_scalar && io::parse_double(parts[0], v)) return {v};
  double lo, hi, n;
  if (parts.size() != 3 || !io::parse_double(parts[0], lo) || !io::parse_double(parts[1], hi) ||
      !io::parse_double(parts[2], n)) {
    throw DomainError("grid '" + text + "' is not of the form min:max:count");
  }
  if (n != std::floor(n) || n < 2 || n > 1e8) throw DomainError("grid '" + text + "': count must be an integer >= 2");
  if (!(lo < hi)) throw DomainError("grid '" + text + "': min must be below max");
  return linspace(lo, hi, static_cast<std::size_t>(n));
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> scaled(std::vector<double> v, double factor) {
  for (double& x : v) x *= factor;
  return v;
}

// Complex Gaussian noise; per-component deviation max|t - 1| 10^(-snr/20) / sqrt(2).
void add_noise(std::vector<cplx>& t, double snr_db, std::uint64_t seed) {
  double signal = 0.0;
  for (const cplx& v : t) signal = std::max(signal, std::abs(v - 1.0));
  if (!(signal > 0.0)) return;
  const double sigma = signal * std::pow(10.0, -snr_db / 20.0) / std::sqrt(2.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (cplx& v : t) {
    const double re = normal(rng);
    const double im = normal(rng);
    v += cplx(re, im);
  }
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Rename {
  std::string name;
  double factor = 1.0;
};

json report_json(const fitcore::FitReport& r, const std::map<std::string, Rename>& rename) {
  json params = json::object(), sigmas = json::object(), fixed = json::array();
  for (const auto& e : r.params) {
    Rename rn{e.name, 1.0};
    if (const auto it = rename.find(e.name); it != rename.end()) rn = it->second;
    params[rn.name] = number_or_null(e.value * rn.factor);
    sigmas[rn.name] = number_or_null(e.sigma * rn.factor);
    if (e.fixed) fixed.push_back(rn.name);
  }
  return {{"params", params},
          {"sigmas", sigmas},
          {"fixed", fixed},
          {"k", r.k},
          {"n", r.n},
          {"sigma2_hat", number_or_null(r.sigma2_hat)},
          {"aic", number_or_null(r.aic)},
          {"perfect_fit", r.perfect_fit},
          {"converged", r.converged},
          {"iterations", r.iterations},
          {"jacobian_discrepancy", number_or_null(r.jacobian_discrepancy)}};
}

// Rates fitted in rad/s, reported as ordinary frequencies.
Rename hz(const std::string& name) { return {name, 1.0 / kTwoPi}; }

struct Context {
  std::string command;
  std::vector<std::string> args;
  std::string out_prefix;
  std::uint64_t seed = 0;
  std::ostream& out;
  json outputs = json::array();
  json notes = json::array();

  void write(const std::string& suffix, const std::string& content) {
    const std::string path = out_prefix + suffix;
    io::write_text_file(path, content);
    outputs.push_back(path);
  }

  void write_json(const std::string& suffix, const json& j) { write(suffix, j.dump(2) + "\n"); }

  void manifest(const json& inputs) {
    json m = {{"tool", "ga"},       {"version", kVersion}, {"command", command}, {"args", args},
              {"inputs", inputs},   {"seed", seed},        {"outputs", outputs}, {"notes", notes}};
    io::write_text_file(out_prefix + ".manifest.json", m.dump(2) + "\n");
  }
};

std::string csv_of(const std::function<void(std::ostream&)>& f) {
  std::ostringstream s;
  f(s);
  return s.str();
}

// ---------------------------------------------------------------- commands

struct RateProfileCmd {
  std::string device, freq = "4:8:401";
  void run(Context& c) const {
    const auto d = io::load_device(device);
    const auto grid = scaled(parse_grid(freq), ghz_to_rad(1.0));
    const auto p = physcore::rate_profile(d, grid);
    c.write(".csv", csv_of([&](std::ostream& s) { io::write_profile_csv(s, p); }));
    c.out << "omega_lambda: " << fmt("%.5f", rad_to_ghz(d.omega_lambda())) << " GHz\n";
    c.out << "FWHM: " << fmt("%.1f", rad_to_mhz(p.fwhm)) << " MHz\n";
    c.manifest({{"device", device}, {"freq_ghz", freq}});
  }
};

struct Sim2Cmd {
  std::string device, flux = "0", freq = "4:8:401";
  double gamma_phi_mhz = 0.0, omega_p_mhz = 0.0;
  std::optional<double> snr_db;
  void run(Context& c) const {
    const auto d = io::load_device(device);
    const auto flux_grid = parse_grid(flux, true);
    const auto probe = scaled(parse_grid(freq), ghz_to_rad(1.0));
    auto map = scatter2::spectroscopy_map(d, flux_grid, probe, mhz_to_rad(gamma_phi_mhz), mhz_to_rad(omega_p_mhz));
    if (snr_db) add_noise(map.values, *snr_db, c.seed);
    if (flux_grid.size() == 1) {
      Spectrum s{probe, map.values, {}};
      c.write(".csv", csv_of([&](std::ostream& o) { io::write_spectrum_csv(o, s); }));
    } else {
      c.write(".csv", csv_of([&](std::ostream& o) { io::write_map_csv(o, map, io::flux_map_axes()); }));
    }
    c.manifest({{"device", device}, {"flux_phi0", flux}, {"freq_ghz", freq}, {"gamma_phi_mhz", gamma_phi_mhz},
                {"omega_p_mhz", omega_p_mhz}, {"noise_snr_db", snr_db ? json(*snr_db) : json(nullptr)}});
  }
};

struct SimEitCmd {
  std::string params, dc = "0", dp = "-20:20:81";
  double scale = 1.0;
  std::optional<double> snr_db;
  void run(Context& c) const {
    const auto r = io::load_rates(params);
    const auto dc_grid = scaled(parse_grid(dc, true), mhz_to_rad(1.0));
    const auto dp_grid = scaled(parse_grid(dp), mhz_to_rad(1.0));
    auto map = lambda3::eit_map(r, dc_grid, dp_grid, scale);
    if (snr_db) add_noise(map.values, *snr_db, c.seed);
    if (dc_grid.size() == 1) {
      Spectrum s{dp_grid, map.values, {}};
      c.write(".csv", csv_of([&](std::ostream& o) { io::write_spectrum_csv(o, s); }));
      c.notes.push_back("single control detuning: freq_hz holds the probe detuning");
    } else {
      c.write(".csv", csv_of([&](std::ostream& o) { io::write_map_csv(o, map, io::eit_map_axes()); }));
    }
    c.manifest({{"params", params}, {"dc_mhz", dc}, {"dp_mhz", dp}, {"scale", scale},
                {"noise_snr_db", snr_db ? json(*snr_db) : json(nullptr)}});
  }
};

struct FitEq1Cmd {
  std::string spectrum;
  std::optional<double> omega10_ghz, gamma10_mhz, gamma_phi_mhz;
  bool fit_drive = false;
  void run(Context& c) const {
    const auto s = io::read_spectrum_file(spectrum);
    auto init = fitcore::guess_two_level(s);
    if (omega10_ghz) init.omega10 = ghz_to_rad(*omega10_ghz);
    if (gamma10_mhz) init.gamma10 = mhz_to_rad(*gamma10_mhz);
    if (gamma_phi_mhz) init.gamma_phi = mhz_to_rad(*gamma_phi_mhz);
    fitcore::TwoLevelMask mask;
    mask.omega_p = fit_drive;
    const auto fit = fitcore::fit_two_level(s, init, mask);
    json j = report_json(fit.report, {{"gamma10", hz("gamma10_hz")},
                                      {"gamma_phi", hz("gamma_phi_hz")},
                                      {"omega10", hz("omega10_hz")},
                                      {"omega_p_sq", {"omega_p_sq_hz2", 1.0 / (kTwoPi * kTwoPi)}}});
    j["decoherence_hz"] = number_or_null(rad_to_hz(fit.decoherence));
    j["r0"] = number_or_null(fit.r0);
    j["omega_p_hz"] = number_or_null(rad_to_hz(fit.params.omega_p_drive));
    j["decoupled"] = fit.decoupled;
    c.write(".json", j.dump(2) + "\n");
    c.out << "omega10: " << fmt("%.6f", rad_to_ghz(fit.params.omega10)) << " GHz\n";
    c.out << "gamma10: " << fmt("%.4f", rad_to_mhz(fit.params.gamma10)) << " MHz\n";
    c.out << "gamma_phi: " << fmt("%.4f", rad_to_mhz(fit.params.gamma_phi)) << " MHz\n";
    if (fit.decoupled) c.out << "decoupled: transition not resolved (gamma10 consistent with 0)\n";
    c.manifest({{"spectrum", spectrum}, {"fit_drive", fit_drive}});
  }
};

struct FitEitCmd {
  std::string map, params, free = "g21,g2phi,om_c,scale";
  double scale = 1.0;
  void run(Context& c) const {
    const auto data = io::read_map_file(map, io::eit_map_axes());
    const auto tmpl = io::load_rates(params);
    fitcore::MasterEqMask mask{false, false, false, false, false, false};
    std::stringstream ss(free);
    for (std::string name; std::getline(ss, name, ',');) {
      if (name == "g21") mask.g21 = true;
      else if (name == "g20") mask.g20 = true;
      else if (name == "g2phi") mask.g2phi = true;
      else if (name == "g1phi") mask.g1phi = true;
      else if (name == "om_c") mask.om_c = true;
      else if (name == "scale") mask.scale = true;
      else if (!name.empty()) throw DomainError("unknown free parameter '" + name + "'");
    }
    const auto fit = fitcore::fit_master_equation(data, tmpl, mask, scale);
    const Rename mhz_g21{"gamma21_mhz", 1e-6 / kTwoPi};
    json j = report_json(fit.report, {{"g21", mhz_g21},
                                      {"g20", {"gamma20_mhz", 1e-6 / kTwoPi}},
                                      {"g2phi", {"gamma2phi_mhz", 1e-6 / kTwoPi}},
                                      {"g1phi", {"gamma1phi_mhz", 1e-6 / kTwoPi}},
                                      {"om_c", {"omega_c_mhz", 1e-6 / kTwoPi}}});
    j["beta"] = tmpl.g10 > 0.0 ? json(fit.rates.g21 / tmpl.g10) : json(nullptr);
    const double om_t = lambda3::threshold_drive(fit.rates.g21, fit.rates.g20, fit.rates.g2phi);
    j["omega_t_mhz"] = rad_to_mhz(om_t);
    j["regime"] = lambda3::to_string(lambda3::classify_regime(fit.rates.om_c, om_t).regime);
    c.write(".json", j.dump(2) + "\n");
    c.out << "gamma21: " << fmt("%.4f", rad_to_mhz(fit.rates.g21)) << " MHz\n";
    c.out << "omega_c: " << fmt("%.4f", rad_to_mhz(fit.rates.om_c)) << " MHz\n";
    c.out << "scale: " << fmt("%.5f", fit.scale) << "\n";
    c.manifest({{"map", map}, {"params", params}, {"free", free}, {"scale", scale}});
  }
};

struct AtsCmd {
  std::vector<std::string> linecuts;
  std::vector<double> powers;
  void run(Context& c) const {
    std::vector<Spectrum> cuts;
    for (const auto& f : linecuts) cuts.push_back(io::read_spectrum_file(f));
    const auto cal = fitcore::extract_ats_splitting(cuts, powers);
    json per = json::array();
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      per.push_back({{"power_w", powers[i]}, {"splitting_hz", rad_to_hz(cal.splitting[i])}});
    }
    json j = {{"linecuts", per}, {"slope_hz_per_sqrt_w", rad_to_hz(cal.slope)}, {"k_hz_per_sqrt_w", rad_to_hz(cal.k)}};
    c.write(".json", j.dump(2) + "\n");
    c.out << "k21: " << io::format_double(rad_to_hz(cal.k)) << " Hz/sqrt(W)\n";
    c.manifest({{"linecuts", linecuts}, {"powers_w", powers}});
  }
};

struct SaturationCmd {
  std::string points;
  double gamma10_mhz = 0.0, gamma_phi_mhz = 0.0;
  void run(Context& c) const {
    const auto t = io::read_csv_file(points, 2);
    std::vector<fitcore::PowerPoint> pts;
    for (const auto& r : t.rows) pts.push_back({r[0], r[1]});
    const auto fit = fitcore::fit_saturation(pts, mhz_to_rad(gamma10_mhz), mhz_to_rad(gamma_phi_mhz));
    json j = report_json(fit.report, {{"k10", {"k10_hz_per_sqrt_w", 1.0 / kTwoPi}}});
    c.write(".json", j.dump(2) + "\n");
    c.out << "k10: " << io::format_double(rad_to_hz(fit.k10)) << " Hz/sqrt(W)\n";
    c.manifest({{"points", points}, {"gamma10_mhz", gamma10_mhz}, {"gamma_phi_mhz", gamma_phi_mhz}});
  }
};

struct ModelSelectCmd {
  std::string spectrum;
  double phase = 0.0, scale = 1.0, center_mhz = 0.0;
  void run(Context& c) const {
    const auto s = io::read_spectrum_file(spectrum);
    const auto trace = fitcore::absorption_trace(s, phase, scale, mhz_to_rad(center_mhz));
    const auto sel = fitcore::model_select(trace);
    json j = {{"verdict", fitcore::to_string(sel.verdict)},
              {"delta_aic", number_or_null(sel.delta)},
              {"weights", {{"eit", sel.w_eit}, {"ats", sel.w_ats}}},
              {"note", sel.note}};
    const Rename width{"", 1.0 / kTwoPi};
    if (sel.report_eit) {
      j["eit"] = report_json(*sel.report_eit, {{"gamma_plus", {"gamma_plus_hz", width.factor}},
                                               {"gamma_minus", {"gamma_minus_hz", width.factor}}});
    }
    if (sel.report_ats) {
      j["ats"] = report_json(*sel.report_ats, {{"gamma", {"gamma_hz", width.factor}},
                                               {"delta0", {"delta0_hz", width.factor}}});
    }
    c.write(".json", j.dump(2) + "\n");
    c.out << "verdict: " << fitcore::to_string(sel.verdict) << "\n";
    c.out << "w_eit: " << io::format_double(sel.w_eit) << "\nw_ats: " << io::format_double(sel.w_ats) << "\n";
    c.manifest({{"spectrum", spectrum}, {"phase", phase}, {"scale", scale}, {"center_mhz", center_mhz}});
  }
};

struct MwnetCmd {
  std::string netlist, device, freq, lgrid;
  double l_series_nh = 0.0;
  void run(Context& c) const {
    if (freq.empty() && lgrid.empty()) throw DomainError("mwnet-sweep needs --freq and/or --lgrid");
    mwnet::NodalNetwork net;
    if (!netlist.empty()) {
      net = mwnet::load_netlist(netlist);
    } else {
      auto o = device.empty() ? mwnet::GiantTransmonOptions{} : mwnet::options_from_device(io::load_device(device));
      o.l_series = l_series_nh * 1e-9;
      net = mwnet::make_giant_transmon_network(o);
      c.write(".net", mwnet::format_netlist(net));
    }
    if (!freq.empty()) {
      const auto sweep = mwnet::solve_s21(net, scaled(parse_grid(freq), ghz_to_rad(1.0)));
      std::size_t flagged = 0;
      for (bool f : sweep.flagged) flagged += f;
      c.write(".csv", csv_of([&](std::ostream& o) { io::write_spectrum_csv(o, sweep.spectrum); }));
      if (flagged) c.notes.push_back(std::to_string(flagged) + " singular frequency samples written as nan");
    }
    if (!lgrid.empty()) {
      const auto prof = mwnet::sweep_inductance(net, scaled(parse_grid(lgrid), 1e-9));
      std::size_t flagged = 0;
      for (bool f : prof.flagged) flagged += f;
      c.write("_profile.csv", csv_of([&](std::ostream& o) { io::write_profile_csv(o, prof.profile); }));
      if (flagged) c.notes.push_back(std::to_string(flagged) + " inductance points without a resolvable dip");
      c.out << "FWHM: " << fmt("%.1f", rad_to_mhz(prof.profile.fwhm)) << " MHz\n";
      c.out << "centre: " << fmt("%.5f", rad_to_ghz(prof.profile.omega_cen)) << " GHz\n";
    }
    c.manifest({{"netlist", netlist}, {"device", device}, {"freq_ghz", freq}, {"lgrid_nh", lgrid},
                {"l_series_nh", l_series_nh}});
  }
};

struct ClassifyCmd {
  std::string params;
  std::optional<double> omega_c_mhz;
  void run(Context& c) const {
    auto r = io::load_rates(params);
    if (omega_c_mhz) r.om_c = mhz_to_rad(*omega_c_mhz);
    const double om_t = lambda3::threshold_drive(r.g21, r.g20, r.g2phi);
    const auto v = lambda3::classify_regime(r.om_c, om_t);
    const auto poles = lambda3::probe_poles(r);
    c.out << "Omega_t: " << fmt("%.2f", rad_to_mhz(om_t)) << " MHz\n";
    c.out << "Omega_c: " << fmt("%.2f", rad_to_mhz(r.om_c)) << " MHz\n";
    c.out << "verdict: " << lambda3::to_string(v.regime) << (v.boundary ? " (boundary)" : "") << "\n";
    json j = {{"omega_t_mhz", rad_to_mhz(om_t)},
              {"omega_c_mhz", rad_to_mhz(r.om_c)},
              {"verdict", lambda3::to_string(v.regime)},
              {"boundary", v.boundary},
              {"resonances", poles.resonances}};
    c.write(".json", j.dump(2) + "\n");
    c.notes.push_back(
        "omega_t is computed from the supplied rates; tabulated reference thresholds can differ from it in the "
        "last printed digit through rounding of the published rates");
    c.manifest({{"params", params}, {"omega_c_mhz", omega_c_mhz ? json(*omega_c_mhz) : json(nullptr)}});
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Giant-atom spectroscopy toolkit", "ga"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string out_prefix;
  std::uint64_t seed = 0;
  std::map<const CLI::App*, std::string> default_prefix;
  auto common = [&](CLI::App* sub, const std::string& prefix) {
    sub->add_option("--out", out_prefix, "Output path prefix (default " + prefix + ")");
    sub->add_option("--seed", seed, "Random seed for synthetic noise (default 0)");
    default_prefix[sub] = prefix;
  };

  RateProfileCmd rate;
  auto* s_rate = app.add_subcommand("rate-profile", "Relaxation-rate profile of a device");
  s_rate->add_option("--device", rate.device, "Device JSON")->required();
  s_rate->add_option("--freq", rate.freq, "Frequency grid min:max:count, GHz");
  common(s_rate, "rate_profile");

  Sim2Cmd sim2;
  auto* s_sim2 = app.add_subcommand("sim-2level", "Single-tone spectroscopy map or spectrum");
  s_sim2->add_option("--device", sim2.device, "Device JSON")->required();
  s_sim2->add_option("--flux", sim2.flux, "Flux grid min:max:count (flux quanta) or one value");
  s_sim2->add_option("--freq", sim2.freq, "Probe grid min:max:count, GHz");
  s_sim2->add_option("--gamma-phi-mhz", sim2.gamma_phi_mhz, "Dephasing rate, MHz");
  s_sim2->add_option("--omega-p-mhz", sim2.omega_p_mhz, "Probe Rabi frequency, MHz");
  s_sim2->add_option("--noise-snr-db", sim2.snr_db, "Add complex Gaussian noise at this SNR");
  common(s_sim2, "sim_2level");

  SimEitCmd eit;
  auto* s_eit = app.add_subcommand("sim-eit", "Pump-probe transmission of the three-level system");
  s_eit->add_option("--params", eit.params, "Rate JSON")->required();
  s_eit->add_option("--dc", eit.dc, "Control detuning grid min:max:count or one value, MHz");
  s_eit->add_option("--dp", eit.dp, "Probe detuning grid min:max:count, MHz");
  s_eit->add_option("--scale", eit.scale, "Real scale factor");
  s_eit->add_option("--noise-snr-db", eit.snr_db, "Add complex Gaussian noise at this SNR");
  common(s_eit, "sim_eit");

  FitEq1Cmd eq1;
  auto* s_eq1 = app.add_subcommand("fit-eq1", "Fit the two-level transmission to a spectrum");
  s_eq1->add_option("--spectrum", eq1.spectrum, "Spectrum CSV (freq_hz, re_t, im_t)")->required();
  s_eq1->add_option("--omega10-ghz", eq1.omega10_ghz, "Initial transition frequency");
  s_eq1->add_option("--gamma10-mhz", eq1.gamma10_mhz, "Initial relaxation rate");
  s_eq1->add_option("--gamma-phi-mhz", eq1.gamma_phi_mhz, "Initial dephasing rate");
  s_eq1->add_flag("--fit-drive", eq1.fit_drive, "Also fit the probe Rabi frequency");
  common(s_eq1, "fit_eq1");

  FitEitCmd feit;
  auto* s_feit = app.add_subcommand("fit-eit", "Fit the three-level steady state to a pump-probe map");
  s_feit->add_option("--map", feit.map, "Map CSV (dc_hz, dp_hz, re_t, im_t[, abs_t])")->required();
  s_feit->add_option("--params", feit.params, "Rate JSON with fixed values and starting point")->required();
  s_feit->add_option("--free", feit.free, "Comma list from g21,g20,g2phi,g1phi,om_c,scale");
  s_feit->add_option("--scale", feit.scale, "Initial scale factor");
  common(s_feit, "fit_eit");

  AtsCmd ats;
  auto* s_ats = app.add_subcommand("ats-extract", "Doublet splitting versus drive power");
  s_ats->add_option("--linecut", ats.linecuts, "Linecut CSV (repeatable)")->required()->delimiter(',');
  s_ats->add_option("--powers", ats.powers, "Drive power per linecut, W")->required()->delimiter(',');
  common(s_ats, "ats_extract");

  SaturationCmd sat;
  auto* s_sat = app.add_subcommand("saturation-fit", "Coupling constant from on-resonance saturation");
  s_sat->add_option("--points", sat.points, "CSV of power_w, transmittance")->required();
  s_sat->add_option("--gamma10-mhz", sat.gamma10_mhz, "Relaxation rate, MHz")->required();
  s_sat->add_option("--gamma-phi-mhz", sat.gamma_phi_mhz, "Dephasing rate, MHz")->required();
  common(s_sat, "saturation_fit");

  ModelSelectCmd ms;
  auto* s_ms = app.add_subcommand("model-select", "EIT versus ATS by information criterion");
  s_ms->add_option("--spectrum", ms.spectrum, "Spectrum CSV; freq_hz is the probe detuning")->required();
  s_ms->add_option("--phase", ms.phase, "Rotation applied before normalisation, rad");
  s_ms->add_option("--scale", ms.scale, "Normalisation");
  s_ms->add_option("--center-mhz", ms.center_mhz, "Detuning origin, MHz");
  common(s_ms, "model_select");

  MwnetCmd mw;
  auto* s_mw = app.add_subcommand("mwnet-sweep", "Circuit-model S21 and inductance sweep");
  s_mw->add_option("--netlist", mw.netlist, "Netlist file");
  s_mw->add_option("--device", mw.device, "Device JSON for the default network");
  s_mw->add_option("--l-series-nh", mw.l_series_nh, "Series inductance per coupling point (default network), nH");
  s_mw->add_option("--freq", mw.freq, "S21 grid min:max:count, GHz");
  s_mw->add_option("--lgrid", mw.lgrid, "SQUID inductance grid min:max:count, nH");
  common(s_mw, "mwnet_sweep");

  ClassifyCmd cls;
  auto* s_cls = app.add_subcommand("classify", "EIT/ATS regime from the threshold drive");
  s_cls->add_option("--params", cls.params, "Rate JSON")->required();
  s_cls->add_option("--omega-c-mhz", cls.omega_c_mhz, "Override the control drive, MHz");
  common(s_cls, "classify");

  std::vector<std::string> argv_s = {"ga"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_s) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (out_prefix.empty()) out_prefix = default_prefix.at(sub);
  Context ctx{sub->get_name(), args, out_prefix, seed, out};
  try {
    if (sub == s_rate) rate.run(ctx);
    else if (sub == s_sim2) sim2.run(ctx);
    else if (sub == s_eit) eit.run(ctx);
    else if (sub == s_eq1) eq1.run(ctx);
    else if (sub == s_feit) feit.run(ctx);
    else if (sub == s_ats) ats.run(ctx);
    else if (sub == s_sat) sat.run(ctx);
    else if (sub == s_ms) ms.run(ctx);
    else if (sub == s_mw) mw.run(ctx);
    else if (sub == s_cls) cls.run(ctx);
  } catch (const NumericalError& e) {
    err << "ga " << ctx.command << ": numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "ga " << ctx.command << ": " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ga::cli
