#include "giant/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ga::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_double(const std::string& token, double& out) {
  std::size_t b = 0, e = token.size();
  while (b < e && std::isspace(static_cast<unsigned char>(token[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(token[e - 1]))) --e;
  if (b < e && token[b] == '+') ++b;
  if (b == e) return false;
  const auto res = std::from_chars(token.data() + b, token.data() + e, out);
  return res.ec == std::errc() && res.ptr == token.data() + e;
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

CsvTable read_csv(std::istream& in, const std::string& source, std::size_t min_columns) {
  CsvTable t;
  std::string line;
  int lineno = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto cells = split_commas(body);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size(); ++i) numeric = numeric && parse_double(cells[i], row[i]);
    if (first && !numeric) {
      for (const auto& c : cells) t.header.push_back(trim(c));
      width = cells.size();
      first = false;
      continue;
    }
    first = false;
    if (!numeric) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        double tmp;
        if (!parse_double(cells[i], tmp)) fail(source, lineno, "column " + std::to_string(i + 1) + " is not a number: '" + trim(cells[i]) + "'");
      }
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      fail(source, lineno, "expected " + std::to_string(width) + " columns, found " + std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(row));
    t.line.push_back(lineno);
  }
  if (width != 0 && width < min_columns) {
    fail(source, t.line.empty() ? lineno : t.line.front(),
         "expected at least " + std::to_string(min_columns) + " columns, found " + std::to_string(width));
  }
  return t;
}

CsvTable read_csv_file(const std::string& path, std::size_t min_columns) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return read_csv(in, path, min_columns);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "freq_hz,re_t,im_t\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_double(rad_to_hz(s.omega[i])) << ',' << format_double(s.t[i].real()) << ','
        << format_double(s.t[i].imag()) << '\n';
  }
}

Spectrum read_spectrum_csv(std::istream& in, const std::string& source) {
  const CsvTable t = read_csv(in, source, 3);
  Spectrum s;
  for (const auto& r : t.rows) {
    s.omega.push_back(hz_to_rad(r[0]));
    s.t.emplace_back(r[1], r[2]);
  }
  if (s.size() == 0) throw ParseError(source + ": no data rows");
  return s;
}

Spectrum read_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return read_spectrum_csv(in, path);
}

MapAxes flux_map_axes() { return {"flux_phi0", "probe_freq_hz", 1.0, 1.0 / kTwoPi, false}; }
MapAxes eit_map_axes() { return {"dc_hz", "dp_hz", 1.0 / kTwoPi, 1.0 / kTwoPi, true}; }

void write_map_csv(std::ostream& out, const ComplexMap& m, const MapAxes& axes) {
  out << axes.row_name << ',' << axes.col_name << ",re_t,im_t" << (axes.with_abs ? ",abs_t" : "") << '\n';
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    for (std::size_t j = 0; j < m.cols.size(); ++j) {
      const cplx v = m.at(i, j);
      out << format_double(m.rows[i] * axes.row_factor) << ',' << format_double(m.cols[j] * axes.col_factor) << ','
          << format_double(v.real()) << ',' << format_double(v.imag());
      if (axes.with_abs) out << ',' << format_double(std::abs(v));
      out << '\n';
    }
  }
}

ComplexMap read_map_csv(std::istream& in, const std::string& source, const MapAxes& axes) {
  const CsvTable t = read_csv(in, source, 4);
  if (t.rows.empty()) throw ParseError(source + ": no data rows");
  std::vector<double> rows_raw, cols_raw;
  for (const auto& r : t.rows) {
    if (rows_raw.empty() || rows_raw.back() != r[0]) rows_raw.push_back(r[0]);
  }
  for (const auto& r : t.rows) {
    if (r[0] != t.rows.front()[0]) break;
    cols_raw.push_back(r[1]);
  }
  const std::size_t nr = rows_raw.size(), nc = cols_raw.size();
  if (nr * nc != t.rows.size()) throw ParseError(source + ": samples do not form a rectangular grid");
  ComplexMap m;
  m.values.resize(nr * nc);
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& r = t.rows[k];
    if (r[0] != rows_raw[k / nc] || r[1] != cols_raw[k % nc]) {
      fail(source, t.line[k], "grid point out of row-major order");
    }
    m.values[k] = cplx(r[2], r[3]);
  }
  for (double v : rows_raw) m.rows.push_back(v / axes.row_factor);
  for (double v : cols_raw) m.cols.push_back(v / axes.col_factor);
  return m;
}

ComplexMap read_map_file(const std::string& path, const MapAxes& axes) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return read_map_csv(in, path, axes);
}

void write_profile_csv(std::ostream& out, const physcore::RateProfile& p) {
  out << "freq_hz,gamma10_hz,gamma21_hz,omega_cen_hz,fwhm_hz\n";
  const std::string cen = format_double(rad_to_hz(p.omega_cen));
  const std::string fwhm = format_double(rad_to_hz(p.fwhm));
  for (std::size_t i = 0; i < p.omega_grid.size(); ++i) {
    out << format_double(rad_to_hz(p.omega_grid[i])) << ',' << format_double(rad_to_hz(p.gamma10[i])) << ','
        << format_double(rad_to_hz(p.gamma21[i])) << ',' << cen << ',' << fwhm << '\n';
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << content;
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string resolve_data_path(const std::string& path) {
  if (std::filesystem::exists(path)) return path;
#ifdef GA_DATA_DIR
  if (const auto shipped = std::filesystem::path(GA_DATA_DIR) / path; std::filesystem::exists(shipped)) {
    return shipped.string();
  }
#endif
  return path;
}

nlohmann::json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": invalid JSON: " + e.what());
  }
}

double require_number(const nlohmann::json& j, const std::string& key, const std::string& source) {
  if (!j.is_object() || !j.contains(key)) throw ParseError("missing key '" + key + "' in " + source);
  const auto& v = j.at(key);
  if (!v.is_number()) throw ParseError("key '" + key + "' in " + source + " must be a number");
  return v.get<double>();
}

double optional_number(const nlohmann::json& j, const std::string& key, double fallback, const std::string& source) {
  return j.is_object() && j.contains(key) ? require_number(j, key, source) : fallback;
}

physcore::DeviceParams device_from_json(const nlohmann::json& j, const std::string& source) {
  physcore::DeviceParams d;
  d.ej_max = ghz_to_rad(require_number(j, "ej_max_ghz", source));
  d.ec = ghz_to_rad(require_number(j, "ec_ghz", source));
  const double n = require_number(j, "n_points", source);
  if (n != std::floor(n) || n < 1 || n > 1e6) throw ParseError("key 'n_points' in " + source + " must be a positive integer");
  d.n_points = static_cast<int>(n);
  d.spacing = require_number(j, "spacing_m", source);
  d.eps_eff = require_number(j, "eps_eff", source);
  d.gamma1_max = hz_to_rad(require_number(j, "gamma1_max_hz", source));
  d.flux = optional_number(j, "flux_phi0", 0.0, source);
  d.validate();
  return d;
}

physcore::DeviceParams load_device(const std::string& path) {
  const std::string p = resolve_data_path(path);
  return device_from_json(read_json_file(p), p);
}

lambda3::ThreeLevelRates rates_from_json(const nlohmann::json& j, const std::string& source) {
  lambda3::ThreeLevelRates r;
  r.g21 = mhz_to_rad(require_number(j, "gamma21_mhz", source));
  r.g20 = mhz_to_rad(require_number(j, "gamma20_mhz", source));
  r.g10 = mhz_to_rad(require_number(j, "gamma10_mhz", source));
  r.g2phi = mhz_to_rad(require_number(j, "gamma2phi_mhz", source));
  r.g1phi = mhz_to_rad(require_number(j, "gamma1phi_mhz", source));
  r.om_c = mhz_to_rad(require_number(j, "omega_c_mhz", source));
  r.om_p = mhz_to_rad(require_number(j, "omega_p_mhz", source));
  r.d_c = mhz_to_rad(optional_number(j, "delta_c_mhz", 0.0, source));
  r.d_p = mhz_to_rad(optional_number(j, "delta_p_mhz", 0.0, source));
  r.repump = mhz_to_rad(optional_number(j, "repump_mhz", 0.0, source));
  r.validate();
  return r;
}

lambda3::ThreeLevelRates load_rates(const std::string& path) {
  const std::string p = resolve_data_path(path);
  return rates_from_json(read_json_file(p), p);
}

}  // namespace ga::io
