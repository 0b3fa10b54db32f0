#pragma once

// CSV and JSON ingestion/export. Numbers are written in shortest
// round-trip form so that every exported table parses back bit-exactly.

#include "json.hpp"
#include <iosfwd>
#include <string>
#include <vector>

#include "giant/common.hpp"
#include "giant/lambda3.hpp"
#include "giant/physcore.hpp"

namespace ga::io {

/// Shortest decimal string that parses back to the same double; "nan",
/// "inf", "-inf" for non-finite values.
std::string format_double(double v);

/// Strict full-token parse (no trailing junk). Accepts nan/inf spellings.
bool parse_double(const std::string& token, double& out);

struct CsvTable {
  std::vector<std::string> header;  // empty when the file has none
  std::vector<std::vector<double>> rows;
  std::vector<int> line;  // source line of each row (1-based)
};

/// Comma separated numbers. Blank lines and lines starting with '#' are
/// skipped; a first non-numeric line is taken as the header. Throws
/// ParseError naming the source and line on malformed rows or ragged width.
CsvTable read_csv(std::istream& in, const std::string& source, std::size_t min_columns = 1);
CsvTable read_csv_file(const std::string& path, std::size_t min_columns = 1);

/// freq_hz, re_t, im_t.
void write_spectrum_csv(std::ostream& out, const Spectrum& s);
Spectrum read_spectrum_csv(std::istream& in, const std::string& source);
Spectrum read_spectrum_file(const std::string& path);

struct MapAxes {
  std::string row_name;   // e.g. flux_phi0 or dc_hz
  std::string col_name;   // e.g. probe_freq_hz or dp_hz
  double row_factor = 1.0;  // internal value * factor = written value
  double col_factor = 1.0;
  bool with_abs = false;    // extra abs_t column
};

MapAxes flux_map_axes();  // flux_phi0, probe_freq_hz, re_t, im_t
MapAxes eit_map_axes();   // dc_hz, dp_hz, re_t, im_t, abs_t

/// Long format, one row per sample, row index outermost.
void write_map_csv(std::ostream& out, const ComplexMap& m, const MapAxes& axes);
/// Inverse of write_map_csv; requires a complete rectangular grid in
/// row-major order.
ComplexMap read_map_csv(std::istream& in, const std::string& source, const MapAxes& axes);
ComplexMap read_map_file(const std::string& path, const MapAxes& axes);

/// freq_hz, gamma10_hz, gamma21_hz, omega_cen_hz, fwhm_hz (last two repeat per row).
void write_profile_csv(std::ostream& out, const physcore::RateProfile& p);

/// Whole-file helpers; throw std::runtime_error on I/O failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// path itself when it exists, otherwise the file of that name in the
/// shipped data directory.
std::string resolve_data_path(const std::string& path);

nlohmann::json read_json_file(const std::string& path);

/// Required numeric field; ParseError "missing key 'k' in <source>".
double require_number(const nlohmann::json& j, const std::string& key, const std::string& source);
double optional_number(const nlohmann::json& j, const std::string& key, double fallback, const std::string& source);

/// ej_max_ghz, ec_ghz, n_points, spacing_m, eps_eff, gamma1_max_hz and optional flux_phi0.
physcore::DeviceParams device_from_json(const nlohmann::json& j, const std::string& source);
physcore::DeviceParams load_device(const std::string& path);

/// Rates in MHz (ordinary frequency): gamma21_mhz, gamma20_mhz,
/// gamma10_mhz, gamma2phi_mhz, gamma1phi_mhz, omega_c_mhz, omega_p_mhz;
/// optional delta_c_mhz, delta_p_mhz, repump_mhz.
lambda3::ThreeLevelRates rates_from_json(const nlohmann::json& j, const std::string& source);
lambda3::ThreeLevelRates load_rates(const std::string& path);

}  // namespace ga::io
