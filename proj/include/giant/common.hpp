#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ga {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kPlanck = 6.62607015e-34;           // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C

// Internal convention: every frequency and rate is angular (rad/s). Values
// crossing an external interface are ordinary frequencies with a _hz suffix.
constexpr double hz_to_rad(double hz) { return kTwoPi * hz; }
constexpr double rad_to_hz(double rad_s) { return rad_s / kTwoPi; }
constexpr double ghz_to_rad(double ghz) { return kTwoPi * 1e9 * ghz; }
constexpr double mhz_to_rad(double mhz) { return kTwoPi * 1e6 * mhz; }
constexpr double rad_to_mhz(double rad_s) { return rad_s / (kTwoPi * 1e6); }
constexpr double rad_to_ghz(double rad_s) { return rad_s / (kTwoPi * 1e9); }

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure could not produce a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; the message carries the source and line number.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Frequency grid with complex transmission samples.
struct Spectrum {
  std::vector<double> omega;  // rad/s
  std::vector<cplx> t;
  std::map<std::string, std::string> metadata;

  std::size_t size() const { return omega.size(); }
};

/// Complex samples on a rectangular (row, column) grid, row-major.
struct ComplexMap {
  std::vector<double> rows;
  std::vector<double> cols;
  std::vector<cplx> values;

  cplx& at(std::size_t i, std::size_t j) { return values[i * cols.size() + j]; }
  const cplx& at(std::size_t i, std::size_t j) const {
    return values[i * cols.size() + j];
  }
};

/// Evenly spaced grid including both endpoints.
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace ga
