#pragma once

// EIT versus Autler-Townes discrimination by Akaike's information criterion.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "giant/common.hpp"
#include "giant/nlls.hpp"

namespace ga::fitcore {

/// Difference of two co-centred Lorentzians.
double eit_model(double delta, double c_plus, double gamma_plus, double c_minus, double gamma_minus);

/// Two identical Lorentzians at +-delta0.
double ats_model(double delta, double c, double gamma, double delta0);

struct AicValue {
  double value = 0.0;  // n ln(sum r^2 / n) + 2k, 1e-300 floor when perfect
  bool perfect_fit = false;
};

AicValue aic(std::span<const double> residuals, int k);

/// Normalised Akaike weights exp(-(I_i - I_min)/2) / sum.
std::vector<double> akaike_weights(const std::vector<double>& ics);

/// Absorption spectrum: -Re(r) on a detuning axis (rad/s).
struct AbsorptionTrace {
  std::vector<double> delta;
  std::vector<double> absorption;
};

/// -preprocess(spectrum, phase, scale); the axis is spectrum.omega - center.
AbsorptionTrace absorption_trace(const Spectrum& spectrum, double phase, double scale, double center = 0.0);

enum class Verdict { eit, ats, withheld };

const char* to_string(Verdict v);

struct ModelSelection {
  std::optional<FitReport> report_eit;  // height_plus, gamma_plus, height_minus, gamma_minus
  std::optional<FitReport> report_ats;  // height, gamma, delta0 (height = C^2/gamma^2)
  double delta = 0.0;                   // |I_EIT - I_ATS|
  double w_eit = 0.5;
  double w_ats = 0.5;
  Verdict verdict = Verdict::withheld;
  std::string note;

  /// w_ATS / w_EIT.
  double ats_over_eit() const { return w_ats / w_eit; }
};

/// Best-of-multistart fit of one model family.
FitReport fit_eit_model(const AbsorptionTrace& trace, Exec exec = Exec::parallel);
FitReport fit_ats_model(const AbsorptionTrace& trace, Exec exec = Exec::parallel);

/// Fits both families (twelve starts each), computes AIC, weights and the
/// verdict. The verdict is withheld when a family fails to converge or
/// neither family beats the zero-absorption baseline by more than 2.
ModelSelection model_select(const AbsorptionTrace& trace, Exec exec = Exec::parallel);

}  // namespace ga::fitcore
