#include "giant/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "giant/fitting.hpp"

namespace ga::fitcore {

double eit_model(double delta, double c_plus, double gamma_plus, double c_minus, double gamma_minus) {
  const double d2 = delta * delta;
  return c_plus * c_plus / (gamma_plus * gamma_plus + d2) - c_minus * c_minus / (gamma_minus * gamma_minus + d2);
}

double ats_model(double delta, double c, double gamma, double delta0) {
  const double g2 = gamma * gamma;
  const double lo = delta - delta0;
  const double hi = delta + delta0;
  return c * c / (g2 + lo * lo) + c * c / (g2 + hi * hi);
}

AicValue aic(std::span<const double> residuals, int k) {
  if (residuals.empty()) throw DomainError("aic: no residuals");
  if (k < 1) throw DomainError("aic: parameter count must be at least 1");
  const double n = static_cast<double>(residuals.size());
  const double ss = std::inner_product(residuals.begin(), residuals.end(), residuals.begin(), 0.0);
  const double s2 = ss / n;
  return {n * std::log(std::max(s2, 1e-300)) + 2.0 * k, s2 == 0.0};
}

std::vector<double> akaike_weights(const std::vector<double>& ics) {
  if (ics.empty()) return {};
  const double best = *std::min_element(ics.begin(), ics.end());
  std::vector<double> w(ics.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < ics.size(); ++i) {
    w[i] = std::exp(-0.5 * (ics[i] - best));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

AbsorptionTrace absorption_trace(const Spectrum& spectrum, double phase, double scale, double center) {
  const auto re = preprocess(spectrum, phase, scale);
  AbsorptionTrace out;
  out.delta.reserve(re.size());
  out.absorption.reserve(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    out.delta.push_back(spectrum.omega[i] - center);
    out.absorption.push_back(-re[i]);
  }
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::eit: return "EIT";
    case Verdict::ats: return "ATS";
    default: return "withheld";
  }
}

namespace {

struct TraceScales {
  double height;
  double halfspan;
  double spacing;
};

TraceScales trace_scales(const AbsorptionTrace& trace) {
  if (trace.delta.size() != trace.absorption.size() || trace.delta.size() < 8) {
    throw DomainError("absorption trace needs at least 8 matching samples");
  }
  const auto [lo, hi] = std::minmax_element(trace.delta.begin(), trace.delta.end());
  double height = 0.0;
  for (double a : trace.absorption) height = std::max(height, std::abs(a));
  if (!(height > 0.0)) height = 1.0;
  const double halfspan = 0.5 * (*hi - *lo);
  if (!(halfspan > 0.0)) throw DomainError("absorption trace has a degenerate detuning axis");
  std::vector<double> sorted = trace.delta;
  std::sort(sorted.begin(), sorted.end());
  double spacing = 0.0;
  for (std::size_t i = 1; i < sorted.size(); ++i) spacing = std::max(spacing, sorted[i] - sorted[i - 1]);
  return {height, halfspan, spacing};
}

// Components are parametrised by peak height C^2/gamma^2. Heights are
// capped at kHeightCap times the largest |absorption|: without the cap the
// EIT family fitted to a split doublet runs off to infinite, nearly
// cancelling amplitudes and never converges.
constexpr double kHeightCap = 100.0;

// Lines narrower than the sample spacing are unresolved: such a component
// fits isolated noise samples rather than a lineshape.
constexpr double kMinWidthSteps = 0.5;

constexpr double kNullMargin = 10.0;

Problem eit_problem(const AbsorptionTrace& trace) {
  return {trace.delta.size(),
          [&trace](std::span<const double> p, std::span<double> out) {
            const double gp2 = p[1] * p[1], gm2 = p[3] * p[3];
            for (std::size_t i = 0; i < out.size(); ++i) {
              const double d2 = trace.delta[i] * trace.delta[i];
              out[i] = p[0] * gp2 / (gp2 + d2) - p[2] * gm2 / (gm2 + d2) - trace.absorption[i];
            }
          },
          {}};
}

Problem ats_problem(const AbsorptionTrace& trace) {
  return {trace.delta.size(),
          [&trace](std::span<const double> p, std::span<double> out) {
            const double g2 = p[1] * p[1];
            for (std::size_t i = 0; i < out.size(); ++i) {
              const double lo = trace.delta[i] - p[2];
              const double hi = trace.delta[i] + p[2];
              out[i] = p[0] * g2 / (g2 + lo * lo) + p[0] * g2 / (g2 + hi * hi) - trace.absorption[i];
            }
          },
          {}};
}

SolverOptions selection_options() {
  SolverOptions o;
  o.max_iterations = 1000;
  o.rank_tol = 0.0;  // a vanishing component is a legitimate optimum here
  return o;
}

}  // namespace

FitReport fit_eit_model(const AbsorptionTrace& trace, Exec exec) {
  const auto [h, span, step] = trace_scales(trace);
  const double wmin = kMinWidthSteps * step, wmax = 10.0 * span, hmax = kHeightCap * h;
  std::vector<std::vector<Parameter>> starts;
  for (double fp : {0.05, 0.12, 0.25, 0.5}) {
    for (double fm : {0.1, 0.3, 0.6}) {
      const double gp = fp * span;
      const double gm = fm * gp;
      starts.push_back({{"height_plus", h, 0.0, hmax, h},
                        {"gamma_plus", gp, wmin, wmax, gp},
                        {"height_minus", 0.5 * h, 0.0, hmax, h},
                        {"gamma_minus", gm, wmin, wmax, gm}});
    }
  }
  return nlls_multistart(eit_problem(trace), starts, selection_options(), exec);
}

FitReport fit_ats_model(const AbsorptionTrace& trace, Exec exec) {
  const auto [h, span, step] = trace_scales(trace);
  const double wmin = kMinWidthSteps * step, wmax = 10.0 * span, hmax = kHeightCap * h;
  std::vector<std::vector<Parameter>> starts;
  for (double fg : {0.03, 0.08, 0.2}) {
    for (double fd : {0.02, 0.1, 0.25, 0.5}) {
      const double g = fg * span;
      const double d0 = fd * span;
      starts.push_back({{"height", 0.5 * h, 0.0, hmax, h},
                        {"gamma", g, wmin, wmax, g},
                        {"delta0", d0, 0.0, 2.0 * span, std::max(d0, g)}});
    }
  }
  return nlls_multistart(ats_problem(trace), starts, selection_options(), exec);
}

ModelSelection model_select(const AbsorptionTrace& trace, Exec exec) {
  ModelSelection sel;
  trace_scales(trace);
  if (std::all_of(trace.absorption.begin(), trace.absorption.end(), [](double a) { return a == 0.0; })) {
    sel.note = "trace carries no absorption";
    return sel;
  }
  try {
    sel.report_eit = fit_eit_model(trace, exec);
  } catch (const NumericalError& e) {
    sel.note = std::string("EIT fit failed: ") + e.what();
  }
  try {
    sel.report_ats = fit_ats_model(trace, exec);
  } catch (const NumericalError& e) {
    sel.note += (sel.note.empty() ? "" : "; ") + std::string("ATS fit failed: ") + e.what();
  }
  if (!sel.report_eit || !sel.report_ats) return sel;

  const auto& eit = *sel.report_eit;
  const auto& ats = *sel.report_ats;
  if (eit.perfect_fit || ats.perfect_fit) {
    if (eit.perfect_fit && ats.perfect_fit) {
      sel.note = "both families reproduce the trace exactly";
      return sel;
    }
    sel.verdict = eit.perfect_fit ? Verdict::eit : Verdict::ats;
    sel.w_eit = eit.perfect_fit ? 1.0 : 0.0;
    sel.w_ats = 1.0 - sel.w_eit;
    sel.delta = INFINITY;
    sel.note = "perfect fit";
    return sel;
  }

  const auto w = akaike_weights({eit.aic, ats.aic});
  sel.w_eit = w[0];
  sel.w_ats = w[1];
  sel.delta = std::abs(eit.aic - ats.aic);

  // Zero-absorption baseline with no parameters. With free centres and widths
  // a fit to pure noise routinely gains a few units over it, so only a gain
  // of kNullMargin (strong evidence on the usual Akaike scale) counts.
  const double n = static_cast<double>(trace.absorption.size());
  double ss = 0.0;
  for (double a : trace.absorption) ss += a * a;
  const double null_ic = n * std::log(std::max(ss / n, 1e-300));
  if (std::min(eit.aic, ats.aic) > null_ic - kNullMargin) {
    sel.note = "no structure above the zero-absorption baseline";
    return sel;
  }
  if (eit.aic == ats.aic) {
    sel.note = "equal information criteria";
    return sel;
  }
  sel.verdict = eit.aic < ats.aic ? Verdict::eit : Verdict::ats;
  return sel;
}

}  // namespace ga::fitcore
