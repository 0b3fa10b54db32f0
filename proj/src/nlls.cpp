#include "giant/nlls.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace ga::fitcore {

double FitReport::value(const std::string& name) const {
  for (const auto& e : params)
    if (e.name == name) return e.value;
  throw DomainError("FitReport: no parameter named '" + name + "'");
}

double FitReport::sigma(const std::string& name) const {
  for (const auto& e : params)
    if (e.name == name) return e.sigma;
  throw DomainError("FitReport: no parameter named '" + name + "'");
}

std::vector<double> FitReport::values() const {
  std::vector<double> out;
  out.reserve(params.size());
  for (const auto& e : params) out.push_back(e.value);
  return out;
}

namespace {

constexpr double kFdStep = 6e-6;  // ~cbrt(machine epsilon)

struct Workspace {
  const Problem& problem;
  std::vector<Parameter> params;
  std::vector<int> free;
  std::vector<double> scale;  // per free parameter

  Eigen::VectorXd residuals(const std::vector<double>& values) const {
    Eigen::VectorXd r(static_cast<Eigen::Index>(problem.n_residuals));
    problem.residuals(values, std::span<double>(r.data(), problem.n_residuals));
    return r;
  }

  std::vector<double> values() const {
    std::vector<double> v(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) v[i] = params[i].value;
    return v;
  }

  // Jacobian with respect to the scaled free coordinates value/scale.
  Eigen::MatrixXd scaled_jacobian(const std::vector<double>& values, double step_mult = 1.0) const {
    const auto n = static_cast<Eigen::Index>(problem.n_residuals);
    Eigen::MatrixXd jac(n, static_cast<Eigen::Index>(free.size()));
    if (problem.jacobian && step_mult == 1.0) {
      Eigen::MatrixXd full(n, static_cast<Eigen::Index>(params.size()));
      problem.jacobian(values, full);
      for (std::size_t c = 0; c < free.size(); ++c) jac.col(c) = full.col(free[c]) * scale[c];
      return jac;
    }
    std::vector<double> probe = values;
    for (std::size_t c = 0; c < free.size(); ++c) {
      const int j = free[c];
      const Parameter& p = params[j];
      const double h = step_mult * kFdStep * std::max(std::abs(values[j]), scale[c]);
      double hi = values[j] + h, lo = values[j] - h;
      if (hi > p.upper) hi = values[j];
      if (lo < p.lower) lo = values[j];
      probe[j] = hi;
      const Eigen::VectorXd rp = residuals(probe);
      probe[j] = lo;
      const Eigen::VectorXd rm = residuals(probe);
      probe[j] = values[j];
      if (hi == lo) {
        jac.col(c).setZero();
      } else {
        jac.col(c) = (rp - rm) / (hi - lo) * scale[c];
      }
    }
    return jac;
  }
};

FitReport make_report(const Workspace& ws, const Eigen::VectorXd& r, const Eigen::MatrixXd& jac, int iterations,
                      bool converged) {
  FitReport rep;
  rep.n = static_cast<int>(r.size());
  rep.k = static_cast<int>(ws.free.size());
  rep.cost = r.squaredNorm();
  rep.sigma2_hat = rep.cost / rep.n;
  rep.perfect_fit = rep.sigma2_hat == 0.0;
  rep.aic = rep.n * std::log(std::max(rep.sigma2_hat, 1e-300)) + 2.0 * rep.k;
  rep.converged = converged;
  rep.iterations = iterations;
  rep.residuals.assign(r.data(), r.data() + r.size());

  Eigen::VectorXd sig = Eigen::VectorXd::Constant(rep.k, std::numeric_limits<double>::quiet_NaN());
  if (rep.k > 0 && rep.n > rep.k) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
    if (lu.isInvertible()) {
      const Eigen::MatrixXd cov = lu.inverse() * (rep.cost / (rep.n - rep.k));
      for (int c = 0; c < rep.k; ++c) sig(c) = std::sqrt(std::max(cov(c, c), 0.0)) * ws.scale[c];
    }
  }
  for (std::size_t i = 0, c = 0; i < ws.params.size(); ++i) {
    Estimate e{ws.params[i].name, ws.params[i].value, 0.0, ws.params[i].fixed};
    if (!e.fixed) e.sigma = sig(static_cast<Eigen::Index>(c++));
    rep.params.push_back(e);
  }
  return rep;
}

}  // namespace

Eigen::MatrixXd numeric_jacobian(const Problem& problem, const std::vector<Parameter>& params) {
  const Problem fd_only{problem.n_residuals, problem.residuals, {}};
  Workspace ws{fd_only, params, {}, {}};
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].fixed) continue;
    ws.free.push_back(static_cast<int>(i));
    const double v = params[i].value;
    ws.scale.push_back(params[i].scale > 0.0 ? params[i].scale : (v != 0.0 ? std::abs(v) : 1.0));
  }
  Eigen::MatrixXd jac = ws.scaled_jacobian(ws.values());
  for (std::size_t c = 0; c < ws.free.size(); ++c) jac.col(static_cast<Eigen::Index>(c)) /= ws.scale[c];
  return jac;
}

FitReport nlls_solve(const Problem& problem, std::vector<Parameter> init, const SolverOptions& opts) {
  Workspace ws{problem, std::move(init), {}, {}};
  for (std::size_t i = 0; i < ws.params.size(); ++i) {
    Parameter& p = ws.params[i];
    if (p.lower > p.upper) throw DomainError("nlls_solve: empty bounds for '" + p.name + "'");
    if (p.value < p.lower || p.value > p.upper) {
      throw DomainError("nlls_solve: initial value of '" + p.name + "' outside bounds");
    }
    if (p.fixed) continue;
    ws.free.push_back(static_cast<int>(i));
    ws.scale.push_back(p.scale > 0.0 ? p.scale : (p.value != 0.0 ? std::abs(p.value) : 1.0));
  }
  const auto k = static_cast<Eigen::Index>(ws.free.size());
  if (problem.n_residuals <= static_cast<std::size_t>(k)) {
    throw FitError(FitError::Kind::invalid_input, "nlls_solve: need more residuals than free parameters", {});
  }

  std::vector<double> x = ws.values();
  Eigen::VectorXd r = ws.residuals(x);
  if (!r.allFinite()) {
    throw FitError(FitError::Kind::invalid_input, "nlls_solve: residuals not finite at the initial point",
                   make_report(ws, r, Eigen::MatrixXd::Zero(r.size(), k), 0, false));
  }
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  bool converged = cost == 0.0 || k == 0;
  int iter = 0;
  Eigen::MatrixXd jac = k > 0 ? ws.scaled_jacobian(x) : Eigen::MatrixXd(r.size(), 0);

  while (!converged && iter < opts.max_iterations) {
    ++iter;
    const Eigen::VectorXd g = jac.transpose() * r;
    // Gradient test: largest cosine between r and a Jacobian column.
    double gmax = 0.0;
    const double rnorm = r.norm();
    for (Eigen::Index c = 0; c < k; ++c) {
      const double cn = jac.col(c).norm();
      if (cn > 0.0) gmax = std::max(gmax, std::abs(g(c)) / (cn * rnorm));
    }
    if (gmax <= opts.gtol) {
      converged = true;
      break;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::VectorXd diag = jtj.diagonal();
    const double dmax = diag.maxCoeff();
    for (Eigen::Index c = 0; c < k; ++c) diag(c) = std::max(diag(c), 1e-12 * dmax);

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * diag;
      const Eigen::VectorXd step = a.ldlt().solve(-g);
      std::vector<double> trial = x;
      double qnorm = 0.0;
      for (Eigen::Index c = 0; c < k; ++c) {
        const int j = ws.free[c];
        const Parameter& p = ws.params[j];
        trial[j] = std::clamp(x[j] + step(c) * ws.scale[c], p.lower, p.upper);
        qnorm += (x[j] / ws.scale[c]) * (x[j] / ws.scale[c]);
      }
      double snorm = 0.0;
      for (Eigen::Index c = 0; c < k; ++c) {
        const int j = ws.free[c];
        const double d = (trial[j] - x[j]) / ws.scale[c];
        snorm += d * d;
      }
      snorm = std::sqrt(snorm);
      qnorm = std::sqrt(qnorm);

      const Eigen::VectorXd rt = ws.residuals(trial);
      const double ct = rt.allFinite() ? rt.squaredNorm() : std::numeric_limits<double>::infinity();
      if (ct < cost) {
        const double reduction = (cost - ct) / cost;
        x = trial;
        r = rt;
        cost = ct;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        if (cost == 0.0 || reduction <= opts.ftol || snorm <= opts.xtol * (qnorm + opts.xtol)) converged = true;
      } else {
        lambda *= 10.0;
        if (snorm <= opts.xtol * (qnorm + opts.xtol) || lambda > 1e16) {
          // No descent step exists at working precision.
          converged = true;
          break;
        }
      }
    }
    for (std::size_t i = 0; i < x.size(); ++i) ws.params[i].value = x[i];
    if (k > 0) jac = ws.scaled_jacobian(x);
  }
  for (std::size_t i = 0; i < x.size(); ++i) ws.params[i].value = x[i];

  FitReport rep = make_report(ws, r, jac, iter, converged);
  if (k > 0) {
    const Eigen::MatrixXd check = ws.scaled_jacobian(x, 4.0);
    const Eigen::MatrixXd used = problem.jacobian ? ws.scaled_jacobian(x) : jac;
    double worst = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) {
      const double ref = check.col(c).cwiseAbs().maxCoeff();
      if (ref > 0.0) worst = std::max(worst, (used.col(c) - check.col(c)).cwiseAbs().maxCoeff() / ref);
    }
    rep.jacobian_discrepancy = worst;
  }
  if (!converged) {
    throw FitError(FitError::Kind::not_converged, "nlls_solve: no convergence within the iteration limit", rep);
  }
  if (k > 0 && !rep.perfect_fit) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || sv(sv.size() - 1) / sv(0) < opts.rank_tol) {
      throw FitError(FitError::Kind::rank_deficient,
                     "nlls_solve: Jacobian is rank deficient at the solution, parameters not identifiable", rep);
    }
  }
  return rep;
}

FitReport nlls_multistart(const Problem& problem, const std::vector<std::vector<Parameter>>& starts,
                          const SolverOptions& opts, Exec exec) {
  if (starts.empty()) throw DomainError("nlls_multistart: no starting points");
  const auto count = static_cast<long>(starts.size());
  std::vector<std::optional<FitReport>> results(starts.size());
  std::vector<std::optional<FitError>> errors(starts.size());
  std::vector<std::string> other_errors(starts.size());

  auto run = [&](long s) {
    try {
      results[s] = nlls_solve(problem, starts[s], opts);
    } catch (const FitError& e) {
      errors[s] = e;
    } catch (const std::exception& e) {
      other_errors[s] = e.what();
    }
  };
  if (exec == Exec::serial) {
    for (long s = 0; s < count; ++s) run(s);
  } else {
#pragma omp parallel for schedule(dynamic) num_threads(sweep_threads())
    for (long s = 0; s < count; ++s) run(s);
  }

  int best = -1;
  for (long s = 0; s < count; ++s) {
    if (results[s] && (best < 0 || results[s]->cost < results[best]->cost)) best = static_cast<int>(s);
  }
  if (best >= 0) return *results[best];
  for (long s = 0; s < count; ++s)
    if (errors[s]) throw *errors[s];
  throw NumericalError("nlls_multistart: " + other_errors[0]);
}

}  // namespace ga::fitcore
