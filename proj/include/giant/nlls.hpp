#pragma once

// Damped (Levenberg-Marquardt) nonlinear least squares with bound
// projection and central-difference Jacobians.

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "giant/common.hpp"
#include "giant/parallel.hpp"

namespace ga::fitcore {

struct Parameter {
  std::string name;
  double value = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  // Typical magnitude; the solver works in value/scale. 0 picks |value| (or 1).
  double scale = 0.0;
  bool fixed = false;
};

/// Fills residuals (size n_residuals) for a full parameter vector.
using ResidualFn = std::function<void(std::span<const double> params, std::span<double> residuals)>;
/// Optional analytic Jacobian d residual_i / d param_j over all parameters.
using JacobianFn = std::function<void(std::span<const double> params, Eigen::MatrixXd& jac)>;

struct Problem {
  std::size_t n_residuals = 0;
  ResidualFn residuals;
  JacobianFn jacobian;  // may be empty
};

struct SolverOptions {
  int max_iterations = 300;
  double ftol = 1e-13;   // relative cost reduction
  double xtol = 1e-12;   // relative step in scaled coordinates
  double gtol = 1e-12;   // cosine between residual and Jacobian columns
  double rank_tol = 1e-10;  // smallest/largest singular value of the scaled Jacobian
};

struct Estimate {
  std::string name;
  double value = 0.0;
  double sigma = 0.0;
  bool fixed = false;
};

struct FitReport {
  std::vector<Estimate> params;
  int k = 0;               // free parameters
  int n = 0;               // residuals
  double cost = 0.0;       // sum of squared residuals
  double sigma2_hat = 0.0; // cost / n
  double aic = 0.0;        // n ln(sigma2_hat) + 2k
  bool perfect_fit = false;  // sigma2_hat == 0; aic then uses a 1e-300 floor
  bool converged = false;
  int iterations = 0;
  double jacobian_discrepancy = 0.0;  // vs central differences, at the solution
  std::vector<double> residuals;

  double value(const std::string& name) const;
  double sigma(const std::string& name) const;
  std::vector<double> values() const;
};

class FitError : public NumericalError {
 public:
  enum class Kind { not_converged, rank_deficient, invalid_input };

  FitError(Kind kind, const std::string& what, FitReport best)
      : NumericalError(what), kind_(kind), best_(std::move(best)) {}

  Kind kind() const { return kind_; }
  const FitReport& best() const { return best_; }

 private:
  Kind kind_;
  FitReport best_;
};

/// Local minimiser of the sum of squared residuals. Throws FitError when
/// the iteration limit is hit or the Jacobian at the solution is rank
/// deficient; the error carries the best report found.
FitReport nlls_solve(const Problem& problem, std::vector<Parameter> init, const SolverOptions& opts = {});

/// Runs nlls_solve from every start and keeps the lowest cost (ties go to
/// the earliest start). Starts that throw are skipped; if all fail the
/// first failure is rethrown.
FitReport nlls_multistart(const Problem& problem, const std::vector<std::vector<Parameter>>& starts,
                          const SolverOptions& opts = {}, Exec exec = Exec::parallel);

/// Central-difference Jacobian at params, perturbing only unfixed entries.
Eigen::MatrixXd numeric_jacobian(const Problem& problem, const std::vector<Parameter>& params);

}  // namespace ga::fitcore
