#pragma once

#include <Eigen/Core>
#include <functional>
#include <span>
#include <vector>

namespace crossbound {

/// Ordinary least-squares line fit y = slope * x + intercept.
struct LinearRegression {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
  int n = 0;
};

LinearRegression linear_regression(std::span<const double> x, std::span<const double> y);

/// Linear least squares min ||A c - b||; returns coefficients via column-
/// pivoted QR. Throws IllConditionedFit when A is rank deficient.
Eigen::VectorXd linear_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

/// Residual function for nonlinear fits: params -> vector of residuals.
using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LMOptions {
  int max_iterations = 400;
  double ftol = 1e-15;  ///< relative RSS improvement below which we stop
  double xtol = 1e-14;  ///< relative step size below which we stop
};

struct LMResult {
  Eigen::VectorXd params;
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
  Eigen::MatrixXd covariance;  ///< sigma^2 (J^T J)^-1; empty when singular
};

/// Damped Gauss-Newton (Levenberg-Marquardt) with central-difference
/// Jacobians. Non-finite residuals act as a rejection of the trial step, so
/// models may guard their domain by returning huge residuals.
LMResult levenberg_marquardt(const ResidualFn& residuals, Eigen::VectorXd start,
                             const LMOptions& opts = {});

/// Runs LM from several deterministic starts and keeps the lowest RSS.
LMResult multistart_lm(const ResidualFn& residuals,
                       const std::vector<Eigen::VectorXd>& starts,
                       const LMOptions& opts = {});

}  // namespace crossbound
