#include "crossbound/leastsq.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "crossbound/errors.hpp"

namespace crossbound {

LinearRegression linear_regression(std::span<const double> x, std::span<const double> y) {
  LinearRegression out;
  out.n = static_cast<int>(x.size());
  if (x.size() != y.size() || x.size() < 2) {
    throw Error("linear_regression requires two equally sized samples of >= 2 points");
  }
  const int n = out.n;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw Error("linear_regression: degenerate abscissa");
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  const double ss_res = std::max(0.0, syy - out.slope * sxy);
  out.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
  if (n > 2) out.slope_stderr = std::sqrt(ss_res / (n - 2) / sxx);
  return out;
}

Eigen::VectorXd linear_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < A.cols()) {
    throw IllConditionedFit("linear least squares: rank-deficient design matrix");
  }
  return qr.solve(b);
}

namespace {

Eigen::MatrixXd numeric_jacobian(const ResidualFn& f, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& r0) {
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(r0.size());
  Eigen::MatrixXd J(m, n);
  for (int jcol = 0; jcol < n; ++jcol) {
    const double h = 1e-6 * std::max(std::abs(x[jcol]), 1e-3);
    Eigen::VectorXd xp = x, xm = x;
    xp[jcol] += h;
    xm[jcol] -= h;
    const Eigen::VectorXd rp = f(xp);
    const Eigen::VectorXd rm = f(xm);
    if (rp.allFinite() && rm.allFinite()) {
      J.col(jcol) = (rp - rm) / (2.0 * h);
    } else {
      // One-sided fallback at a domain edge.
      const Eigen::VectorXd& good = rp.allFinite() ? rp : rm;
      const double sign = rp.allFinite() ? 1.0 : -1.0;
      J.col(jcol) = sign * (good - r0) / h;
    }
  }
  return J;
}

}  // namespace

LMResult levenberg_marquardt(const ResidualFn& residuals, Eigen::VectorXd start,
                             const LMOptions& opts) {
  LMResult out;
  out.params = std::move(start);
  Eigen::VectorXd r = residuals(out.params);
  if (!r.allFinite()) {
    out.rss = std::numeric_limits<double>::infinity();
    return out;
  }
  out.rss = r.squaredNorm();

  double lambda = 1e-3;
  const int n = static_cast<int>(out.params.size());

  for (out.iterations = 0; out.iterations < opts.max_iterations; ++out.iterations) {
    const Eigen::MatrixXd J = numeric_jacobian(residuals, out.params, r);
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;

    if (g.lpNorm<Eigen::Infinity>() < 1e-16 * std::max(1.0, out.rss)) {
      out.converged = true;
      break;
    }

    bool stepped = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::MatrixXd M = JtJ;
      // Marquardt scaling keeps the damping meaningful across badly scaled
      // parameters.
      for (int i = 0; i < n; ++i) M(i, i) += lambda * std::max(JtJ(i, i), 1e-30);
      const Eigen::VectorXd step = M.ldlt().solve(-g);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      const Eigen::VectorXd trial = out.params + step;
      const Eigen::VectorXd rt = residuals(trial);
      const double rss_t = rt.allFinite() ? rt.squaredNorm()
                                          : std::numeric_limits<double>::infinity();
      if (rss_t < out.rss) {
        const double improvement = (out.rss - rss_t) / std::max(out.rss, 1e-300);
        const double rel_step = step.norm() / std::max(out.params.norm(), 1e-300);
        out.params = trial;
        r = rt;
        out.rss = rss_t;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        if (improvement < opts.ftol || rel_step < opts.xtol) {
          out.converged = true;
        }
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e14) break;
    }
    if (!stepped || out.converged) {
      out.converged = out.converged || !stepped;
      break;
    }
  }

  // Covariance estimate at the optimum.
  const int m = static_cast<int>(r.size());
  if (m > n) {
    const Eigen::MatrixXd J = numeric_jacobian(residuals, out.params, r);
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(JtJ);
    if (lu.isInvertible()) {
      out.covariance = lu.inverse() * (out.rss / (m - n));
    }
  }
  return out;
}

LMResult multistart_lm(const ResidualFn& residuals, const std::vector<Eigen::VectorXd>& starts,
                       const LMOptions& opts) {
  if (starts.empty()) throw Error("multistart_lm: no starts");
  LMResult best;
  best.rss = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    LMResult r = levenberg_marquardt(residuals, s, opts);
    if (r.rss < best.rss) best = r;
  }
  return best;
}

}  // namespace crossbound
