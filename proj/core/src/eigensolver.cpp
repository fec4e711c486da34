#include "crossbound/eigensolver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "crossbound/errors.hpp"

namespace crossbound {

namespace {

// splitmix64: tiny deterministic stream for start vectors, identical on
// every platform.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  double next_symmetric() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * (1.0 / 9007199254740992.0) - 0.5;
  }
};

/// Solver for (A - sigma I) x = b. Uses the fast Cholesky-type path when the
/// shifted matrix is positive definite and falls back to a pivoted LU for
/// indefinite shifts.
class ShiftedSolver {
 public:
  ShiftedSolver(const Eigen::SparseMatrix<double>& A, double sigma) {
    Eigen::SparseMatrix<double> shifted = A;
    if (sigma != 0.0) {
      Eigen::SparseMatrix<double> identity(A.rows(), A.cols());
      identity.setIdentity();
      shifted = A - sigma * identity;
    }
    shifted.makeCompressed();

    ldlt_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    ldlt_->compute(shifted);
    if (ldlt_->info() == Eigen::Success && pivots_ok(*ldlt_)) {
      return;
    }
    ldlt_.reset();

    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu_->compute(shifted);
    if (lu_->info() != Eigen::Success) {
      throw ShiftFactorizationFailure(
          "factorization of A - sigma I failed (shift too close to an eigenvalue?)");
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    if (ldlt_) return ldlt_->solve(b);
    return lu_->solve(b);
  }

 private:
  static bool pivots_ok(const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& f) {
    const auto& d = f.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (!(dmax > 0.0) || !std::isfinite(dmax)) return false;
    const double floor = dmax * 1e-14 * d.size();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (!(std::abs(d[i]) > floor)) return false;
    }
    return true;
  }

  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> ldlt_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
}

}  // namespace

EigenSolution spectral_transform_solve(const Eigen::SparseMatrix<double>& A, double shift,
                                       int k, const SolverOptions& opts) {
  const int n = static_cast<int>(A.rows());
  if (A.rows() != A.cols()) throw Error("matrix must be square");
  if (k < 1 || k > n) throw Error("k must be in [1, dim]");
  if (!(opts.tol > 0.0) || opts.tol > 1e-2) throw Error("tol must be in (0, 1e-2]");

  ShiftedSolver solver(A, shift);
  SplitMix64 rng(opts.seed);

  const int max_steps = std::min(n, std::max(opts.max_iterations, 2 * k));
  Eigen::MatrixXd V(n, max_steps);        // Lanczos basis
  std::vector<double> alpha, beta;        // tridiagonal entries
  alpha.reserve(max_steps);
  beta.reserve(max_steps);

  auto random_unit = [&]() {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.next_symmetric();
    return v;
  };

  auto orthogonalize = [&](Eigen::VectorXd& w, int j) {
    for (int pass = 0; pass < 2; ++pass) {
      if (j > 0) w -= V.leftCols(j) * (V.leftCols(j).transpose() * w).eval();
    }
  };

  {
    Eigen::VectorXd v0 = random_unit();
    v0.normalize();
    V.col(0) = v0;
  }

  EigenSolution best;
  double best_residual = std::numeric_limits<double>::infinity();

  int j = 0;
  Eigen::VectorXd w;
  while (j < max_steps) {
    w = solver.solve(V.col(j));
    double a = V.col(j).dot(w);
    w -= a * V.col(j);
    if (j > 0) w -= beta[j - 1] * V.col(j - 1);
    orthogonalize(w, j + 1);
    alpha.push_back(a);
    double b = w.norm();
    ++j;

    const bool exhausted = (j == n);
    const double breakdown = 1e-13 * std::max(1.0, std::abs(a));
    if (j < max_steps && !exhausted) {
      if (b < breakdown) {
        // Invariant subspace found; continue in its orthogonal complement.
        Eigen::VectorXd fresh = random_unit();
        orthogonalize(fresh, j);
        const double norm = fresh.norm();
        if (norm < 1e-8) break;  // nothing left to explore
        V.col(j) = fresh / norm;
        beta.push_back(0.0);
      } else {
        V.col(j) = w / b;
        beta.push_back(b);
      }
    }

    const bool last_chance = (j == max_steps) || exhausted;
    if (j >= k && (last_chance || j % 5 == 0)) {
      // Ritz pairs of the tridiagonal T_j.
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(j, j);
      for (int i = 0; i < j; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < j) T(i, i + 1) = T(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      if (es.info() != Eigen::Success) continue;

      // Map OP eigenvalues theta back to lambda = shift + 1/theta and pick
      // the k pairs with the smallest lambda among those nearest the shift.
      std::vector<int> order(j);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a_, int b_) {
        return std::abs(es.eigenvalues()[a_]) > std::abs(es.eigenvalues()[b_]);
      });
      order.resize(k);
      std::sort(order.begin(), order.end(), [&](int a_, int b_) {
        const double la = shift + 1.0 / es.eigenvalues()[a_];
        const double lb = shift + 1.0 / es.eigenvalues()[b_];
        return la < lb;
      });

      EigenSolution sol;
      sol.eigenvalues.resize(k);
      sol.eigenvectors.resize(n, k);
      sol.residuals.resize(k);
      sol.iterations = j;
      sol.tol = opts.tol;
      sol.shift = shift;

      double worst = 0.0;
      for (int m = 0; m < k; ++m) {
        const double theta = es.eigenvalues()[order[m]];
        if (theta == 0.0 || !std::isfinite(theta)) {
          worst = std::numeric_limits<double>::infinity();
          break;
        }
        Eigen::VectorXd x = V.leftCols(j) * es.eigenvectors().col(order[m]);
        x.normalize();
        const double lambda = shift + 1.0 / theta;
        const double res = (A * x - lambda * x).norm();
        sol.eigenvalues[m] = lambda;
        sol.eigenvectors.col(m) = x;
        sol.residuals[m] = res;
        worst = std::max(worst, res / std::max(std::abs(lambda), 1e-300));
      }

      if (worst < best_residual) {
        best_residual = worst;
        best = sol;
      }
      if (worst <= opts.tol) {
        for (int m = 0; m < k; ++m) fix_sign(best.eigenvectors.col(m));
        return best;
      }
      if (exhausted) break;
    }
    if (exhausted) break;
  }

  throw NonConvergence(j, best_residual);
}

EigenSolution smallest_eigenpairs(const Eigen::SparseMatrix<double>& A, int k,
                                  const SolverOptions& opts) {
  return spectral_transform_solve(A, 0.0, k, opts);
}

EigenSolution smallest_eigenpairs(const OperatorMatrix& op, int k, const SolverOptions& opts) {
  return smallest_eigenpairs(op.matrix, k, opts);
}

EigenSolution spectral_transform_solve(const OperatorMatrix& op, double shift, int k,
                                       const SolverOptions& opts) {
  return spectral_transform_solve(op.matrix, shift, k, opts);
}

}  // namespace crossbound
