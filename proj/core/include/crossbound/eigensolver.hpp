#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>

#include "crossbound/operator.hpp"

namespace crossbound {

struct SolverOptions {
  double tol = 1e-9;          ///< relative residual: ||A v - lambda v|| <= tol * lambda
  int max_iterations = 600;   ///< Lanczos steps (= linear solves)
  std::uint64_t seed = 0x517cc1b727220a95ULL;  ///< start-vector stream
};

/// Certified eigenpairs: ascending eigenvalues, unit-norm sign-fixed
/// eigenvectors, and the explicitly verified residual of every pair.
struct EigenSolution {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  ///< one column per pair
  Eigen::VectorXd residuals;     ///< ||A v - lambda v||, ||v|| = 1
  int iterations = 0;
  double tol = 0.0;
  double shift = 0.0;
};

/// k smallest eigenpairs of a sparse symmetric positive-definite matrix by
/// shift-invert Lanczos at shift 0 with full reorthogonalization.
///
/// Deterministic for a fixed seed. Throws NonConvergence when the residual
/// contract cannot be met within max_iterations; never returns unverified
/// pairs.
EigenSolution smallest_eigenpairs(const Eigen::SparseMatrix<double>& A, int k,
                                  const SolverOptions& opts = {});
EigenSolution smallest_eigenpairs(const OperatorMatrix& op, int k,
                                  const SolverOptions& opts = {});

/// Shift-invert Lanczos at an arbitrary shift. With a shift strictly below
/// the smallest eigenvalue of interest this accelerates convergence to
/// near-threshold clusters; an interior shift targets the eigenvalues
/// nearest to it. Throws ShiftFactorizationFailure when A - shift I cannot
/// be factorized.
EigenSolution spectral_transform_solve(const Eigen::SparseMatrix<double>& A, double shift,
                                       int k, const SolverOptions& opts = {});
EigenSolution spectral_transform_solve(const OperatorMatrix& op, double shift, int k,
                                       const SolverOptions& opts = {});

}  // namespace crossbound
