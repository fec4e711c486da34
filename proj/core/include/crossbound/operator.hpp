#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <memory>

#include "crossbound/grid.hpp"

namespace crossbound {

/// Assembled sparse operator -(d^2/dx'^2 + (1/beta^2) d^2/dy'^2) restricted
/// to the mapped interior nodes, with Dirichlet walls and parity conditions
/// folded in.
///
/// On the desymmetrized quadrant, even-parity axes are handled by ghost-node
/// reflection; the resulting one-sided coupling is made symmetric by the
/// diagonal similarity that weights on-axis nodes by 1/2 (their share of the
/// full-domain inner product). Eigenvalues are exactly those of the full
/// problem restricted to the symmetry class; eigenvectors are recovered
/// through to_physical().
struct OperatorMatrix {
  Eigen::SparseMatrix<double> matrix;
  Grid grid;
  CrossProblem problem;
  std::shared_ptr<const InteriorIndexMap> map;

  int dim() const { return static_cast<int>(matrix.rows()); }

  /// The uniform diagonal entry 2/hx^2 + 2/(beta^2 hy^2).
  double diagonal_value() const {
    const double b2 = problem.beta * problem.beta;
    return 2.0 / (grid.hx * grid.hx) + 2.0 / (b2 * grid.hy * grid.hy);
  }
};

OperatorMatrix assemble_operator(const Grid& grid, const CrossProblem& problem,
                                 DomainMode mode = DomainMode::Quarter);

/// Undoes the symmetrizing on-axis scaling: physical nodal values from a
/// solver-basis vector. Identity in Full mode.
Eigen::VectorXd to_physical(const InteriorIndexMap& map, const Eigen::VectorXd& solver_vec);

/// Nodal scalar field on the full (N-1) x (N-1) grid, zero on walls and
/// outside the cross; quarter solutions are reflected with their parity
/// signs.
struct Field {
  Grid grid;
  CrossProblem problem;
  Eigen::VectorXd values;  ///< lexicographic (y outer, x inner)

  double at(int kx, int ky) const {
    const int mx = grid.max_kx(), my = grid.max_ky();
    if (std::abs(kx) > mx || std::abs(ky) > my) return 0.0;
    return values[static_cast<Eigen::Index>(ky + my) * (2 * mx + 1) + (kx + mx)];
  }
};

/// Scatters a solver-basis vector to the full node grid. Throws Error on a
/// length mismatch.
Field extract_field(const Eigen::VectorXd& solver_vec, const InteriorIndexMap& map,
                    const Grid& grid);

/// Discrete transverse threshold of the horizontal channel (tails along x):
/// the lowest y-transverse grid mode compatible with the class's y parity.
double grid_channel_threshold_along_x(const Grid& grid, const CrossProblem& problem);

/// Same for the vertical channel (tails along y) and the x parity.
double grid_channel_threshold_along_y(const Grid& grid, const CrossProblem& problem);

/// Grid-level continuum edge seen by the class: the smaller of the two
/// channel thresholds. States below it decay exponentially on this grid.
double grid_class_threshold(const Grid& grid, const CrossProblem& problem);

}  // namespace crossbound
