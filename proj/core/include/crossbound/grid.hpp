#pragma once

#include <cstdlib>
#include <utility>
#include <vector>

#include "crossbound/geometry.hpp"

namespace crossbound {

/// Uniform collocation grid over the rescaled symmetric cross.
///
/// Nodes along each axis are x_k = 2 L k / N for k = -N/2+1 ... N/2-1 with N
/// even, so the outer Dirichlet cut at |x| = L falls just outside the node
/// set. Admissible grids additionally have integer 1/h so that the arm
/// boundary |x| = 1 lies exactly on a grid line.
struct Grid {
  int Nx = 0, Ny = 0;
  double Lx = 0.0, Ly = 0.0;
  double hx = 0.0, hy = 0.0;
  int inv_hx = 0, inv_hy = 0;  ///< 1/h, exact integers

  double x(int kx) const { return kx * hx; }
  double y(int ky) const { return ky * hy; }
  int max_kx() const { return Nx / 2 - 1; }  ///< largest node index along x
  int max_ky() const { return Ny / 2 - 1; }

  /// Strict interior of the union of the two strips, inside the truncation
  /// box. Integer arithmetic; the arm boundary lines are excluded.
  bool inside_cross(int kx, int ky) const {
    return std::abs(kx) <= max_kx() && std::abs(ky) <= max_ky() &&
           (std::abs(kx) < inv_hx || std::abs(ky) < inv_hy);
  }
};

/// Validates (N, L) pairs and builds the grid. Throws InvalidGrid when N is
/// odd, too small, or when the spacing does not land a grid line on the arm
/// boundary at |x| = 1.
Grid build_grid(const CrossProblem& problem, int Nx, int Ny);

/// Whether the operator acts on the desymmetrized quadrant (default) or on
/// the full truncated cross (validation mode).
enum class DomainMode { Quarter, Full };

/// Deterministic bijection between the interior cross nodes of the selected
/// domain and matrix row indices, ordered lexicographically in (y, x).
class InteriorIndexMap {
 public:
  static InteriorIndexMap build(const Grid& grid, const CrossProblem& problem,
                                DomainMode mode = DomainMode::Quarter);

  int size() const { return static_cast<int>(nodes_.size()); }
  DomainMode mode() const { return mode_; }
  const Grid& grid() const { return grid_; }
  const CrossProblem& problem() const { return problem_; }

  /// Grid indices (kx, ky) of a matrix row; nonnegative in Quarter mode.
  std::pair<int, int> node(int row) const { return nodes_[row]; }

  /// Matrix row of grid node (kx, ky), or -1 when unmapped.
  int index_of(int kx, int ky) const;

  bool on_x_axis(int row) const { return nodes_[row].first == 0; }
  bool on_y_axis(int row) const { return nodes_[row].second == 0; }
  /// True when some stencil neighbor is a Dirichlet zero (cross wall, outer
  /// cut, or an odd-parity symmetry axis).
  bool wall_adjacent(int row) const { return wall_adjacent_[row] != 0; }

 private:
  Grid grid_;
  CrossProblem problem_;
  DomainMode mode_ = DomainMode::Quarter;
  int min_kx_ = 0, min_ky_ = 0;
  int span_x_ = 0, span_y_ = 0;
  std::vector<std::pair<int, int>> nodes_;
  std::vector<int> lookup_;
  std::vector<char> wall_adjacent_;
};

}  // namespace crossbound
