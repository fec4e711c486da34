#include "crossbound/operator.hpp"

#include <cmath>
#include <vector>

#include "crossbound/errors.hpp"

namespace crossbound {

namespace {

double axis_weight(const std::pair<int, int>& node) {
  double w = 1.0;
  if (node.first == 0) w *= 0.5;
  if (node.second == 0) w *= 0.5;
  return w;
}

}  // namespace

OperatorMatrix assemble_operator(const Grid& grid, const CrossProblem& problem,
                                 DomainMode mode) {
  auto map = std::make_shared<InteriorIndexMap>(
      InteriorIndexMap::build(grid, problem, mode));
  const int n = map->size();
  if (n == 0) {
    throw InvalidGrid("no interior nodes: truncation box or grid too coarse");
  }

  const double cx = 1.0 / (grid.hx * grid.hx);
  const double cy = 1.0 / (problem.beta * problem.beta * grid.hy * grid.hy);
  const bool quarter = mode == DomainMode::Quarter;
  const bool even_x = problem.sym.x == Parity::Even;
  const bool even_y = problem.sym.y == Parity::Even;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * 5);

  for (int row = 0; row < n; ++row) {
    const auto [kx, ky] = map->node(row);
    triplets.emplace_back(row, row, 2.0 * cx + 2.0 * cy);

    const double w_row = quarter ? axis_weight({kx, ky}) : 1.0;
    auto couple = [&](int jx, int jy, double coeff) {
      if (quarter) {
        if (jx < 0) {
          if (!even_x) return;  // Dirichlet axis
          jx = -jx;             // ghost-node reflection
        }
        if (jy < 0) {
          if (!even_y) return;
          jy = -jy;
        }
      }
      const int col = map->index_of(jx, jy);
      if (col < 0) return;  // wall or outer cut: Dirichlet zero
      const double w_col = quarter ? axis_weight(map->node(col)) : 1.0;
      triplets.emplace_back(row, col, -coeff * std::sqrt(w_row / w_col));
    };

    couple(kx - 1, ky, cx);
    couple(kx + 1, ky, cx);
    couple(kx, ky - 1, cy);
    couple(kx, ky + 1, cy);
  }

  OperatorMatrix op;
  op.grid = grid;
  op.problem = problem;
  op.map = std::move(map);
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  return op;
}

Eigen::VectorXd to_physical(const InteriorIndexMap& map, const Eigen::VectorXd& solver_vec) {
  if (solver_vec.size() != map.size()) {
    throw Error("vector length does not match the index map");
  }
  Eigen::VectorXd v = solver_vec;
  if (map.mode() == DomainMode::Quarter) {
    for (int row = 0; row < map.size(); ++row) {
      const double w = axis_weight(map.node(row));
      if (w != 1.0) v[row] /= std::sqrt(w);
    }
  }
  return v;
}

Field extract_field(const Eigen::VectorXd& solver_vec, const InteriorIndexMap& map,
                    const Grid& grid) {
  if (solver_vec.size() != map.size()) {
    throw Error("vector length does not match the index map");
  }
  const Eigen::VectorXd v = to_physical(map, solver_vec);

  Field field;
  field.grid = grid;
  field.problem = map.problem();
  const int mx = grid.max_kx(), my = grid.max_ky();
  field.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * mx + 1) * (2 * my + 1));

  const double sx = (map.problem().sym.x == Parity::Odd) ? -1.0 : 1.0;
  const double sy = (map.problem().sym.y == Parity::Odd) ? -1.0 : 1.0;
  auto set = [&](int kx, int ky, double value) {
    field.values[static_cast<Eigen::Index>(ky + my) * (2 * mx + 1) + (kx + mx)] = value;
  };

  for (int row = 0; row < map.size(); ++row) {
    const auto [kx, ky] = map.node(row);
    if (map.mode() == DomainMode::Full) {
      set(kx, ky, v[row]);
      continue;
    }
    set(kx, ky, v[row]);
    if (kx > 0) set(-kx, ky, sx * v[row]);
    if (ky > 0) set(kx, -ky, sy * v[row]);
    if (kx > 0 && ky > 0) set(-kx, -ky, sx * sy * v[row]);
  }
  return field;
}

namespace {

/// Lowest grid eigenvalue of -d^2/ds^2 on the strip (-1, 1) with spacing h,
/// restricted to the given parity: mode index m = 1 (even) or 2 (odd).
double strip_transverse_mode(int inv_h, Parity parity) {
  const double h = 1.0 / inv_h;
  const int m = (parity == Parity::Even) ? 1 : 2;
  const double s = std::sin(m * M_PI * h / 4.0);
  return 4.0 / (h * h) * s * s;
}

}  // namespace

double grid_channel_threshold_along_x(const Grid& grid, const CrossProblem& problem) {
  const double b2 = problem.beta * problem.beta;
  return strip_transverse_mode(grid.inv_hy, problem.sym.y) / b2;
}

double grid_channel_threshold_along_y(const Grid& grid, const CrossProblem& problem) {
  return strip_transverse_mode(grid.inv_hx, problem.sym.x);
}

double grid_class_threshold(const Grid& grid, const CrossProblem& problem) {
  return std::min(grid_channel_threshold_along_x(grid, problem),
                  grid_channel_threshold_along_y(grid, problem));
}

}  // namespace crossbound
