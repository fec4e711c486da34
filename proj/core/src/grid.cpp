#include "crossbound/grid.hpp"

#include <cmath>
#include <string>

#include "crossbound/errors.hpp"

namespace crossbound {

namespace {

int checked_inverse_spacing(int N, double L, const char* axis) {
  if (N < 4 || N % 2 != 0) {
    throw InvalidGrid(std::string("N") + axis + " must be an even integer >= 4, got " +
                      std::to_string(N));
  }
  const double q = N / (2.0 * L);
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, q) || r < 1.0) {
    throw InvalidGrid(std::string("grid (N=") + std::to_string(N) + ", L" + axis + "=" +
                      std::to_string(L) + ") does not place the arm boundary on a grid line "
                      "(1/h = " + std::to_string(q) + " is not a positive integer)");
  }
  return static_cast<int>(r);
}

}  // namespace

Grid build_grid(const CrossProblem& problem, int Nx, int Ny) {
  Grid g;
  g.Nx = Nx;
  g.Ny = Ny;
  g.Lx = problem.Lx;
  g.Ly = problem.Ly;
  g.inv_hx = checked_inverse_spacing(Nx, problem.Lx, "x");
  g.inv_hy = checked_inverse_spacing(Ny, problem.Ly, "y");
  g.hx = 1.0 / g.inv_hx;
  g.hy = 1.0 / g.inv_hy;
  return g;
}

InteriorIndexMap InteriorIndexMap::build(const Grid& grid, const CrossProblem& problem,
                                         DomainMode mode) {
  InteriorIndexMap m;
  m.grid_ = grid;
  m.problem_ = problem;
  m.mode_ = mode;

  if (mode == DomainMode::Quarter) {
    // Odd parity puts a Dirichlet line on the axis, so the axis nodes drop
    // out of the unknown set.
    m.min_kx_ = (problem.sym.x == Parity::Odd) ? 1 : 0;
    m.min_ky_ = (problem.sym.y == Parity::Odd) ? 1 : 0;
  } else {
    m.min_kx_ = -grid.max_kx();
    m.min_ky_ = -grid.max_ky();
  }
  m.span_x_ = grid.max_kx() - m.min_kx_ + 1;
  m.span_y_ = grid.max_ky() - m.min_ky_ + 1;
  m.lookup_.assign(static_cast<std::size_t>(m.span_x_) * m.span_y_, -1);

  for (int ky = m.min_ky_; ky <= grid.max_ky(); ++ky) {
    for (int kx = m.min_kx_; kx <= grid.max_kx(); ++kx) {
      if (!grid.inside_cross(kx, ky)) continue;
      const int row = static_cast<int>(m.nodes_.size());
      m.nodes_.emplace_back(kx, ky);
      m.lookup_[static_cast<std::size_t>(ky - m.min_ky_) * m.span_x_ + (kx - m.min_kx_)] = row;
    }
  }

  m.wall_adjacent_.resize(m.nodes_.size(), 0);
  for (std::size_t row = 0; row < m.nodes_.size(); ++row) {
    const auto [kx, ky] = m.nodes_[row];
    const int neighbors[4][2] = {{kx - 1, ky}, {kx + 1, ky}, {kx, ky - 1}, {kx, ky + 1}};
    for (const auto& nb : neighbors) {
      int jx = nb[0], jy = nb[1];
      if (mode == DomainMode::Quarter) {
        // Even-parity axes reflect the stencil instead of zeroing it.
        if (jx < 0 && problem.sym.x == Parity::Even) jx = -jx;
        if (jy < 0 && problem.sym.y == Parity::Even) jy = -jy;
      }
      if (m.index_of(jx, jy) < 0) {
        m.wall_adjacent_[row] = 1;
        break;
      }
    }
  }
  return m;
}

int InteriorIndexMap::index_of(int kx, int ky) const {
  if (kx < min_kx_ || ky < min_ky_ || kx > grid_.max_kx() || ky > grid_.max_ky()) {
    return -1;
  }
  return lookup_[static_cast<std::size_t>(ky - min_ky_) * span_x_ + (kx - min_kx_)];
}

}  // namespace crossbound
