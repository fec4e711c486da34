#include "crossbound/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "crossbound/errors.hpp"

namespace crossbound {

std::array<SymmetryClass, 4> SymmetryClass::all() {
  return {even_even(), odd_even(), even_odd(), odd_odd()};
}

std::string SymmetryClass::label() const {
  std::string s;
  s += (x == Parity::Even) ? 'e' : 'o';
  s += (y == Parity::Even) ? 'e' : 'o';
  return s;
}

SymmetryClass SymmetryClass::parse(const std::string& label) {
  if (label.size() == 2) {
    auto parity = [](char c) -> Parity {
      if (c == 'e') return Parity::Even;
      if (c == 'o') return Parity::Odd;
      throw InvalidGrid("unknown symmetry class letter");
    };
    return {parity(label[0]), parity(label[1])};
  }
  throw InvalidGrid("symmetry class must be one of ee, oe, eo, oo (got '" + label + "')");
}

CrossProblem CrossProblem::make(double beta, SymmetryClass sym, double Lx, double Ly) {
  if (!(beta >= 1.0)) {
    throw InvalidGrid("beta must be >= 1 (use normalize_problem for beta < 1)");
  }
  if (!(Lx >= 1.0) || !(Ly >= 1.0)) {
    throw InvalidGrid("truncation half-lengths must contain the junction (L >= 1)");
  }
  return CrossProblem{beta, sym, Lx, Ly};
}

NormalizedProblem normalize_problem(double beta, SymmetryClass sym, double Lx, double Ly) {
  if (!(beta > 0.0)) {
    throw InvalidGrid("beta must be positive");
  }
  if (beta >= 1.0) {
    return {CrossProblem::make(beta, sym, Lx, Ly), false};
  }
  // The beta < 1 problem is the beta' = 1/beta problem rotated by 90
  // degrees, so the x and y parities exchange along with the axes.
  return {CrossProblem::make(1.0 / beta, sym.transposed(), Ly, Lx), true};
}

double continuum_threshold(double beta) {
  if (!(beta >= 1.0)) {
    throw InvalidGrid("continuum_threshold requires beta >= 1");
  }
  const double k = M_PI / (2.0 * beta);
  return k * k;
}

double continuum_threshold(const CrossProblem& problem) {
  return continuum_threshold(problem.beta);
}

double class_threshold_ratio(SymmetryClass sym, double beta) {
  if (!(beta >= 1.0)) {
    throw InvalidGrid("class_threshold_ratio requires beta >= 1");
  }
  // Lowest transverse mode of each open channel with the right parity:
  // horizontal strip (propagation along x): even-y mode at E_TH, odd-y at
  // 4 E_TH; vertical strip (propagation along y): even-x at beta^2 E_TH,
  // odd-x at 4 beta^2 E_TH. The class threshold is the channel minimum.
  const double b2 = beta * beta;
  const double horizontal = (sym.y == Parity::Even) ? 1.0 : 4.0;
  const double vertical = ((sym.x == Parity::Even) ? 1.0 : 4.0) * b2;
  return std::min(horizontal, vertical);
}

ThresholdInfo make_threshold_info(const CrossProblem& problem) {
  return {continuum_threshold(problem.beta),
          class_threshold_ratio(problem.sym, problem.beta)};
}

AxisConditions desymmetrize(SymmetryClass sym) {
  auto condition = [](Parity p) {
    return p == Parity::Even ? AxisCondition::Neumann : AxisCondition::Dirichlet;
  };
  return {condition(sym.x), condition(sym.y)};
}

}  // namespace crossbound
