#pragma once

#include <array>
#include <string>

namespace crossbound {

/// Parity of a mode with respect to one symmetry axis of the cross.
enum class Parity { Even, Odd };

/// Boundary condition imposed on a symmetry axis of the desymmetrized
/// quarter domain.
enum class AxisCondition { Neumann, Dirichlet };

/// Parity pair labeling one of the four invariant subspaces of the cross.
///
/// The lowest state of each class lives on a desymmetrized quadrant:
/// even-even on the full-cross fundamental domain, odd-even on a rotated T,
/// even-odd on a T, odd-odd on an L.
struct SymmetryClass {
  Parity x = Parity::Even;
  Parity y = Parity::Even;

  static constexpr SymmetryClass even_even() { return {Parity::Even, Parity::Even}; }
  static constexpr SymmetryClass odd_even() { return {Parity::Odd, Parity::Even}; }
  static constexpr SymmetryClass even_odd() { return {Parity::Even, Parity::Odd}; }
  static constexpr SymmetryClass odd_odd() { return {Parity::Odd, Parity::Odd}; }

  /// All four classes in the canonical order ee, oe, eo, oo.
  static std::array<SymmetryClass, 4> all();

  /// Two-letter label: "ee", "oe", "eo", "oo" (x parity first).
  std::string label() const;

  /// Parses a two-letter label; throws InvalidGrid on anything else.
  static SymmetryClass parse(const std::string& label);

  /// The class obtained by swapping the two axes (90 degree rotation).
  SymmetryClass transposed() const { return {y, x}; }

  bool operator==(const SymmetryClass&) const = default;
};

/// One cross/T/L eigenproblem: width ratio, symmetry class, and rescaled
/// truncation half-lengths.
///
/// Coordinates are the rescaled ones in which the cross is symmetric with
/// arm half-width 1: the original domain is the union of the strips
/// {|x| < 1} and {|y| < beta}, and y' = y/beta maps it onto
/// {|x'| < 1} u {|y'| < 1} with the anisotropic operator
/// -(d^2/dx'^2 + (1/beta^2) d^2/dy'^2).
struct CrossProblem {
  double beta = 1.0;
  SymmetryClass sym = SymmetryClass::even_even();
  double Lx = 20.0;  ///< rescaled truncation half-length along x'
  double Ly = 20.0;  ///< rescaled truncation half-length along y'

  /// Validating constructor; requires beta >= 1 and Lx, Ly >= 1.
  static CrossProblem make(double beta, SymmetryClass sym, double Lx, double Ly);
};

/// Result of normalizing user input with beta < 1 (axes swapped).
struct NormalizedProblem {
  CrossProblem problem;
  bool swapped = false;  ///< true when beta was inverted and parities swapped
};

/// Normalizes (beta, class): beta < 1 is mapped to 1/beta with the two
/// parities exchanged, which is the same physical problem rotated by 90
/// degrees. Truncation lengths are swapped along with the axes.
NormalizedProblem normalize_problem(double beta, SymmetryClass sym, double Lx, double Ly);

/// First continuum threshold E_TH = (pi/(2 beta))^2 of the wider strip, in
/// -Laplacian units of the rescaled problem. Strictly decreasing in beta.
/// Throws InvalidGrid for beta < 1.
double continuum_threshold(double beta);
double continuum_threshold(const CrossProblem& problem);

/// Dimensionless multiple of E_TH below which an eigenvalue of the given
/// class counts as bound: {ee: 1, oe: 1, oo: 4, eo: min(beta^2, 4)}.
double class_threshold_ratio(SymmetryClass sym, double beta);

/// Continuum threshold seen by a class together with its ratio to E_TH.
struct ThresholdInfo {
  double e_th = 0.0;                  ///< E_TH of the wider strip
  double class_threshold_ratio = 1.0; ///< class threshold / E_TH
};

ThresholdInfo make_threshold_info(const CrossProblem& problem);

/// Boundary conditions on the two symmetry axes for the desymmetrized
/// quadrant: even parity -> Neumann, odd parity -> Dirichlet. The outer
/// cuts at x' = Lx and y' = Ly are always Dirichlet.
struct AxisConditions {
  AxisCondition x_axis;  ///< condition on the plane x' = 0
  AxisCondition y_axis;  ///< condition on the plane y' = 0
};

AxisConditions desymmetrize(SymmetryClass sym);

}  // namespace crossbound
