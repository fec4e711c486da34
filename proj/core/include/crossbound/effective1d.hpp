#pragma once

#include <array>
#include <string>
#include <vector>

#include "crossbound/geometry.hpp"

namespace crossbound {

/// One-dimensional reduction of the cross: a finite square well of depth
/// delta whose width is the narrow-arm width, with an infinite wall at the
/// center for the x-odd classes. Used as a qualitative predictor and
/// cross-check, never as an energy approximation.
struct EffectiveWell {
  double width = 2.0;   ///< well width (the narrow-arm width; rescaled = 2)
  double depth = 1.0;   ///< finite barrier height delta
  bool wall = false;    ///< infinite wall at the well center (odd-x classes)
  double energy_offset = 0.0;  ///< transverse zero-point term pi^2/(8 Ly^2)
};

/// Effective barrier height delta = 2 V0 int_{w_y/2}^{L_y} zeta_1(y)^2 dy
/// evaluated in closed form: V0 (1 - a/L_y - sin(pi a/L_y)/pi) with
/// a = w_y / 2. Throws InvalidGrid for a >= L_y or V0 <= 0.
double effective_depth(double V0, double w_y, double L_y);

/// Builds the well for a symmetry class: wall-free for even-x classes,
/// walled for odd-x classes; the offset term is reported but takes no part
/// in boundness decisions.
EffectiveWell effective_well_for(SymmetryClass sym, double V0, double w_x, double w_y,
                                 double L_y);

/// Bound-state energies (ascending, in the -1/2 d^2/dx^2 normalization,
/// offset excluded) of the finite well, from bracketed bisection of the
/// matching conditions. A wall-free well always has at least one state; a
/// walled well has states only when sqrt(2 delta) * width / 2 > pi / 2.
/// An empty list is a valid result.
std::vector<double> well_bound_states(const EffectiveWell& well);

/// Qualitative boundness of the lowest state of each class, at beta = 1 and
/// in the limit of an infinitely wide horizontal arm.
struct ClassPrediction {
  SymmetryClass sym;
  bool bound_at_unit_ratio;   ///< beta = 1 (the symmetric cross)
  bool bound_at_large_ratio;  ///< beta -> infinity
};

/// The four predictions of the effective-well picture: ee binds everywhere,
/// oo binds only near beta = 1, eo binds only at large beta, oe never binds.
std::array<ClassPrediction, 4> qualitative_predictions();

}  // namespace crossbound
