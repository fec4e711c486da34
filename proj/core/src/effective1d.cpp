#include "crossbound/effective1d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "crossbound/errors.hpp"

namespace crossbound {

double effective_depth(double V0, double w_y, double L_y) {
  if (!(V0 > 0.0)) throw InvalidGrid("barrier height V0 must be positive");
  const double a = w_y / 2.0;
  if (!(a > 0.0) || !(a < L_y)) {
    throw InvalidGrid("effective_depth requires 0 < w_y/2 < L_y");
  }
  return V0 * (1.0 - a / L_y - std::sin(M_PI * a / L_y) / M_PI);
}

EffectiveWell effective_well_for(SymmetryClass sym, double V0, double w_x, double w_y,
                                 double L_y) {
  EffectiveWell well;
  well.width = w_x;
  well.depth = effective_depth(V0, w_y, L_y);
  well.wall = (sym.x == Parity::Odd);
  well.energy_offset = M_PI * M_PI / (8.0 * L_y * L_y);
  return well;
}

namespace {

/// Bisection roots of a continuous function sampled on a uniform grid.
std::vector<double> sampled_roots(double lo, double hi, int samples,
                                  const std::function<double(double)>& f) {
  std::vector<double> roots;
  double u_prev = lo, f_prev = f(lo);
  for (int i = 1; i <= samples; ++i) {
    const double u = lo + (hi - lo) * i / samples;
    const double fu = f(u);
    if (f_prev == 0.0) {
      roots.push_back(u_prev);
    } else if (f_prev * fu < 0.0) {
      double a = u_prev, b = u;
      double fa = f_prev;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0 || (b - a) < 1e-12 * std::max(1.0, hi)) {
          a = b = m;
          break;
        }
        if (fa * fm < 0.0) {
          b = m;
        } else {
          a = m;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    u_prev = u;
    f_prev = fu;
  }
  return roots;
}

}  // namespace

std::vector<double> well_bound_states(const EffectiveWell& well) {
  if (!(well.depth > 0.0) || !(well.width > 0.0)) {
    throw InvalidGrid("well width and depth must be positive");
  }
  const double a = well.width / 2.0;
  const double R = std::sqrt(2.0 * well.depth) * a;  // u^2 + (kappa a)^2 = R^2

  // Matching conditions in the continuous forms
  //   even: u sin u - sqrt(R^2 - u^2) cos u = 0
  //   odd:  u cos u + sqrt(R^2 - u^2) sin u = 0
  // with u = k a in (0, R); spurious sign combinations cannot vanish.
  auto kappa_a = [R](double u) { return std::sqrt(std::max(0.0, R * R - u * u)); };
  auto even_fn = [&](double u) { return u * std::sin(u) - kappa_a(u) * std::cos(u); };
  auto odd_fn = [&](double u) { return u * std::cos(u) + kappa_a(u) * std::sin(u); };

  const int samples = std::max(1000, static_cast<int>(16.0 * R));
  std::vector<double> us;
  if (!well.wall) {
    us = sampled_roots(1e-12, R * (1.0 - 1e-14), samples, even_fn);
  }
  auto odd = sampled_roots(1e-12, R * (1.0 - 1e-14), samples, odd_fn);
  us.insert(us.end(), odd.begin(), odd.end());
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end(),
                       [&](double x, double y) { return std::abs(x - y) < 1e-9 * std::max(1.0, R); }),
           us.end());

  std::vector<double> energies;
  energies.reserve(us.size());
  for (double u : us) energies.push_back(u * u / (2.0 * a * a));
  return energies;
}

std::array<ClassPrediction, 4> qualitative_predictions() {
  return {{
      {SymmetryClass::even_even(), true, true},
      {SymmetryClass::odd_even(), false, false},
      {SymmetryClass::even_odd(), false, true},
      {SymmetryClass::odd_odd(), true, false},
  }};
}

}  // namespace crossbound
