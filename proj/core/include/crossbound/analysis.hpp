#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crossbound/eigensolver.hpp"
#include "crossbound/geometry.hpp"
#include "crossbound/grid.hpp"
#include "crossbound/operator.hpp"

namespace crossbound {

class ResultCache;

/// Symmetric truncation/grid preset (Lx = Ly = L, Nx = Ny = N).
struct GridSpec {
  double L = 20.0;
  int N = 600;
  std::string label = "I";
};

/// Named presets used throughout the sweeps: I = (20, 600), II = (40, 800),
/// III = (100, 1600). Throws InvalidGrid for unknown labels.
GridSpec grid_set(const std::string& label);

/// Default grid per class and width ratio: even-even and odd-even sweeps
/// grow the box with beta (the x decay length grows roughly cubically);
/// the near-threshold odd-odd and even-odd classes always use the long box.
GridSpec default_grid_for(SymmetryClass sym, double beta);

struct DecayOptions {
  double window_start = 3.0;  ///< rescaled distance where the tail fit starts
  double window_frac = 0.7;   ///< fit ends at window_frac * L
  double floor_rel = 1e-7;    ///< stop once |field| < floor_rel * cut maximum
  int min_points = 8;
  double min_r2 = 0.999;      ///< below this the fit carries a quality warning
  double unbound_r2 = 0.99;   ///< below this the tail is not exponential

  bool operator==(const DecayOptions&) const = default;
};

/// One fitted exponential tail.
struct DecayFit {
  double ell = 0.0;    ///< decay length in original (unscaled) coordinates
  double slope = 0.0;  ///< log-slope in rescaled coordinates (negative)
  double r2 = 0.0;
  double window_lo = 0.0, window_hi = 0.0;  ///< rescaled window actually used
  int points = 0;
  double cut = 0.0;  ///< rescaled coordinate of the cut line
  bool truncation_warning = false;
  bool quality_warning = false;
};

/// Fits ln|psi| along the arm cuts. Cut lines sit at 0 for even transverse
/// parity and at 1/3 of the rescaled half-width for odd parity (where the
/// field would otherwise vanish), snapped to the nearest grid line.
/// Throws UnboundState when no exponential tail exists and
/// TruncationDominated when the box cannot hold the tail.
DecayFit decay_length_along_x(const Field& field, const DecayOptions& opts = {});
DecayFit decay_length_along_y(const Field& field, const DecayOptions& opts = {});

/// One row of a width-ratio sweep; mirrors the published table layout plus
/// solver and fit diagnostics.
struct SweepRecord {
  double beta = 1.0;
  std::string klass = "ee";
  std::string set_label;
  double L = 0.0;
  int N = 0;

  double eigenvalue = 0.0;  ///< grid eigenvalue in -Laplacian units
  double e_th = 0.0;        ///< continuum threshold of the wider strip
  double e_ratio = 0.0;     ///< eigenvalue / e_th
  double class_threshold_ratio = 0.0;  ///< continuum class threshold / e_th
  double grid_threshold_ratio = 0.0;   ///< grid-level class threshold / e_th
  bool bound = false;

  std::optional<double> ell_x, ell_y;  ///< original-coordinate decay lengths
  std::optional<DecayFit> fit_x, fit_y;
  double ell_x_analytic = 0.0;  ///< 1/sqrt(channel threshold - eigenvalue)
  double ell_y_analytic = 0.0;

  double residual = 0.0;
  int iterations = 0;
  double solver_tol = 0.0;
  std::uint64_t seed = 0;
  std::string version;
  std::vector<std::string> warnings;
  std::string error;  ///< non-empty when the cell failed
};

struct SolveRequest {
  double beta = 1.0;
  SymmetryClass sym = SymmetryClass::even_even();
  GridSpec grid;
  SolverOptions solver;
  DecayOptions decay;
  int k = 1;
  bool compute_decay = true;
  DomainMode mode = DomainMode::Quarter;
};

struct SolveResult {
  SweepRecord record;
  EigenSolution solution;
  Field field;  ///< physical full-grid field of the lowest pair
};

/// Full pipeline for one (beta, class, grid) cell: assemble, solve (with a
/// spectral-transform retry for near-threshold clustering), classify
/// boundness against the grid-level channel edge, and fit decay lengths.
SolveResult solve_cross(const SolveRequest& request);

struct SweepOptions {
  SolverOptions solver;
  DecayOptions decay;
  std::function<GridSpec(SymmetryClass, double)> grid_for;  ///< default presets when empty
  ResultCache* cache = nullptr;
  int threads = 0;  ///< 0 = hardware concurrency (capped)
};

/// One record per beta, computed in parallel and cached when a cache is
/// attached. Per-cell failures are recorded in SweepRecord::error without
/// aborting the sweep.
std::vector<SweepRecord> beta_sweep(SymmetryClass sym, const std::vector<double>& betas,
                                    const SweepOptions& opts = {});

/// Nonlinear fit outcome. `singularity` is set for pole models and
/// `extremum` for interior extrema of energy-curve fits.
struct FitResult {
  std::string model;
  std::vector<double> params;
  double rss = 0.0;
  std::vector<double> stderrs;
  std::optional<double> singularity;
  std::optional<double> extremum;
};

/// Fits ratio(N) = a1 + a2/N^g + a3/N^2g + a4/N^3g to a monotonic grid
/// sequence and returns the N -> infinity estimate a1 with the exponent g.
/// params = {a1, a2, a3, a4, gamma}.
FitResult extrapolate_grid_sequence(std::span<const double> Ns, std::span<const double> ratios);

/// Fits E_ratio(beta) = c1 + a u + b u^2 with u = beta^s to the bound
/// records. `model` restricts the exponent search: "decay" (s < 0, the
/// ee/eo-style saturating curve), "grow" (s > 0, the oo-style curve with an
/// interior maximum), or "auto". params = {c1, a, b, s}.
FitResult fit_energy_curve(std::span<const SweepRecord> records, const std::string& model = "auto");

enum class CriticalMethod {
  PoleFit,            ///< pole of the singular decay-length model c/(1 - a beta^g)
  ThresholdCrossing,  ///< linear extrapolation of the decay constant kappa to zero
};

struct CriticalEstimate {
  double beta_star = 0.0;
  double uncertainty = 0.0;
  CriticalMethod method = CriticalMethod::PoleFit;
  FitResult fit;
};

/// Critical width ratio where the class's bound state merges with the
/// continuum: odd-odd states delocalize along x above beta*, even-odd states
/// appear above beta* with a diverging y decay length. Throws NoTransition
/// when the records never approach the threshold.
CriticalEstimate locate_critical_beta(SymmetryClass sym, std::span<const SweepRecord> records,
                                      CriticalMethod method);

/// Published beta grids of the three sweep tables (used as CLI defaults).
std::vector<double> default_sweep_betas(SymmetryClass sym);

}  // namespace crossbound
