#include "crossbound/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "crossbound/cache.hpp"
#include "crossbound/errors.hpp"
#include "crossbound/leastsq.hpp"
#include "crossbound/version.hpp"

namespace crossbound {

GridSpec grid_set(const std::string& label) {
  if (label == "I") return {20.0, 600, "I"};
  if (label == "II") return {40.0, 800, "II"};
  if (label == "III") return {100.0, 1600, "III"};
  throw InvalidGrid("unknown grid set '" + label + "' (expected I, II or III)");
}

GridSpec default_grid_for(SymmetryClass sym, double beta) {
  const bool even_y = sym.y == Parity::Even;
  const bool near_threshold_class = (sym == SymmetryClass::odd_odd()) ||
                                    (sym == SymmetryClass::even_odd());
  if (near_threshold_class) return grid_set("III");
  if (even_y && beta <= 1.45) return grid_set("I");
  if (even_y && beta <= 2.15) return grid_set("II");
  return grid_set("III");
}

namespace {

int snapped_cut_index(double cut, int inv_h, Parity transverse_parity) {
  int k = static_cast<int>(std::lround(cut * inv_h));
  if (transverse_parity == Parity::Odd && k < 1) k = 1;
  if (k > inv_h - 1) k = inv_h - 1;
  if (k < 0) k = 0;
  return k;
}

struct CutSamples {
  std::vector<double> coords;  // rescaled coordinate along the arm
  std::vector<double> logs;    // ln |psi|
  double cut = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
};

/// Collects ln|psi| along one arm between window_start and window_frac * L,
/// stopping at the relative amplitude floor.
CutSamples collect_tail(const Field& field, bool along_x, const DecayOptions& opts) {
  const Grid& g = field.grid;
  const SymmetryClass sym = field.problem.sym;

  const int inv_trans = along_x ? g.inv_hy : g.inv_hx;
  const Parity trans_parity = along_x ? sym.y : sym.x;
  const double cut_target = (trans_parity == Parity::Even) ? 0.0 : 1.0 / 3.0;
  const int kcut = snapped_cut_index(cut_target, inv_trans, trans_parity);

  const double L = along_x ? g.Lx : g.Ly;
  const double h = along_x ? g.hx : g.hy;
  const int kmax = along_x ? g.max_kx() : g.max_ky();

  auto value = [&](int k) {
    return std::abs(along_x ? field.at(k, kcut) : field.at(kcut, k));
  };

  double cut_max = 0.0;
  for (int k = 0; k <= kmax; ++k) cut_max = std::max(cut_max, value(k));
  if (cut_max <= 0.0) {
    throw UnboundState("field vanishes on the cut line");
  }
  const double floor = opts.floor_rel * cut_max;

  CutSamples s;
  s.cut = (along_x ? g.hy : g.hx) * kcut;
  s.window_lo = opts.window_start;
  s.window_hi = opts.window_frac * L;

  // Tails much shorter than the arm half-width die below the floor before
  // the configured window even starts; for those the fit window opens two
  // decay lengths past the junction instead. A provisional fit over
  // everything beyond the junction estimates the scale.
  {
    std::vector<double> px, pl;
    const int k0 = static_cast<int>(std::ceil((1.0 + h) / h));
    const int k1 = std::min(kmax, static_cast<int>(std::floor(s.window_hi / h + 1e-9)));
    for (int k = k0; k <= k1; ++k) {
      const double v = value(k);
      if (v <= floor) break;
      px.push_back(k * h);
      pl.push_back(std::log(v));
    }
    if (px.size() >= 4) {
      const LinearRegression rough = linear_regression(px, pl);
      if (rough.slope < 0.0) {
        const double ell_rough = -1.0 / rough.slope;
        s.window_lo = std::min(s.window_lo, std::max(1.0 + 2.0 * h, 1.0 + 2.0 * ell_rough));
      }
    }
  }

  const int k_lo = static_cast<int>(std::ceil(s.window_lo / h - 1e-9));
  const int k_hi = std::min(kmax, static_cast<int>(std::floor(s.window_hi / h + 1e-9)));
  for (int k = k_lo; k <= k_hi; ++k) {
    const double v = value(k);
    if (v <= floor) break;  // noise floor: everything past here is unusable
    s.coords.push_back(k * h);
    s.logs.push_back(std::log(v));
  }
  if (!s.coords.empty()) s.window_hi = s.coords.back();
  return s;
}

DecayFit fit_tail(const Field& field, bool along_x, const DecayOptions& opts) {
  const CutSamples s = collect_tail(field, along_x, opts);
  if (static_cast<int>(s.coords.size()) < opts.min_points) {
    throw TruncationDominated("decay window holds fewer than " +
                              std::to_string(opts.min_points) + " usable points");
  }
  const LinearRegression reg = linear_regression(s.coords, s.logs);
  if (reg.slope >= 0.0 || reg.r2 < opts.unbound_r2) {
    throw UnboundState("no exponential tail (slope " + std::to_string(reg.slope) +
                       ", R^2 " + std::to_string(reg.r2) + ")");
  }

  const double ell_rescaled = -1.0 / reg.slope;
  const double L = along_x ? field.grid.Lx : field.grid.Ly;
  if (ell_rescaled > L / 3.0) {
    throw TruncationDominated("fitted tail (" + std::to_string(ell_rescaled) +
                              ") reaches the outer cut of the box (L = " +
                              std::to_string(L) + ")");
  }

  DecayFit fit;
  fit.slope = reg.slope;
  fit.r2 = reg.r2;
  fit.window_lo = s.coords.front();
  fit.window_hi = s.coords.back();
  fit.points = static_cast<int>(s.coords.size());
  fit.cut = s.cut;
  fit.truncation_warning = ell_rescaled > L / 5.0;
  fit.quality_warning = reg.r2 < opts.min_r2;
  // y is rescaled by beta, x is not
  fit.ell = along_x ? ell_rescaled : field.problem.beta * ell_rescaled;
  return fit;
}

}  // namespace

DecayFit decay_length_along_x(const Field& field, const DecayOptions& opts) {
  return fit_tail(field, true, opts);
}

DecayFit decay_length_along_y(const Field& field, const DecayOptions& opts) {
  return fit_tail(field, false, opts);
}

namespace {

EigenSolution robust_smallest(const OperatorMatrix& op, int k, const SolverOptions& opts) {
  try {
    return smallest_eigenpairs(op, k, opts);
  } catch (const NonConvergence&) {
    // Near-threshold clustering: locate the cluster cheaply, then shift just
    // below it so the spectral transform separates the pairs.
    SolverOptions loose = opts;
    loose.tol = std::min(1e-4, opts.tol * 1e4);
    const EigenSolution rough = smallest_eigenpairs(op, k, loose);
    const double shift = rough.eigenvalues[0] * (1.0 - 1e-4);
    SolverOptions fine = opts;
    return spectral_transform_solve(op, shift, k, fine);
  }
}

}  // namespace

SolveResult solve_cross(const SolveRequest& request) {
  const CrossProblem problem =
      CrossProblem::make(request.beta, request.sym, request.grid.L, request.grid.L);
  const Grid grid = build_grid(problem, request.grid.N, request.grid.N);
  const OperatorMatrix op = assemble_operator(grid, problem, request.mode);

  SolveResult out;
  SweepRecord& rec = out.record;
  rec.beta = request.beta;
  rec.klass = request.sym.label();
  rec.set_label = request.grid.label;
  rec.L = request.grid.L;
  rec.N = request.grid.N;
  rec.e_th = continuum_threshold(problem);
  rec.class_threshold_ratio = class_threshold_ratio(request.sym, request.beta);
  rec.grid_threshold_ratio = grid_class_threshold(grid, problem) / rec.e_th;
  rec.solver_tol = request.solver.tol;
  rec.seed = request.solver.seed;
  rec.version = kVersion;

  out.solution = robust_smallest(op, request.k, request.solver);
  rec.eigenvalue = out.solution.eigenvalues[0];
  rec.e_ratio = rec.eigenvalue / rec.e_th;
  rec.residual = out.solution.residuals[0];
  rec.iterations = out.solution.iterations;

  const double grid_threshold = rec.grid_threshold_ratio * rec.e_th;
  rec.bound = rec.eigenvalue < grid_threshold * (1.0 - 10.0 * request.solver.tol);

  out.field = extract_field(out.solution.eigenvectors.col(0), *op.map, grid);

  // Continuum channel estimates 1/sqrt(threshold - lambda), for diagnostics
  // and the self-consistency checks.
  const double th_x = rec.e_th * ((request.sym.y == Parity::Even) ? 1.0 : 4.0);
  const double th_y =
      (M_PI * M_PI / 4.0) * ((request.sym.x == Parity::Even) ? 1.0 : 4.0);
  rec.ell_x_analytic = (rec.eigenvalue < th_x) ? 1.0 / std::sqrt(th_x - rec.eigenvalue) : 0.0;
  rec.ell_y_analytic = (rec.eigenvalue < th_y) ? 1.0 / std::sqrt(th_y - rec.eigenvalue) : 0.0;

  if (rec.bound && request.compute_decay) {
    try {
      rec.fit_x = decay_length_along_x(out.field, request.decay);
      rec.ell_x = rec.fit_x->ell;
      if (rec.fit_x->truncation_warning) rec.warnings.push_back("ell_x near box size");
      if (rec.fit_x->quality_warning) rec.warnings.push_back("ell_x fit R^2 below 0.999");
    } catch (const Error& e) {
      rec.warnings.push_back(std::string("ell_x fit failed: ") + e.what());
    }
    try {
      rec.fit_y = decay_length_along_y(out.field, request.decay);
      rec.ell_y = rec.fit_y->ell;
      if (rec.fit_y->truncation_warning) rec.warnings.push_back("ell_y near box size");
      if (rec.fit_y->quality_warning) rec.warnings.push_back("ell_y fit R^2 below 0.999");
    } catch (const Error& e) {
      rec.warnings.push_back(std::string("ell_y fit failed: ") + e.what());
    }
  }
  return out;
}

std::vector<SweepRecord> beta_sweep(SymmetryClass sym, const std::vector<double>& betas,
                                    const SweepOptions& opts) {
  if (!std::is_sorted(betas.begin(), betas.end())) {
    throw std::invalid_argument("beta_sweep expects an ascending beta list");
  }
  const std::size_t n = betas.size();
  std::vector<SweepRecord> records(n);
  if (n == 0) return records;

  // The cache key does not cover fit windows or seeds, so only runs with the
  // default settings participate.
  const bool cacheable = opts.cache != nullptr && opts.decay == DecayOptions{} &&
                         opts.solver.seed == SolverOptions{}.seed;

  auto compute = [&](std::size_t i) {
    const double beta = betas[i];
    const GridSpec spec = opts.grid_for ? opts.grid_for(sym, beta) : default_grid_for(sym, beta);
    const CacheKey key{kVersion, sym.label(), beta, spec.L, spec.N, opts.solver.tol};
    if (cacheable) {
      if (auto hit = opts.cache->get(key)) {
        records[i] = std::move(*hit);
        return;
      }
    }
    SolveRequest req;
    req.beta = beta;
    req.sym = sym;
    req.grid = spec;
    req.solver = opts.solver;
    req.decay = opts.decay;
    try {
      records[i] = solve_cross(req).record;
      if (cacheable) opts.cache->put(key, records[i]);
    } catch (const std::exception& e) {
      SweepRecord rec;
      rec.beta = beta;
      rec.klass = sym.label();
      rec.set_label = spec.label;
      rec.L = spec.L;
      rec.N = spec.N;
      rec.version = kVersion;
      rec.error = e.what();
      records[i] = std::move(rec);
    }
  };

  int threads = opts.threads > 0
                    ? opts.threads
                    : std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, static_cast<int>(n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) compute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) compute(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

namespace {

/// Linear part of the variable-projection fits: least squares on a design
/// built from powers of u, with column scaling for conditioning.
struct VarProResult {
  Eigen::VectorXd coeffs;
  double rss = std::numeric_limits<double>::infinity();
};

VarProResult varpro_linear(const std::vector<double>& u, const std::vector<double>& y,
                           int degree) {
  const int m = static_cast<int>(u.size());
  Eigen::MatrixXd A(m, degree + 1);
  for (int i = 0; i < m; ++i) {
    double p = 1.0;
    for (int j = 0; j <= degree; ++j) {
      A(i, j) = p;
      p *= u[i];
    }
  }
  Eigen::VectorXd scale(degree + 1);
  for (int j = 0; j <= degree; ++j) {
    scale[j] = A.col(j).norm();
    if (scale[j] == 0.0 || !std::isfinite(scale[j])) return {};
    A.col(j) /= scale[j];
  }
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data(), m);
  VarProResult out;
  Eigen::VectorXd c;
  try {
    c = linear_least_squares(A, b);
  } catch (const IllConditionedFit&) {
    return {};
  }
  out.rss = (A * c - b).squaredNorm();
  out.coeffs = c.cwiseQuotient(scale);
  return out;
}

std::vector<double> stderrs_from_cov(const Eigen::MatrixXd& cov) {
  std::vector<double> s;
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    const double v = cov(i, i);
    s.push_back(v > 0.0 ? std::sqrt(v) : 0.0);
  }
  return s;
}

}  // namespace

FitResult extrapolate_grid_sequence(std::span<const double> Ns, std::span<const double> ratios) {
  if (Ns.size() != ratios.size()) {
    throw std::invalid_argument("Ns and ratios must have the same length");
  }
  if (Ns.size() < 6) {
    throw std::invalid_argument("grid extrapolation needs at least 6 grids");
  }
  const int m = static_cast<int>(Ns.size());
  bool decreasing = true, increasing = true;
  for (int i = 1; i < m; ++i) {
    if (!(ratios[i] < ratios[i - 1])) decreasing = false;
    if (!(ratios[i] > ratios[i - 1])) increasing = false;
  }
  if (!decreasing && !increasing) {
    throw std::invalid_argument("grid sequence must be monotonic");
  }

  std::vector<double> y(ratios.begin(), ratios.end());
  auto rss_of_gamma = [&](double gamma, Eigen::VectorXd* coeffs = nullptr) {
    std::vector<double> u(m);
    for (int i = 0; i < m; ++i) u[i] = std::pow(Ns[i], -gamma);
    const VarProResult r = varpro_linear(u, y, 3);
    if (coeffs && r.coeffs.size()) *coeffs = r.coeffs;
    return r.rss;
  };

  // The exponent landscape has several shallow basins plus a needle-thin
  // minimum at the generating exponent, so every local scan minimum gets a
  // golden-section refinement before the joint polish.
  const double g_lo = 0.4, g_hi = 3.5, g_step = 0.005;
  std::vector<double> grid, grid_rss;
  for (double g = g_lo; g <= g_hi + 1e-12; g += g_step) {
    grid.push_back(g);
    grid_rss.push_back(rss_of_gamma(g));
  }
  std::vector<std::pair<double, double>> candidates;  // (rss, gamma)
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (grid_rss[i] <= grid_rss[i - 1] && grid_rss[i] <= grid_rss[i + 1]) {
      double a = grid[i - 1], b = grid[i + 1];
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
      for (int it = 0; it < 80; ++it) {
        if (rss_of_gamma(c1) < rss_of_gamma(c2)) {
          b = c2;
        } else {
          a = c1;
        }
        c1 = b - gr * (b - a);
        c2 = a + gr * (b - a);
      }
      const double g_best = 0.5 * (a + b);
      candidates.emplace_back(rss_of_gamma(g_best), g_best);
    }
  }
  if (candidates.empty()) candidates.emplace_back(rss_of_gamma(1.0), 1.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.resize(std::min<std::size_t>(candidates.size(), 3));

  auto residuals = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(m);
    if (!(p[4] > 0.05) || !(p[4] < 8.0)) {
      r.setConstant(1e6 * (1.0 + std::abs(p[4])));
      return r;
    }
    for (int i = 0; i < m; ++i) {
      const double u = std::pow(Ns[i], -p[4]);
      r[i] = p[0] + u * (p[1] + u * (p[2] + u * p[3])) - y[i];
    }
    return r;
  };
  LMResult lm;
  lm.rss = std::numeric_limits<double>::infinity();
  for (const auto& [cand_rss, cand_gamma] : candidates) {
    Eigen::VectorXd lin;
    rss_of_gamma(cand_gamma, &lin);
    Eigen::VectorXd start(5);
    start << lin[0], lin[1], lin[2], lin[3], cand_gamma;
    const LMResult trial = levenberg_marquardt(residuals, start);
    if (trial.rss < lm.rss) lm = trial;
  }

  FitResult fit;
  fit.model = "power_extrapolation";
  fit.params.assign(lm.params.data(), lm.params.data() + 5);
  fit.rss = lm.rss;
  if (lm.covariance.size()) fit.stderrs = stderrs_from_cov(lm.covariance);

  const double a1 = fit.params[0];
  const double extreme = decreasing ? *std::min_element(y.begin(), y.end())
                                    : *std::max_element(y.begin(), y.end());
  const bool consistent = decreasing ? (a1 < extreme) : (a1 > extreme);
  if (!consistent) {
    throw IllConditionedFit("extrapolated limit does not continue the monotonic sequence");
  }
  if (!fit.stderrs.empty() && fit.stderrs[0] > 0.1 * std::max(std::abs(a1), 1e-12)) {
    throw IllConditionedFit("extrapolated limit has an exploding variance; add grids");
  }
  return fit;
}

FitResult fit_energy_curve(std::span<const SweepRecord> records, const std::string& model) {
  std::vector<double> beta, y;
  for (const auto& r : records) {
    if (r.error.empty() && r.bound) {
      beta.push_back(r.beta);
      y.push_back(r.e_ratio);
    }
  }
  const int m = static_cast<int>(beta.size());
  if (m < 8) {
    throw std::invalid_argument("energy-curve fit needs at least 8 bound records (2x parameters)");
  }

  bool allow_negative = true, allow_positive = true;
  if (model == "decay") {
    allow_positive = false;
  } else if (model == "grow") {
    allow_negative = false;
  } else if (model != "auto") {
    throw std::invalid_argument("unknown energy model '" + model + "'");
  }

  auto rss_of_s = [&](double s, Eigen::VectorXd* coeffs = nullptr) {
    std::vector<double> u(m);
    for (int i = 0; i < m; ++i) u[i] = std::pow(beta[i], s);
    const VarProResult r = varpro_linear(u, y, 2);
    if (coeffs && r.coeffs.size()) *coeffs = r.coeffs;
    return r.rss;
  };

  double best_s = 0.0, best_rss = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 160; ++i) {
    const double mag = 0.2 * std::pow(12.0 / 0.2, i / 160.0);
    for (const double sign : {-1.0, 1.0}) {
      if (sign < 0 && !allow_negative) continue;
      if (sign > 0 && !allow_positive) continue;
      const double rss = rss_of_s(sign * mag);
      if (rss < best_rss) {
        best_rss = rss;
        best_s = sign * mag;
      }
    }
  }
  if (!std::isfinite(best_rss)) throw IllConditionedFit("energy-curve scan found no usable exponent");

  Eigen::VectorXd lin;
  rss_of_s(best_s, &lin);
  Eigen::VectorXd start(4);
  start << lin[0], lin[1], lin[2], best_s;

  auto residuals = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(m);
    if (std::abs(p[3]) < 0.01 || std::abs(p[3]) > 40.0) {
      r.setConstant(1e6 * (1.0 + std::abs(p[3])));
      return r;
    }
    for (int i = 0; i < m; ++i) {
      const double u = std::pow(beta[i], p[3]);
      r[i] = p[0] + u * (p[1] + u * p[2]) - y[i];
    }
    return r;
  };
  const LMResult lm = levenberg_marquardt(residuals, start);

  FitResult fit;
  fit.model = "energy_power";
  fit.params.assign(lm.params.data(), lm.params.data() + 4);
  fit.rss = lm.rss;
  if (lm.covariance.size()) fit.stderrs = stderrs_from_cov(lm.covariance);

  // Interior extremum of c1 + a u + b u^2 at u* = -a/(2b).
  const double a = fit.params[1], b = fit.params[2], s = fit.params[3];
  if (b != 0.0) {
    const double u_star = -a / (2.0 * b);
    if (u_star > 0.0) {
      const double beta_star = std::pow(u_star, 1.0 / s);
      const auto [lo, hi] = std::minmax_element(beta.begin(), beta.end());
      if (beta_star > *lo && beta_star < *hi * 1.05) fit.extremum = beta_star;
    }
  }
  return fit;
}

namespace {

struct Series {
  std::vector<double> beta, value;
};

Series singular_length_series(SymmetryClass sym, std::span<const SweepRecord> records) {
  const bool use_x = (sym == SymmetryClass::odd_odd());
  if (!use_x && !(sym == SymmetryClass::even_odd())) {
    throw std::invalid_argument("critical ratios exist for the odd-odd and even-odd classes only");
  }
  Series s;
  for (const auto& r : records) {
    if (!r.error.empty() || !r.bound) continue;
    const auto& ell = use_x ? r.ell_x : r.ell_y;
    if (ell && *ell > 0.0) {
      s.beta.push_back(r.beta);
      s.value.push_back(*ell);
    }
  }
  return s;
}

double pole_of(double a, double g) { return std::exp(-std::log(a) / g); }

CriticalEstimate critical_by_pole(SymmetryClass sym, std::span<const SweepRecord> records) {
  const Series s = singular_length_series(sym, records);
  const int m = static_cast<int>(s.beta.size());
  if (m < 5) throw NoTransition("too few bound records with a fitted decay length");

  // Variable-projection initialization on 1/ell = p + q beta^g.
  std::vector<double> inv(m);
  for (int i = 0; i < m; ++i) inv[i] = 1.0 / s.value[i];
  struct Start {
    double rss, c, a, g;
  };
  std::vector<Start> seeds;
  for (int i = 0; i <= 240; ++i) {
    const double mag = 1e-3 * std::pow(30.0 / 1e-3, i / 240.0);
    for (const double sign : {-1.0, 1.0}) {
      const double g = sign * mag;
      std::vector<double> u(m);
      for (int j = 0; j < m; ++j) u[j] = std::pow(s.beta[j], g);
      const VarProResult r = varpro_linear(u, inv, 1);
      if (!r.coeffs.size() || !std::isfinite(r.rss)) continue;
      const double p = r.coeffs[0], q = r.coeffs[1];
      if (p <= 0.0) continue;           // c = 1/p must be positive
      const double a = -q / p;
      if (a <= 0.0) continue;           // pole requires a beta^g to reach 1
      seeds.push_back({r.rss, 1.0 / p, a, g});
    }
  }
  if (seeds.empty()) throw NoTransition("decay lengths show no singular growth");
  std::sort(seeds.begin(), seeds.end(), [](const Start& x, const Start& y) { return x.rss < y.rss; });
  seeds.resize(std::min<std::size_t>(seeds.size(), 3));

  // Log-space residuals keep the short- and long-length rows comparable.
  auto make_residuals = [](const std::vector<double>& betas, const std::vector<double>& ells) {
    return [&betas, &ells](const Eigen::VectorXd& p) {
      const int n = static_cast<int>(betas.size());
      Eigen::VectorXd r(n);
      const double c = p[0], a = p[1], g = p[2];
      if (c <= 0.0 || a <= 0.0) {
        r.setConstant(1e6);
        return r;
      }
      for (int i = 0; i < n; ++i) {
        const double denom = 1.0 - a * std::pow(betas[i], g);
        if (denom <= 1e-12) {
          r.setConstant(1e6);
          return r;
        }
        r[i] = std::log(c / denom) - std::log(ells[i]);
      }
      return r;
    };
  };

  std::vector<Eigen::VectorXd> starts;
  for (const auto& seed : seeds) {
    for (const double fg : {1.0, 0.8, 1.25}) {
      Eigen::VectorXd v(3);
      v << seed.c, seed.a, seed.g * fg;
      starts.push_back(v);
    }
  }
  const ResidualFn fn = make_residuals(s.beta, s.value);
  const LMResult lm = multistart_lm(fn, starts);
  if (!std::isfinite(lm.rss)) throw NoTransition("pole fit failed to converge");

  const double a = lm.params[1], g = lm.params[2];
  const double beta_star = pole_of(a, g);
  const auto [lo, hi] = std::minmax_element(s.beta.begin(), s.beta.end());
  if (!std::isfinite(beta_star) || beta_star < 0.25 * *lo || beta_star > 4.0 * *hi) {
    throw NoTransition("fitted pole lies far outside the sampled ratios");
  }

  // Drop-one jackknife for the pole location.
  std::vector<double> poles;
  for (int drop = 0; drop < m; ++drop) {
    std::vector<double> jb, jv;
    for (int i = 0; i < m; ++i) {
      if (i == drop) continue;
      jb.push_back(s.beta[i]);
      jv.push_back(s.value[i]);
    }
    LMOptions fast;
    fast.max_iterations = 80;
    const LMResult jl = levenberg_marquardt(make_residuals(jb, jv), lm.params, fast);
    const double p = pole_of(jl.params[1], jl.params[2]);
    if (std::isfinite(p)) poles.push_back(p);
  }
  double sigma = 5e-4;
  if (poles.size() > 1) {
    double mean = 0.0;
    for (double p : poles) mean += p;
    mean /= poles.size();
    double ss = 0.0;
    for (double p : poles) ss += (p - mean) * (p - mean);
    sigma = std::max(sigma, std::sqrt(ss * (poles.size() - 1.0) / poles.size()));
  }

  CriticalEstimate est;
  est.beta_star = beta_star;
  est.uncertainty = sigma;
  est.method = CriticalMethod::PoleFit;
  est.fit.model = "pole_decay_length";
  est.fit.params.assign(lm.params.data(), lm.params.data() + 3);
  est.fit.rss = lm.rss;
  if (lm.covariance.size()) est.fit.stderrs = stderrs_from_cov(lm.covariance);
  est.fit.singularity = beta_star;
  return est;
}

CriticalEstimate critical_by_crossing(SymmetryClass sym, std::span<const SweepRecord> records) {
  if (!(sym == SymmetryClass::odd_odd()) && !(sym == SymmetryClass::even_odd())) {
    throw std::invalid_argument("critical ratios exist for the odd-odd and even-odd classes only");
  }
  // Decay constant of each bound record against its own grid-level channel
  // edge; kappa vanishes linearly at the transition (shallow 1D well).
  std::vector<std::pair<double, double>> pts;  // (beta, kappa)
  for (const auto& r : records) {
    if (!r.error.empty() || !r.bound) continue;
    const double gap = r.grid_threshold_ratio * r.e_th - r.eigenvalue;
    if (gap > 0.0) pts.emplace_back(r.beta, std::sqrt(gap));
  }
  if (pts.size() < 4) throw NoTransition("too few bound records below the channel edge");
  std::sort(pts.begin(), pts.end());

  // The odd-odd state is bound below its critical ratio, the even-odd state
  // above it, so the transition sits at the top respectively the bottom of
  // the bound range. The even-odd branch also flattens toward the odd
  // channel edge for beta -> infinity, which must not enter the window.
  const bool transition_above = (sym == SymmetryClass::odd_odd());
  if (!transition_above) std::reverse(pts.begin(), pts.end());
  // pts now ends with the records nearest the transition.
  double kappa_max = 0.0;
  for (const auto& p : pts) kappa_max = std::max(kappa_max, p.second);
  if (pts.back().second > 0.5 * kappa_max) {
    throw NoTransition("records never approach the channel edge");
  }

  std::vector<double> roots;
  LinearRegression chosen{};
  const int n_pts = static_cast<int>(pts.size());
  for (const int window : {4, 5, 6, 8}) {
    if (window > n_pts) break;
    std::vector<double> kb, kk;
    for (int i = n_pts - window; i < n_pts; ++i) {
      kb.push_back(pts[i].first);
      kk.push_back(pts[i].second);
    }
    const LinearRegression reg = linear_regression(kb, kk);
    if (reg.slope == 0.0) continue;
    const double root = -reg.intercept / reg.slope;
    // The crossing must lie beyond the last bound record.
    const double edge = pts.back().first;
    if (transition_above ? root < edge : root > edge) continue;
    roots.push_back(root);
    chosen = reg;
  }
  if (roots.empty()) throw NoTransition("degenerate kappa extrapolation");

  const double beta_star = roots[std::min<std::size_t>(roots.size() - 1, 2)];
  double sigma = 5e-4;
  if (roots.size() > 1) {
    double mean = 0.0;
    for (double r : roots) mean += r;
    mean /= roots.size();
    double ss = 0.0;
    for (double r : roots) ss += (r - mean) * (r - mean);
    sigma = std::max(sigma, std::sqrt(ss / (roots.size() - 1)));
  }

  CriticalEstimate est;
  est.beta_star = beta_star;
  est.uncertainty = sigma;
  est.method = CriticalMethod::ThresholdCrossing;
  est.fit.model = "kappa_crossing";
  est.fit.params = {chosen.slope, chosen.intercept};
  est.fit.rss = 0.0;
  est.fit.singularity = beta_star;
  return est;
}

}  // namespace

CriticalEstimate locate_critical_beta(SymmetryClass sym, std::span<const SweepRecord> records,
                                      CriticalMethod method) {
  return method == CriticalMethod::PoleFit ? critical_by_pole(sym, records)
                                           : critical_by_crossing(sym, records);
}

std::vector<double> default_sweep_betas(SymmetryClass sym) {
  std::vector<double> betas;
  if (sym == SymmetryClass::odd_odd()) {
    for (int i = 100; i <= 110; ++i) betas.push_back(i / 100.0);
    for (int i = 1110; i <= 1116; ++i) betas.push_back(i / 1000.0);
  } else if (sym == SymmetryClass::even_odd()) {
    for (int i = 1530; i <= 1539; ++i) betas.push_back(i / 1000.0);
    for (int i = 154; i <= 160; ++i) betas.push_back(i / 100.0);
    for (int i = 17; i <= 30; ++i) betas.push_back(i / 10.0);
    betas.push_back(4.0);
    betas.push_back(5.0);
  } else if (sym == SymmetryClass::odd_even()) {
    betas = {1.0, 1.5, 2.0, 3.0};
  } else {
    for (int i = 10; i <= 30; ++i) betas.push_back(i / 10.0);
  }
  return betas;
}

}  // namespace crossbound
