#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "crossbound/analysis.hpp"
#include "crossbound/errors.hpp"
#include "crossbound/geometry.hpp"
#include "crossbound/grid.hpp"
#include "oracles.hpp"

using namespace crossbound;

namespace {

Field synthetic_field(double beta, SymmetryClass sym, double L, int N,
                      const std::function<double(double, double)>& f) {
  auto p = CrossProblem::make(beta, sym, L, L);
  const Grid g = build_grid(p, N, N);
  Field field;
  field.grid = g;
  field.problem = p;
  const int mx = g.max_kx(), my = g.max_ky();
  field.values.resize(static_cast<Eigen::Index>(2 * mx + 1) * (2 * my + 1));
  for (int ky = -my; ky <= my; ++ky) {
    for (int kx = -mx; kx <= mx; ++kx) {
      field.values[static_cast<Eigen::Index>(ky + my) * (2 * mx + 1) + (kx + mx)] =
          f(g.x(kx), g.y(ky));
    }
  }
  return field;
}

SweepRecord fake_bound_record(double beta, SymmetryClass sym, double ell_x, double ell_y) {
  SweepRecord r;
  r.beta = beta;
  r.klass = sym.label();
  r.bound = true;
  r.e_th = continuum_threshold(beta);
  r.e_ratio = 1.0;
  if (ell_x > 0) r.ell_x = ell_x;
  if (ell_y > 0) r.ell_y = ell_y;
  return r;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("decay fit recovers exact exponentials") {
  const double beta = 1.5;
  const auto field = synthetic_field(beta, SymmetryClass::even_even(), 20.0, 600,
                                     [](double x, double yp) {
                                       return std::exp(-std::abs(x) / 3.0 - std::abs(yp) / 2.0);
                                     });
  const DecayFit fx = decay_length_along_x(field);
  CHECK(fx.ell == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(fx.r2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fx.cut == 0.0);

  // The y tail is fitted in rescaled coordinates and converted by beta.
  const DecayFit fy = decay_length_along_y(field);
  CHECK(fy.ell == doctest::Approx(beta * 2.0).epsilon(1e-6));
}

TEST_CASE("odd classes are cut away from the nodal axis") {
  const auto field = synthetic_field(1.0, SymmetryClass::odd_odd(), 20.0, 600,
                                     [](double x, double yp) {
                                       return std::sin(M_PI * yp) * std::exp(-std::abs(x) / 2.0);
                                     });
  const DecayFit fx = decay_length_along_x(field);
  CHECK(fx.ell == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fx.cut > 0.0);  // snapped near one third of the half-width
  CHECK(fx.cut == doctest::Approx(1.0 / 3.0).epsilon(0.25));
}

TEST_CASE("non-decaying fields raise UnboundState") {
  const auto growing = synthetic_field(1.0, SymmetryClass::even_even(), 10.0, 200,
                                       [](double x, double) { return std::exp(0.05 * x); });
  CHECK_THROWS_AS(decay_length_along_x(growing), UnboundState);

  const auto wiggly = synthetic_field(1.0, SymmetryClass::even_even(), 10.0, 200,
                                      [](double x, double) {
                                        return std::exp(-x / 3.0) * (1.0 + 0.8 * std::sin(7.0 * x));
                                      });
  CHECK_THROWS_AS(decay_length_along_x(wiggly), UnboundState);
}

TEST_CASE("tails longer than the box raise TruncationDominated") {
  const auto slow = synthetic_field(1.0, SymmetryClass::even_even(), 10.0, 200,
                                    [](double x, double) { return std::exp(-std::abs(x) / 20.0); });
  CHECK_THROWS_AS(decay_length_along_x(slow), TruncationDominated);
}

TEST_CASE("amplitude floor shortens the window instead of poisoning the fit") {
  const auto fast = synthetic_field(1.0, SymmetryClass::even_even(), 20.0, 400,
                                    [](double x, double) {
                                      const double v = std::exp(-std::abs(x) / 0.5);
                                      return v < 1e-12 ? 0.0 : v;  // hard zero past the floor
                                    });
  const DecayFit fit = decay_length_along_x(fast);
  CHECK(fit.ell == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(fit.window_hi < 0.7 * 20.0);  // floor kicked in early
}

TEST_CASE("grid extrapolation: exact-model identifiability") {
  const double a1 = 0.6596, a2 = 2.1, a3 = -8.0, a4 = 40.0, gamma = 4.0 / 3.0;
  std::vector<double> Ns, ys;
  for (int N = 80; N <= 880; N += 40) {
    const double u = std::pow(N, -gamma);
    Ns.push_back(N);
    ys.push_back(a1 + u * (a2 + u * (a3 + u * a4)));
  }
  const FitResult fit = extrapolate_grid_sequence(Ns, ys);
  CHECK(fit.params[0] == doctest::Approx(a1).epsilon(1e-6));
  CHECK(fit.params[1] == doctest::Approx(a2).epsilon(1e-3));
  CHECK(fit.params[4] == doctest::Approx(gamma).epsilon(1e-3));
  CHECK(fit.rss < 1e-14);
}

TEST_CASE("grid extrapolation preconditions") {
  std::vector<double> Ns{80, 120, 160, 200, 240};
  std::vector<double> ys{1, 0.9, 0.8, 0.7, 0.6};
  CHECK_THROWS_AS(extrapolate_grid_sequence(Ns, ys), std::invalid_argument);  // < 6 grids

  std::vector<double> Ns6{80, 120, 160, 200, 240, 280};
  std::vector<double> bad{1, 0.9, 0.95, 0.7, 0.6, 0.5};
  CHECK_THROWS_AS(extrapolate_grid_sequence(Ns6, bad), std::invalid_argument);  // not monotone
}

TEST_CASE("energy-curve fit: exact recovery and extremum location") {
  // Growing-exponent family with an interior maximum.
  const double c1 = -15.61, a = 34.88, b = -15.56, s = 0.9869;
  std::vector<SweepRecord> records;
  for (const double beta : {1.0, 1.01, 1.02, 1.03, 1.04, 1.05, 1.06, 1.07, 1.08, 1.09, 1.10,
                            1.111, 1.112, 1.113, 1.114, 1.115, 1.116}) {
    auto r = fake_bound_record(beta, SymmetryClass::odd_odd(), 1.0, 1.0);
    const double u = std::pow(beta, s);
    r.e_ratio = c1 + u * (a + u * b);
    records.push_back(r);
  }
  const FitResult fit = fit_energy_curve(records, "grow");
  CHECK(fit.params[0] == doctest::Approx(c1).epsilon(1e-5));
  CHECK(fit.params[3] == doctest::Approx(s).epsilon(1e-5));
  REQUIRE(fit.extremum.has_value());

  // Independent check: golden-section maximum of the fitted curve.
  const auto curve = [&](double beta) {
    const double u = std::pow(beta, fit.params[3]);
    return fit.params[0] + u * (fit.params[1] + u * fit.params[2]);
  };
  const double golden = oracle::golden_max(curve, 1.0, 1.3);
  CHECK(*fit.extremum == doctest::Approx(golden).epsilon(1e-6));
  CHECK(*fit.extremum == doctest::Approx(1.1225).epsilon(2e-3));
}

TEST_CASE("energy-curve fit: saturating family") {
  const double c1 = 1.003, a = -0.505, b = 0.165, s = -3.23725;
  std::vector<SweepRecord> records;
  for (double beta = 1.0; beta <= 3.01; beta += 0.1) {
    auto r = fake_bound_record(beta, SymmetryClass::even_even(), 1.0, 1.0);
    const double u = std::pow(beta, s);
    r.e_ratio = c1 + u * (a + u * b);
    records.push_back(r);
  }
  const FitResult fit = fit_energy_curve(records, "decay");
  CHECK(fit.params[0] == doctest::Approx(c1).epsilon(1e-6));
  CHECK(fit.params[3] == doctest::Approx(s).epsilon(1e-4));
}

TEST_CASE("pole fit reproduces the singular decay-length model") {
  // Synthetic even-odd ell_y data from a known pole model.
  const double c = 0.604788, a = 2.16467, g = -1.86384;
  std::vector<SweepRecord> records;
  std::vector<double> betas;
  for (const auto& row : std::vector<double>{1.53, 1.531, 1.532, 1.535, 1.54, 1.55, 1.56, 1.58,
                                             1.6, 1.7, 1.8, 2.0, 2.2, 2.5, 3.0, 4.0, 5.0}) {
    betas.push_back(row);
    auto r = fake_bound_record(row, SymmetryClass::even_odd(), 0.8, 0.0);
    r.ell_y = c / (1.0 - a * std::pow(row, g));
    records.push_back(r);
  }
  const CriticalEstimate est =
      locate_critical_beta(SymmetryClass::even_odd(), records, CriticalMethod::PoleFit);

  // The pole equation must be satisfied exactly by the fitted parameters.
  const double fit_a = est.fit.params[1], fit_g = est.fit.params[2];
  CHECK(fit_a * std::pow(est.beta_star, fit_g) == doctest::Approx(1.0).epsilon(1e-10));

  // Independent root solve of the generating model.
  const double root = oracle::bisect(
      [&](double beta) { return 1.0 - a * std::pow(beta, g); }, 1.2, 1.8, 1e-13);
  CHECK(est.beta_star == doctest::Approx(root).epsilon(1e-5));
  CHECK(root == doctest::Approx(1.5135).epsilon(1e-3));
}

TEST_CASE("threshold crossing recovers an exact linear kappa law") {
  const double beta_star = 1.2, slope = 5.0;
  std::vector<SweepRecord> records;
  for (double beta = 1.0; beta < beta_star - 1e-9; beta += 0.02) {
    auto r = fake_bound_record(beta, SymmetryClass::odd_odd(), 1.0, 1.0);
    r.grid_threshold_ratio = 4.0;
    r.e_th = 1.0;
    const double kappa = slope * (beta_star - beta);
    r.eigenvalue = 4.0 - kappa * kappa;
    r.e_ratio = r.eigenvalue;
    records.push_back(r);
  }
  const CriticalEstimate est =
      locate_critical_beta(SymmetryClass::odd_odd(), records, CriticalMethod::ThresholdCrossing);
  CHECK(est.beta_star == doctest::Approx(beta_star).epsilon(1e-9));
  CHECK(est.uncertainty < 0.01);
}

TEST_CASE("records far from threshold raise NoTransition") {
  std::vector<SweepRecord> records;
  for (double beta = 1.0; beta <= 1.3; beta += 0.05) {
    auto r = fake_bound_record(beta, SymmetryClass::odd_odd(), 1.0, 1.0);
    r.grid_threshold_ratio = 4.0;
    r.e_th = 1.0;
    r.eigenvalue = 3.0;  // constant gap, no approach
    records.push_back(r);
  }
  CHECK_THROWS_AS(
      locate_critical_beta(SymmetryClass::odd_odd(), records, CriticalMethod::ThresholdCrossing),
      NoTransition);
  CHECK_THROWS_AS(
      locate_critical_beta(SymmetryClass::even_even(), records, CriticalMethod::PoleFit),
      std::invalid_argument);
}

TEST_CASE("grid presets") {
  CHECK(grid_set("I").N == 600);
  CHECK(grid_set("II").L == 40.0);
  CHECK(grid_set("III").N == 1600);
  CHECK_THROWS_AS(grid_set("IV"), InvalidGrid);
  CHECK(default_grid_for(SymmetryClass::even_even(), 1.0).label == "I");
  CHECK(default_grid_for(SymmetryClass::even_even(), 1.5).label == "II");
  CHECK(default_grid_for(SymmetryClass::even_even(), 2.2).label == "III");
  CHECK(default_grid_for(SymmetryClass::odd_odd(), 1.0).label == "III");
  CHECK(default_grid_for(SymmetryClass::even_odd(), 1.6).label == "III");
}

TEST_CASE("sweep records failures without aborting") {
  SweepOptions opts;
  opts.grid_for = [](SymmetryClass, double beta) {
    return beta > 1.5 ? GridSpec{10.0, 201, "bad"} : GridSpec{10.0, 200, "ok"};
  };
  const auto records = beta_sweep(SymmetryClass::even_even(), {1.0, 2.0}, opts);
  REQUIRE(records.size() == 2);
  CHECK(records[0].error.empty());
  CHECK(records[0].bound);
  CHECK_FALSE(records[1].error.empty());

  CHECK_THROWS_AS(beta_sweep(SymmetryClass::even_even(), {2.0, 1.0}, {}), std::invalid_argument);
}

TEST_CASE("odd-even class yields no bound state") {
  SweepOptions opts;
  opts.grid_for = [](SymmetryClass, double) { return GridSpec{20.0, 600, "I"}; };
  const auto records = beta_sweep(SymmetryClass::odd_even(), {1.0, 1.5, 2.0, 3.0}, opts);
  for (const auto& r : records) {
    CHECK(r.error.empty());
    CHECK_FALSE(r.bound);
    CHECK_FALSE(r.ell_x.has_value());
    CHECK_FALSE(r.ell_y.has_value());
    CHECK(r.e_ratio >= r.grid_threshold_ratio * (1.0 - 3e-9));
  }
}

TEST_CASE("even-even state persists with an asymptote at the threshold") {
  SweepOptions opts;
  opts.threads = 2;
  const auto records = beta_sweep(SymmetryClass::even_even(),
                                  default_sweep_betas(SymmetryClass::even_even()), opts);
  for (const auto& r : records) {
    REQUIRE(r.error.empty());
    CHECK(r.bound);
    CHECK(r.e_ratio > 0.0);
    CHECK(r.e_ratio < r.class_threshold_ratio);  // stays below 1 up to beta = 3
  }
  // The fitted saturating curve approaches the continuum threshold from
  // below as the wide arm grows.
  const FitResult fit = fit_energy_curve(records, "decay");
  CHECK(fit.params[0] >= 0.99);
  CHECK(fit.params[0] <= 1.02);
}

TEST_CASE("reference rows: energy and decay lengths") {
  SUBCASE("even-even at beta 1.5, medium box") {
    SolveRequest req;
    req.beta = 1.5;
    req.sym = SymmetryClass::even_even();
    req.grid = grid_set("II");
    const auto result = solve_cross(req);
    CHECK(result.record.e_ratio == doctest::Approx(0.879058).epsilon(0.005));
  }
  SUBCASE("even-even at beta 2, medium box") {
    SolveRequest req;
    req.beta = 2.0;
    req.sym = SymmetryClass::even_even();
    req.grid = grid_set("II");
    const auto result = solve_cross(req);
    const auto& rec = result.record;
    CHECK(rec.e_ratio == doctest::Approx(0.952308).epsilon(0.005));
    REQUIRE(rec.ell_x.has_value());
    REQUIRE(rec.ell_y.has_value());
    CHECK(*rec.ell_x == doctest::Approx(5.960).epsilon(0.05));
    CHECK(*rec.ell_y == doctest::Approx(0.733).epsilon(0.05));

    // Channel-decay self-consistency against the continuum relation.
    const double ell_x_analytic = 1.0 / std::sqrt(rec.e_th - rec.eigenvalue);
    CHECK(std::abs(*rec.ell_x - ell_x_analytic) / *rec.ell_x <= 0.05);
    const double ell_y_analytic = 1.0 / std::sqrt(M_PI * M_PI / 4.0 - rec.eigenvalue);
    CHECK(std::abs(*rec.ell_y - ell_y_analytic) / *rec.ell_y <= 0.05);
  }
  SUBCASE("even-odd at beta 2, long box") {
    SolveRequest req;
    req.beta = 2.0;
    req.sym = SymmetryClass::even_odd();
    req.grid = grid_set("III");
    const auto result = solve_cross(req);
    const auto& rec = result.record;
    CHECK(rec.bound);
    CHECK(rec.e_ratio == doctest::Approx(3.24315).epsilon(0.01));
    REQUIRE(rec.ell_x.has_value());
    REQUIRE(rec.ell_y.has_value());
    CHECK(*rec.ell_x == doctest::Approx(1.516).epsilon(0.10));
    CHECK(*rec.ell_y == doctest::Approx(1.478).epsilon(0.10));
  }
}

}  // TEST_SUITE
