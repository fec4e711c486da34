#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "crossbound/analysis.hpp"
#include "crossbound/cache.hpp"
#include "crossbound/errors.hpp"
#include "crossbound/exporters.hpp"
#include "crossbound/grid.hpp"
#include "crossbound/version.hpp"

using namespace crossbound;

namespace {

SweepRecord sample_record() {
  SweepRecord r;
  r.beta = 1.5;
  r.klass = "ee";
  r.set_label = "II";
  r.L = 40.0;
  r.N = 800;
  r.eigenvalue = 0.9640071234567890;
  r.e_th = 1.0966227112321508;
  r.e_ratio = 0.879058123456789;
  r.class_threshold_ratio = 1.0;
  r.grid_threshold_ratio = 0.9979;
  r.bound = true;
  r.ell_x = 2.7701234;
  r.ell_y = 0.8181234;
  DecayFit fx;
  fx.ell = 2.7701234;
  fx.slope = -0.361;
  fx.r2 = 0.99999;
  fx.window_lo = 3.0;
  fx.window_hi = 28.0;
  fx.points = 251;
  fx.cut = 0.0;
  r.fit_x = fx;
  r.ell_x_analytic = 2.746;
  r.ell_y_analytic = 0.8156;
  r.residual = 3.2e-10;
  r.iterations = 40;
  r.solver_tol = 1e-9;
  r.seed = 0x517cc1b727220a95ULL;
  r.version = kVersion;
  r.warnings = {"ell_x near box size"};
  return r;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("crossbound_test_" + std::to_string(::rand()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

Field tiny_field() {
  auto p = CrossProblem::make(2.0, SymmetryClass::even_even(), 2.0, 2.0);
  const Grid g = build_grid(p, 8, 8);
  Field f;
  f.grid = g;
  f.problem = p;
  const int mx = g.max_kx(), my = g.max_ky();
  f.values.resize(static_cast<Eigen::Index>(2 * mx + 1) * (2 * my + 1));
  for (int ky = -my; ky <= my; ++ky) {
    for (int kx = -mx; kx <= mx; ++kx) {
      f.values[static_cast<Eigen::Index>(ky + my) * (2 * mx + 1) + (kx + mx)] =
          g.inside_cross(kx, ky) ? 1.0 + 0.1 * kx + 0.01 * ky : 0.0;
    }
  }
  return f;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("record JSON round trip preserves everything") {
  const SweepRecord a = sample_record();
  const SweepRecord b = record_from_json(record_to_json(a));
  CHECK(record_to_json(a) == record_to_json(b));
  CHECK(b.eigenvalue == a.eigenvalue);  // full precision
  CHECK(b.ell_x.has_value());
  CHECK(*b.ell_x == *a.ell_x);
  CHECK_FALSE(b.fit_y.has_value());
  CHECK(b.fit_x->points == 251);
  CHECK(b.warnings == a.warnings);
  CHECK(b.seed == a.seed);
}

TEST_CASE("CSV layout is stable with 6 significant digits") {
  SweepRecord r = sample_record();
  SweepRecord unbound;
  unbound.beta = 2.0;
  unbound.klass = "oe";
  unbound.set_label = "I";
  unbound.e_ratio = 1.0389912345;
  unbound.bound = false;
  const std::vector<SweepRecord> rows{r, unbound};
  CHECK(records_to_csv(rows) ==
        "beta,set,E_ratio,ell_x,ell_y\n"
        "1.5,II,0.879058,2.77012,0.818123\n"
        "2,I,1.03899,,\n");
}

TEST_CASE("cache round trip, miss, and integrity") {
  TempDir tmp;
  ResultCache cache(tmp.path);
  const CacheKey key{kVersion, "ee", 1.5, 40.0, 800, 1e-9};

  CHECK_FALSE(cache.get(key).has_value());
  const SweepRecord rec = sample_record();
  cache.put(key, rec);
  const auto back = cache.get(key);
  REQUIRE(back.has_value());
  CHECK(record_to_json(*back) == record_to_json(rec));

  // Re-putting the identical record is a no-op.
  cache.put(key, rec);

  // A different payload under the same key is corruption.
  SweepRecord other = rec;
  other.eigenvalue += 1e-3;
  CHECK_THROWS_AS(cache.put(key, other), CacheIntegrityError);

  // Distinct keys live side by side.
  const CacheKey key2{kVersion, "ee", 1.6, 40.0, 800, 1e-9};
  cache.put(key2, other);
  CHECK(cache.get(key2).has_value());
}

TEST_CASE("cache environment variable") {
  ::setenv("CROSSBOUND_CACHE_DIR", "/tmp/somewhere", 1);
  auto dir = ResultCache::env_dir();
  REQUIRE(dir.has_value());
  CHECK(*dir == std::filesystem::path("/tmp/somewhere"));
  ::unsetenv("CROSSBOUND_CACHE_DIR");
  CHECK_FALSE(ResultCache::env_dir().has_value());
}

TEST_CASE("field grid export carries the header and all nodes") {
  const Field f = tiny_field();
  std::ostringstream os;
  write_field_grid(os, f);
  const std::string text = os.str();
  CHECK(text.rfind("Nx=8 Ny=8 Lx=2 Ly=2 beta=2 class=ee\n", 0) == 0);
  // 7 node rows follow the header.
  int lines = 0;
  for (char c : text) lines += (c == '\n');
  CHECK(lines == 8);
}

TEST_CASE("field CSV uses original coordinates") {
  const Field f = tiny_field();
  std::ostringstream os;
  write_field_csv(os, f);
  std::istringstream in(os.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "x,y,value");
  // First node is (kx, ky) = (-3, -3): x = -1.5, y = beta * (-1.5) = -3.
  CHECK(first.rfind("-1.5,-3,", 0) == 0);
}

TEST_CASE("cut export is three columns in original coordinates") {
  const Field f = tiny_field();
  std::ostringstream os;
  write_field_cut(os, f, true);
  std::istringstream in(os.str());
  double x, y, v;
  int count = 0;
  while (in >> x >> y >> v) {
    CHECK(y == 0.0);  // even class: cut along the x axis
    ++count;
  }
  CHECK(count == 7);
}

TEST_CASE("prediction table text") {
  const std::string text = predictions_to_text();
  CHECK(text.find("ee     yes            yes") != std::string::npos);
  CHECK(text.find("oe     no             no") != std::string::npos);
  CHECK(text.find("eo     no             yes") != std::string::npos);
  CHECK(text.find("oo     yes            no") != std::string::npos);
}

TEST_CASE("fit and critical JSON serialization") {
  FitResult fit;
  fit.model = "pole_decay_length";
  fit.params = {0.6, 2.16, -1.86};
  fit.rss = 1e-6;
  fit.singularity = 1.513;
  const std::string text = fit_to_json(fit);
  CHECK(text.find("\"pole_decay_length\"") != std::string::npos);
  CHECK(text.find("1.513") != std::string::npos);

  CriticalEstimate est;
  est.beta_star = 1.513;
  est.uncertainty = 0.002;
  est.method = CriticalMethod::ThresholdCrossing;
  est.fit = fit;
  CHECK(critical_to_json(est).find("threshold_crossing") != std::string::npos);
}

}  // TEST_SUITE
