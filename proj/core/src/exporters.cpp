#include "crossbound/exporters.hpp"

#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "crossbound/errors.hpp"

namespace crossbound {

namespace {

std::string sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

using nlohmann::json;

json decay_fit_to_json(const DecayFit& f) {
  return json{{"ell", f.ell},
              {"slope", f.slope},
              {"r2", f.r2},
              {"window_lo", f.window_lo},
              {"window_hi", f.window_hi},
              {"points", f.points},
              {"cut", f.cut},
              {"truncation_warning", f.truncation_warning},
              {"quality_warning", f.quality_warning}};
}

DecayFit decay_fit_from_json(const json& j) {
  DecayFit f;
  f.ell = j.at("ell");
  f.slope = j.at("slope");
  f.r2 = j.at("r2");
  f.window_lo = j.at("window_lo");
  f.window_hi = j.at("window_hi");
  f.points = j.at("points");
  f.cut = j.at("cut");
  f.truncation_warning = j.at("truncation_warning");
  f.quality_warning = j.at("quality_warning");
  return f;
}

json record_to_json_value(const SweepRecord& r) {
  json j{{"beta", r.beta},
         {"class", r.klass},
         {"set", r.set_label},
         {"L", r.L},
         {"N", r.N},
         {"eigenvalue", r.eigenvalue},
         {"e_th", r.e_th},
         {"e_ratio", r.e_ratio},
         {"class_threshold_ratio", r.class_threshold_ratio},
         {"grid_threshold_ratio", r.grid_threshold_ratio},
         {"bound", r.bound},
         {"ell_x_analytic", r.ell_x_analytic},
         {"ell_y_analytic", r.ell_y_analytic},
         {"residual", r.residual},
         {"iterations", r.iterations},
         {"solver_tol", r.solver_tol},
         {"seed", r.seed},
         {"version", r.version},
         {"warnings", r.warnings},
         {"error", r.error}};
  j["ell_x"] = r.ell_x ? json(*r.ell_x) : json();
  j["ell_y"] = r.ell_y ? json(*r.ell_y) : json();
  j["fit_x"] = r.fit_x ? decay_fit_to_json(*r.fit_x) : json();
  j["fit_y"] = r.fit_y ? decay_fit_to_json(*r.fit_y) : json();
  return j;
}

SweepRecord record_from_json_value(const json& j) {
  SweepRecord r;
  r.beta = j.at("beta");
  r.klass = j.at("class");
  r.set_label = j.at("set");
  r.L = j.at("L");
  r.N = j.at("N");
  r.eigenvalue = j.at("eigenvalue");
  r.e_th = j.at("e_th");
  r.e_ratio = j.at("e_ratio");
  r.class_threshold_ratio = j.at("class_threshold_ratio");
  r.grid_threshold_ratio = j.at("grid_threshold_ratio");
  r.bound = j.at("bound");
  r.ell_x_analytic = j.at("ell_x_analytic");
  r.ell_y_analytic = j.at("ell_y_analytic");
  r.residual = j.at("residual");
  r.iterations = j.at("iterations");
  r.solver_tol = j.at("solver_tol");
  r.seed = j.at("seed");
  r.version = j.at("version");
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.error = j.at("error");
  if (!j.at("ell_x").is_null()) r.ell_x = j.at("ell_x").get<double>();
  if (!j.at("ell_y").is_null()) r.ell_y = j.at("ell_y").get<double>();
  if (!j.at("fit_x").is_null()) r.fit_x = decay_fit_from_json(j.at("fit_x"));
  if (!j.at("fit_y").is_null()) r.fit_y = decay_fit_from_json(j.at("fit_y"));
  return r;
}

}  // namespace

std::string records_to_csv(std::span<const SweepRecord> records) {
  std::string out = "beta,set,E_ratio,ell_x,ell_y\n";
  for (const auto& r : records) {
    out += sig6(r.beta);
    out += ',';
    out += r.set_label;
    out += ',';
    if (r.error.empty()) out += sig6(r.e_ratio);
    out += ',';
    if (r.ell_x) out += sig6(*r.ell_x);
    out += ',';
    if (r.ell_y) out += sig6(*r.ell_y);
    out += '\n';
  }
  return out;
}

std::string record_to_json(const SweepRecord& record) {
  return record_to_json_value(record).dump(2);
}

SweepRecord record_from_json(const std::string& json_text) {
  return record_from_json_value(json::parse(json_text));
}

std::string records_to_json(std::span<const SweepRecord> records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_to_json_value(r));
  return arr.dump(2);
}

void write_field_grid(std::ostream& os, const Field& field) {
  const Grid& g = field.grid;
  os << "Nx=" << g.Nx << " Ny=" << g.Ny << " Lx=" << sig6(g.Lx) << " Ly=" << sig6(g.Ly)
     << " beta=" << sig6(field.problem.beta) << " class=" << field.problem.sym.label()
     << '\n';
  char buf[32];
  for (int ky = -g.max_ky(); ky <= g.max_ky(); ++ky) {
    for (int kx = -g.max_kx(); kx <= g.max_kx(); ++kx) {
      std::snprintf(buf, sizeof(buf), "%.9g", field.at(kx, ky));
      os << buf << (kx == g.max_kx() ? '\n' : ' ');
    }
  }
}

void write_field_csv(std::ostream& os, const Field& field) {
  const Grid& g = field.grid;
  const double beta = field.problem.beta;
  os << "x,y,value\n";
  char buf[96];
  for (int ky = -g.max_ky(); ky <= g.max_ky(); ++ky) {
    for (int kx = -g.max_kx(); kx <= g.max_kx(); ++kx) {
      std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", g.x(kx), beta * g.y(ky),
                    field.at(kx, ky));
      os << buf;
    }
  }
}

void write_field_cut(std::ostream& os, const Field& field, bool along_x) {
  const Grid& g = field.grid;
  const SymmetryClass sym = field.problem.sym;
  const double beta = field.problem.beta;

  const Parity trans_parity = along_x ? sym.y : sym.x;
  const int inv_trans = along_x ? g.inv_hy : g.inv_hx;
  const double cut_target = (trans_parity == Parity::Even) ? 0.0 : 1.0 / 3.0;
  int kcut = static_cast<int>(std::lround(cut_target * inv_trans));
  if (trans_parity == Parity::Odd && kcut < 1) kcut = 1;

  char buf[96];
  const int kmax = along_x ? g.max_kx() : g.max_ky();
  for (int k = -kmax; k <= kmax; ++k) {
    const double x = along_x ? g.x(k) : g.x(kcut);
    const double y = beta * (along_x ? g.y(kcut) : g.y(k));
    const double v = along_x ? field.at(k, kcut) : field.at(kcut, k);
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", x, y, v);
    os << buf;
  }
}

std::string predictions_to_text() {
  std::string out = "class  bound(beta=1)  bound(beta->inf)\n";
  for (const auto& p : qualitative_predictions()) {
    out += p.sym.label();
    out += "     ";
    out += p.bound_at_unit_ratio ? "yes" : "no ";
    out += "            ";
    out += p.bound_at_large_ratio ? "yes" : "no";
    out += '\n';
  }
  return out;
}

std::string fit_to_json(const FitResult& fit) {
  json j{{"model", fit.model}, {"params", fit.params}, {"rss", fit.rss},
         {"stderrs", fit.stderrs}};
  j["singularity"] = fit.singularity ? json(*fit.singularity) : json();
  j["extremum"] = fit.extremum ? json(*fit.extremum) : json();
  return j.dump(2);
}

std::string critical_to_json(const CriticalEstimate& estimate) {
  json j{{"beta_star", estimate.beta_star},
         {"uncertainty", estimate.uncertainty},
         {"method", estimate.method == CriticalMethod::PoleFit ? "pole_fit" : "threshold_crossing"},
         {"fit", json::parse(fit_to_json(estimate.fit))}};
  return j.dump(2);
}

}  // namespace crossbound
