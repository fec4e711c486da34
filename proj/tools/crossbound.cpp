// Command-line driver: bound states of cross, T and L shaped waveguides.
//
// Subcommands: solve, sweep, extrapolate, critical, predict, export-field.
// Exit codes: 0 success, 1 unexpected failure, 2 invalid arguments or grid,
// 3 eigensolver non-convergence, 4 no bound state where --require-bound was
// set, 5 unbound state on field export, 6 cache integrity error.

#include <CLI11.hpp>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crossbound/analysis.hpp"
#include "crossbound/cache.hpp"
#include "crossbound/effective1d.hpp"
#include "crossbound/errors.hpp"
#include "crossbound/exporters.hpp"
#include "crossbound/version.hpp"

namespace {

using namespace crossbound;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitNotBound = 4;
constexpr int kExitUnboundExport = 5;
constexpr int kExitCacheIntegrity = 6;

/// Config files are either line-oriented key=value text (dotted keys or
/// [sections] address a subcommand, e.g. solve.beta=1.5) or a JSON object
/// with one nested object per subcommand; the format is sniffed from the
/// first non-space character.
class JsonOrKVConfig : public CLI::ConfigBase {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const auto start = input.tellg();
    char c = 0;
    while (input.get(c) && std::isspace(static_cast<unsigned char>(c))) {
    }
    input.clear();
    input.seekg(start);
    if (c != '{') return CLI::ConfigBase::from_config(input);

    nlohmann::json j;
    input >> j;
    std::vector<CLI::ConfigItem> items;
    std::vector<std::string> parents;
    flatten(j, parents, items);
    return items;
  }

 private:
  static void flatten(const nlohmann::json& j, std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_object()) {
        parents.push_back(it.key());
        flatten(it.value(), parents, items);
        parents.pop_back();
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it.value().is_array()) {
        for (const auto& v : it.value()) {
          item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
      } else if (it.value().is_string()) {
        item.inputs.push_back(it.value().get<std::string>());
      } else {
        item.inputs.push_back(it.value().dump());
      }
      items.push_back(std::move(item));
    }
  }
};

struct CommonOptions {
  std::string cache_dir;
  bool no_cache = false;
  double tol = SolverOptions{}.tol;
  std::uint64_t seed = SolverOptions{}.seed;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--cache-dir", opts.cache_dir,
                  "Result cache directory (default: $CROSSBOUND_CACHE_DIR)");
  cmd->add_flag("--no-cache", opts.no_cache, "Do not read or write the result cache");
  cmd->add_option("--tol", opts.tol, "Relative residual tolerance of the eigensolver")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opts.seed, "Start-vector seed");
  cmd->add_option("--threads", opts.threads, "Sweep worker threads (0 = auto)");
}

std::unique_ptr<ResultCache> open_cache(const CommonOptions& opts) {
  if (opts.no_cache) return nullptr;
  if (!opts.cache_dir.empty()) return std::make_unique<ResultCache>(opts.cache_dir);
  if (auto dir = ResultCache::env_dir()) return std::make_unique<ResultCache>(*dir);
  return nullptr;
}

/// "1.5" | "1.0,1.1" | "1.0:2.0:0.1" (inclusive range), combinable by commas.
std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string token = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (token.empty()) continue;
    const auto c1 = token.find(':');
    if (c1 == std::string::npos) {
      values.push_back(std::stod(token));
      continue;
    }
    const auto c2 = token.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw std::invalid_argument("range must be start:stop:step, got '" + token + "'");
    }
    const double start = std::stod(token.substr(0, c1));
    const double stop = std::stod(token.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(token.substr(c2 + 1));
    if (!(step > 0.0) || stop < start) {
      throw std::invalid_argument("bad range '" + token + "'");
    }
    const int n = static_cast<int>(std::round((stop - start) / step));
    for (int i = 0; i <= n; ++i) {
      const double v = start + i * step;
      if (v <= stop + 0.5 * step) values.push_back(v);
    }
  }
  return values;
}

/// --betas accepts an explicit list/range, or "lo:hi" which selects the
/// published default grid of the class restricted to [lo, hi].
std::vector<double> resolve_betas(const std::string& text, SymmetryClass sym) {
  if (text.empty()) return default_sweep_betas(sym);
  const auto c1 = text.find(':');
  if (c1 != std::string::npos && text.find(':', c1 + 1) == std::string::npos &&
      text.find(',') == std::string::npos) {
    const double lo = std::stod(text.substr(0, c1));
    const double hi = std::stod(text.substr(c1 + 1));
    std::vector<double> out;
    for (double b : default_sweep_betas(sym)) {
      if (b >= lo - 1e-12 && b <= hi + 1e-12) out.push_back(b);
    }
    if (out.empty()) throw std::invalid_argument("no default sweep points inside " + text);
    return out;
  }
  return parse_value_list(text);
}

struct GridChoice {
  std::string set_label;  // "I", "II", "III" or empty
  double L = 0.0;
  int N = 0;

  GridSpec resolve(SymmetryClass sym, double beta) const {
    if (!set_label.empty()) return grid_set(set_label);
    if (L > 0.0 && N > 0) return {L, N, "custom"};
    if (L > 0.0 || N > 0) {
      throw InvalidGrid("--L and --N must be given together");
    }
    return default_grid_for(sym, beta);
  }
};

void add_grid_options(CLI::App* cmd, GridChoice& grid) {
  cmd->add_option("--set", grid.set_label, "Grid preset: I (L=20,N=600), II (40,800), III (100,1600)")
      ->check(CLI::IsMember({"I", "II", "III"}));
  cmd->add_option("--L", grid.L, "Truncation half-length (rescaled units)");
  cmd->add_option("--N", grid.N, "Grid parameter (N-1 nodes per axis, 1/h = N/2L integer)");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

void export_field_files(const Field& field, const std::string& prefix,
                        const std::string& format) {
  if (format == "csv") {
    std::ofstream out(prefix + ".csv", std::ios::binary | std::ios::trunc);
    write_field_csv(out, field);
  } else {
    std::ofstream out(prefix + ".field", std::ios::binary | std::ios::trunc);
    write_field_grid(out, field);
  }
  {
    std::ofstream out(prefix + "_xcut.dat", std::ios::binary | std::ios::trunc);
    write_field_cut(out, field, true);
  }
  {
    std::ofstream out(prefix + "_ycut.dat", std::ios::binary | std::ios::trunc);
    write_field_cut(out, field, false);
  }
}

SolveRequest build_request(double beta, SymmetryClass sym, const GridChoice& grid,
                           const CommonOptions& common) {
  // Width ratios below one describe the same cross rotated by 90 degrees.
  const NormalizedProblem norm = normalize_problem(beta, sym, 1.0, 1.0);
  if (norm.swapped) {
    std::cerr << "note: beta " << beta << " (" << sym.label() << ") normalized to beta "
              << norm.problem.beta << " (" << norm.problem.sym.label() << ")\n";
  }
  SolveRequest req;
  req.beta = norm.problem.beta;
  req.sym = norm.problem.sym;
  req.grid = grid.resolve(norm.problem.sym, norm.problem.beta);
  req.solver.tol = common.tol;
  req.solver.seed = common.seed;
  return req;
}

int cmd_solve(double beta, const std::string& klass, const GridChoice& grid,
              const CommonOptions& common, bool require_bound, const std::string& out_json,
              const std::string& export_prefix, const std::string& export_format,
              bool full_domain) {
  SolveRequest req = build_request(beta, SymmetryClass::parse(klass), grid, common);
  if (full_domain) req.mode = DomainMode::Full;

  auto cache = open_cache(common);
  std::optional<SweepRecord> record;
  const CacheKey key{kVersion, req.sym.label(), req.beta, req.grid.L, req.grid.N, req.solver.tol};
  const bool cacheable = cache && !full_domain && req.solver.seed == SolverOptions{}.seed &&
                         req.decay == DecayOptions{};
  if (cacheable && export_prefix.empty()) {
    record = cache->get(key);
  }

  std::optional<SolveResult> result;
  if (!record) {
    result = solve_cross(req);
    record = result->record;
    if (cacheable) cache->put(key, *record);
  }

  std::printf("E/E_TH = %.6g\n", record->e_ratio);
  std::printf("bound  = %s\n", record->bound ? "true" : "false");
  std::printf("ell_x  = %s\n", record->ell_x ? std::to_string(*record->ell_x).c_str() : "n/a");
  std::printf("ell_y  = %s\n", record->ell_y ? std::to_string(*record->ell_y).c_str() : "n/a");

  if (!out_json.empty()) write_text_file(out_json, record_to_json(*record));
  if (!export_prefix.empty()) {
    if (!record->bound) {
      throw UnboundState("state is not bound; no field exported");
    }
    export_field_files(result->field, export_prefix, export_format);
  }
  if (require_bound && !record->bound) return kExitNotBound;
  return kExitOk;
}

int cmd_sweep(const std::string& klass, std::string betas_text, const GridChoice& grid,
              const CommonOptions& common, const std::string& out_csv,
              const std::string& out_json) {
  const SymmetryClass sym = SymmetryClass::parse(klass);
  std::vector<double> betas = resolve_betas(betas_text, sym);

  auto cache = open_cache(common);
  SweepOptions opts;
  opts.solver.tol = common.tol;
  opts.solver.seed = common.seed;
  opts.cache = cache.get();
  opts.threads = common.threads;
  if (!grid.set_label.empty() || grid.L > 0.0) {
    opts.grid_for = [grid](SymmetryClass s, double b) { return grid.resolve(s, b); };
  }

  const std::vector<SweepRecord> records = beta_sweep(sym, betas, opts);
  const std::string csv = records_to_csv(records);
  std::fputs(csv.c_str(), stdout);
  if (!out_csv.empty()) write_text_file(out_csv, csv);
  if (!out_json.empty()) write_text_file(out_json, records_to_json(records));

  for (const auto& r : records) {
    if (!r.error.empty()) {
      std::cerr << "warning: beta " << r.beta << " failed: " << r.error << "\n";
    }
  }
  return kExitOk;
}

int cmd_extrapolate(const std::string& klass, double beta, double L, std::string ns_text,
                    const CommonOptions& common, const std::string& out_csv,
                    const std::string& out_json) {
  const SymmetryClass sym = SymmetryClass::parse(klass);
  if (ns_text.empty()) ns_text = "80:880:40";
  std::vector<double> Ns = parse_value_list(ns_text);

  auto cache = open_cache(common);
  std::vector<double> ratios;
  std::string csv = "N,E_ratio\n";
  for (double Nd : Ns) {
    const int N = static_cast<int>(std::lround(Nd));
    SolveRequest req;
    req.beta = beta;
    req.sym = sym;
    req.grid = {L, N, "extrapolation"};
    req.solver.tol = common.tol;
    req.solver.seed = common.seed;
    req.compute_decay = false;

    const CacheKey key{kVersion, sym.label(), beta, L, N, common.tol};
    std::optional<SweepRecord> rec;
    const bool cacheable = cache && common.seed == SolverOptions{}.seed;
    if (cacheable) rec = cache->get(key);
    if (!rec) {
      rec = solve_cross(req).record;
      if (cacheable) cache->put(key, *rec);
    }
    ratios.push_back(rec->e_ratio);
    char line[64];
    std::snprintf(line, sizeof(line), "%d,%.17g\n", N, rec->e_ratio);
    csv += line;
  }

  const FitResult fit = extrapolate_grid_sequence(Ns, ratios);
  std::printf("a1    = %.6g\n", fit.params[0]);
  std::printf("gamma = %.6g\n", fit.params[4]);
  std::printf("rss   = %.3g\n", fit.rss);
  if (!out_csv.empty()) write_text_file(out_csv, csv);
  if (!out_json.empty()) write_text_file(out_json, fit_to_json(fit));
  return kExitOk;
}

int cmd_critical(const std::string& klass, std::string betas_text, const CommonOptions& common,
                 const std::string& method, const std::string& out_json) {
  const SymmetryClass sym = SymmetryClass::parse(klass);
  std::vector<double> betas = resolve_betas(betas_text, sym);

  auto cache = open_cache(common);
  SweepOptions opts;
  opts.solver.tol = common.tol;
  opts.solver.seed = common.seed;
  opts.cache = cache.get();
  opts.threads = common.threads;
  const std::vector<SweepRecord> records = beta_sweep(sym, betas, opts);

  nlohmann::json j;
  auto report = [&](CriticalMethod m, const char* name) {
    const CriticalEstimate est = locate_critical_beta(sym, records, m);
    std::printf("beta_star(%s) %-18s = %.6g +/- %.2g\n", sym.label().c_str(), name,
                est.beta_star, est.uncertainty);
    j[name] = nlohmann::json::parse(critical_to_json(est));
  };
  if (method == "a" || method == "both") report(CriticalMethod::PoleFit, "pole_fit");
  if (method == "b" || method == "both") report(CriticalMethod::ThresholdCrossing, "threshold_crossing");
  if (!out_json.empty()) write_text_file(out_json, j.dump(2));
  return kExitOk;
}

int cmd_export_field(double beta, const std::string& klass, const GridChoice& grid,
                     const CommonOptions& common, const std::string& prefix,
                     const std::string& format) {
  SolveRequest req = build_request(beta, SymmetryClass::parse(klass), grid, common);
  const SolveResult result = solve_cross(req);
  if (!result.record.bound) {
    throw UnboundState("lowest " + req.sym.label() + " state at beta " +
                       std::to_string(req.beta) + " is not bound; no field exported");
  }
  export_field_files(result.field, prefix, format);
  std::printf("wrote %s field and cut files (E/E_TH = %.6g)\n", prefix.c_str(),
              result.record.e_ratio);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound states of open cross, T and L shaped waveguides"};
  app.set_version_flag("--version", std::string(kVersion));
  app.config_formatter(std::make_shared<JsonOrKVConfig>());
  app.set_config("--config", "",
                 "Config file: key=value lines (solve.beta=1.5 or [solve] sections) "
                 "or a JSON object nested per subcommand");
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Lowest state of one (beta, class) problem");
  struct {
    double beta = 1.0;
    std::string klass = "ee";
    GridChoice grid;
    CommonOptions common;
    bool require_bound = false;
    bool full_domain = false;
    std::string out_json, export_prefix, export_format = "grid";
  } s;
  solve->add_option("--beta", s.beta, "Width ratio w_y/w_x")->required();
  solve->add_option("--class", s.klass, "Symmetry class: ee, oe, eo, oo")->required();
  add_grid_options(solve, s.grid);
  add_common(solve, s.common);
  solve->add_flag("--require-bound", s.require_bound,
                  "Exit with a distinct status when the state is not bound");
  solve->add_flag("--full-domain", s.full_domain,
                  "Solve on the full truncated cross instead of the quarter");
  solve->add_option("--out", s.out_json, "Write the record as JSON");
  solve->add_option("--export-field", s.export_prefix, "Also export the field under this prefix");
  solve->add_option("--export-format", s.export_format, "Field format: grid or csv")
      ->check(CLI::IsMember({"grid", "csv"}));

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Width-ratio sweep producing table rows");
  struct {
    std::string klass = "ee";
    std::string betas;
    GridChoice grid;
    CommonOptions common;
    std::string out_csv, out_json;
  } w;
  sweep->add_option("--class", w.klass, "Symmetry class")->required();
  sweep->add_option("--betas", w.betas, "List or start:stop:step (default: published grid)");
  add_grid_options(sweep, w.grid);
  add_common(sweep, w.common);
  sweep->add_option("--out", w.out_csv, "Write CSV here (also printed)");
  sweep->add_option("--json", w.out_json, "Write records with diagnostics as JSON");

  // extrapolate
  auto* extrap = app.add_subcommand("extrapolate", "Grid-refinement extrapolation of E/E_TH");
  struct {
    std::string klass = "ee";
    double beta = 1.0;
    double L = 20.0;
    std::string Ns;
    CommonOptions common;
    std::string out_csv, out_json;
  } e;
  extrap->add_option("--class", e.klass, "Symmetry class");
  extrap->add_option("--beta", e.beta, "Width ratio");
  extrap->add_option("--L", e.L, "Truncation half-length");
  extrap->add_option("--Ns", e.Ns, "Grid sizes, e.g. 80:880:40");
  add_common(extrap, e.common);
  extrap->add_option("--out", e.out_csv, "Write the (N, ratio) sequence as CSV");
  extrap->add_option("--json", e.out_json, "Write the fit as JSON");

  // critical
  auto* crit = app.add_subcommand("critical", "Critical width ratio of a class");
  struct {
    std::string klass = "oo";
    std::string betas;
    std::string method = "both";
    CommonOptions common;
    std::string out_json;
  } c;
  crit->add_option("--class", c.klass, "oo or eo")->required();
  crit->add_option("--betas", c.betas, "Sweep list (default: published grid)");
  crit->add_option("--method", c.method, "a (pole fit), b (threshold crossing) or both")
      ->check(CLI::IsMember({"a", "b", "both"}));
  add_common(crit, c.common);
  crit->add_option("--json", c.out_json, "Write both estimates as JSON");

  // predict
  auto* predict = app.add_subcommand("predict", "Qualitative boundness per symmetry class");

  // export-field
  auto* expf = app.add_subcommand("export-field", "Solve and export the wave function");
  struct {
    double beta = 1.0;
    std::string klass = "ee";
    GridChoice grid;
    CommonOptions common;
    std::string prefix = "field";
    std::string format = "grid";
  } x;
  expf->add_option("--beta", x.beta, "Width ratio")->required();
  expf->add_option("--class", x.klass, "Symmetry class")->required();
  add_grid_options(expf, x.grid);
  add_common(expf, x.common);
  expf->add_option("--out", x.prefix, "Output prefix");
  expf->add_option("--format", x.format, "grid or csv")->check(CLI::IsMember({"grid", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(s.beta, s.klass, s.grid, s.common, s.require_bound, s.out_json,
                       s.export_prefix, s.export_format, s.full_domain);
    }
    if (sweep->parsed()) {
      return cmd_sweep(w.klass, w.betas, w.grid, w.common, w.out_csv, w.out_json);
    }
    if (extrap->parsed()) {
      return cmd_extrapolate(e.klass, e.beta, e.L, e.Ns, e.common, e.out_csv, e.out_json);
    }
    if (crit->parsed()) {
      return cmd_critical(c.klass, c.betas, c.common, c.method, c.out_json);
    }
    if (predict->parsed()) {
      std::fputs(predictions_to_text().c_str(), stdout);
      return kExitOk;
    }
    if (expf->parsed()) {
      return cmd_export_field(x.beta, x.klass, x.grid, x.common, x.prefix, x.format);
    }
  } catch (const NonConvergence& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNonConvergence;
  } catch (const UnboundState& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUnboundExport;
  } catch (const CacheIntegrityError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitCacheIntegrity;
  } catch (const InvalidGrid& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
