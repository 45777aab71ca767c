#include "treewalk/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "treewalk/errors.hpp"
#include "treewalk/index.hpp"
#include "treewalk/onedim.hpp"
#include "treewalk/symbolic.hpp"
#include "treewalk/treeop.hpp"
#include "treewalk/walk.hpp"

namespace treewalk {

using nlohmann::json;

namespace {

constexpr double kCheckTolerance = 1e-10;
constexpr double kRankTolerance = 1e-8;

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out_path);
  if (!file) throw ValidationError("cannot write \"" + cfg.out_path + "\"");
  file << text;
}

std::string fmt(double v, int precision = 17) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

GammaForm parse_form(const std::string& s) {
  if (s == "symmetric") return GammaForm::symmetric;
  if (s == "as_printed") return GammaForm::as_printed;
  throw InvalidArgument("--gamma-form must be symmetric or as_printed");
}

void validate(const RunConfig& cfg) {
  if (cfg.tol && !(*cfg.tol > 0.0)) throw InvalidArgument("--tol must be positive");
  if (cfg.samples == 0) throw InvalidArgument("--samples must be positive");
  if (cfg.workers == 0) throw InvalidArgument("--workers must be positive");
  if (cfg.quadrature_samples < 64) throw InvalidArgument("--quadrature-samples must be >= 64");
  if (cfg.mode != "exact" && cfg.mode != "mc") throw InvalidArgument("--mode must be exact or mc");
  ProductMeasure::parse(cfg.measure);
  parse_form(cfg.gamma_form);
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const WalkSpec w = load_walk(cfg.walk_path);
  const TruncatedTree t = enumerate(cfg.depth);
  const double threshold = cfg.tol.value_or(kCheckTolerance);
  const auto residuals = check_identities(build_bundle(w, t, parse_form(cfg.gamma_form)));
  std::ostringstream csv;
  csv << "identity,residual,threshold,pass\n";
  bool ok = true;
  for (const auto& r : residuals) {
    const bool pass = r.residual < threshold;
    ok = ok && pass;
    csv << r.name << ',' << fmt(r.residual, 6) << ',' << fmt(threshold, 6) << ','
        << (pass ? "yes" : "no") << '\n';
  }
  emit(cfg, csv.str(), out);
  return ok ? kExitOk : kExitResidualBreach;
}

int cmd_winding(const RunConfig& cfg, std::ostream& out) {
  const WalkSpec w = load_walk(cfg.walk_path);
  json cells = json::array();
  bool singular = false;
  for (const auto& cell : w.cells()) {
    const SymbolLoop s = SymbolLoop::from(cell.coeff, w.p(), w.q());
    json jc{{"prefix", cell.cylinder.prefix.str()}, {"a", s.a}, {"b", complex_json(s.b)}};
    const InvertibilityCheck inv = is_invertible(s);
    jc["invertible"] = inv.invertible;
    jc["min_modulus"] = min_modulus(s, cfg.quadrature_samples);
    if (std::norm(s.q) != 0.0) {
      const PoleData d = pole_data(s);
      jc["alpha"] = complex_json(d.alpha);
      jc["beta"] = complex_json(d.beta);
      jc["w0"] = d.w0 ? complex_json(*d.w0) : json(nullptr);
    }
    if (inv.invertible) {
      jc["winding_residues"] = winding_residues(s);
      jc["winding_quadrature"] = winding_quadrature(s, cfg.quadrature_samples).winding;
    } else {
      singular = true;
      jc["witness"] = complex_json(*inv.witness);
    }
    cells.push_back(std::move(jc));
  }
  const json doc{{"p", w.p()}, {"q", complex_json(w.q())}, {"cells", std::move(cells)}};
  emit(cfg, doc.dump(2) + "\n", out);
  return singular ? kExitSymbolSingular : kExitOk;
}

int cmd_index(const RunConfig& cfg, std::ostream& out) {
  const WalkSpec w = load_walk(cfg.walk_path);
  const ProductMeasure m = ProductMeasure::parse(cfg.measure);
  const IndexReport r = cfg.mode == "exact"
                            ? s_index_exact(w, m)
                            : s_index_montecarlo(w, m, cfg.samples, cfg.seed, cfg.workers,
                                                 cfg.quadrature_samples);
  emit(cfg, report_to_json(r), out);
  return kExitOk;
}

int cmd_onedim(const RunConfig& cfg, std::ostream& out) {
  const LineWalkSpec spec = load_line_walk(cfg.walk_path);
  const LineBundle b = build_line(spec, cfg.halfwidth);
  const double tol = cfg.tol.value_or(kRankTolerance);
  const FredholmResult r = fredholm_index(b, tol);
  const auto& sv = r.diagnostics.singular_values;
  json smallest = json::array();
  for (std::size_t k = sv.size() > 4 ? sv.size() - 4 : 0; k < sv.size(); ++k) smallest.push_back(sv[k]);
  const json doc{{"halfwidth", cfg.halfwidth},
                 {"tol", tol},
                 {"a_left", b.a_left},
                 {"a_right", b.a_right},
                 {"index", r.index},
                 {"predicted_index", expected_line_index(b.a_left, b.a_right)},
                 {"kernel_dim", r.diagnostics.kernel_dim},
                 {"cokernel_dim", r.diagnostics.cokernel_dim},
                 {"discarded_edge_vectors", r.diagnostics.discarded},
                 {"spectral_gap", r.diagnostics.smallest_kept},
                 {"smallest_singular_values", std::move(smallest)}};
  emit(cfg, doc.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_falk(const RunConfig& cfg, std::ostream& out) {
  const std::size_t n = cfg.truncation;
  json doc{{"truncation", n},
           {"orientation", falk_orientation(n)},
           {"raw_trace_f1", falk_trace_raw(1, n)},
           {"raw_trace_f0", falk_trace_raw(0, n)},
           {"pairing_f1", falk_pairing(1, n)},
           {"pairing_f0", falk_pairing(0, n)}};
  if (!cfg.cylinder.empty()) {
    const Cylinder c = Cylinder::parse(cfg.cylinder);
    const ProductMeasure m = ProductMeasure::parse(cfg.measure);
    doc["cylinder"] = c.prefix.str();
    doc["measure"] = m.str();
    doc["cylinder_pairing"] = falk_measure_pairing(c, m, n);
  }
  emit(cfg, doc.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> ps = parse_grid(cfg.p_grid);
  const std::vector<double> as = parse_grid(cfg.a_grid);
  std::ostringstream csv;
  csv << "p,a,winding_residues,winding_quadrature,min_modulus,singular\n";
  for (double p : ps) {
    if (!(std::abs(p) <= 1.0)) throw InvalidArgument("sweep: |p| must be <= 1");
    for (double a : as) {
      if (!(std::abs(a) < 1.0)) throw InvalidArgument("sweep: |a| must be < 1");
      const SymbolLoop s{a, Complex{std::sqrt(1.0 - a * a), 0.0}, p,
                         Complex{std::sqrt(1.0 - p * p), 0.0}};
      csv << fmt(p, 6) << ',' << fmt(a, 6) << ',';
      const double mm = min_modulus(s, cfg.quadrature_samples);
      if (is_invertible(s).invertible) {
        csv << winding_residues(s) << ',' << fmt(winding_quadrature(s, cfg.quadrature_samples).winding, 12)
            << ',' << fmt(mm, 6) << ",no\n";
      } else {
        csv << ",," << fmt(mm, 6) << ",yes\n";
      }
    }
  }
  emit(cfg, csv.str(), out);
  return kExitOk;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  auto number = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("grid: not a number: \"" + s + "\"");
    }
    if (used != s.size()) throw InvalidArgument("grid: not a number: \"" + s + "\"");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw InvalidArgument("grid range must be start:stop:step");
    const double start = number(parts[0]), stop = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0) || stop < start) throw InvalidArgument("grid range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    // Snap to 1e-12 so that 0.1-style steps land on the decimal grid.
    for (long k = 0; k < count; ++k)
      out.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
    return out;
  }
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(number(part));
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Index invariants of chirality operators for quantum walks on the binary tree"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--out", cfg.out_path, "Write the report to PATH instead of stdout");
    sub->add_option("--tol", cfg.tol, "Tolerance override");
    sub->add_option("--workers", cfg.workers, "Worker threads");
  };

  auto* check = app.add_subcommand("check", "Algebraic identity residuals of the tree operators (CSV)");
  check->add_option("--walk", cfg.walk_path, "Walk file")->required();
  check->add_option("--depth", cfg.depth, "Tree truncation depth");
  check->add_option("--gamma-form", cfg.gamma_form, "symmetric | as_printed");
  add_common(check);

  auto* winding = app.add_subcommand("winding", "Per-cell winding numbers, poles and w0 (JSON)");
  winding->add_option("--walk", cfg.walk_path, "Walk file")->required();
  winding->add_option("--samples", cfg.quadrature_samples, "Circle samples for the quadrature");
  add_common(winding);

  auto* index = app.add_subcommand("index", "Secondary index against a measure (JSON)");
  index->add_option("--walk", cfg.walk_path, "Walk file")->required();
  index->add_option("--measure", cfg.measure, "uniform | bernoulli:THETA | levels:T1,T2,...");
  index->add_option("--mode", cfg.mode, "exact | mc");
  index->add_option("--samples", cfg.samples, "Monte Carlo samples");
  index->add_option("--quadrature-samples", cfg.quadrature_samples, "Circle samples per cell");
  index->add_option("--seed", cfg.seed, "Monte Carlo seed");
  add_common(index);

  auto* onedim = app.add_subcommand("onedim", "Fredholm index of the 1-D chirality operator (JSON)");
  onedim->add_option("--walk", cfg.walk_path, "Line walk file")->required();
  onedim->add_option("--halfwidth", cfg.halfwidth, "Lattice sites -N..N");
  add_common(onedim);

  auto* falk = app.add_subcommand("falk", "Falk-formula pairing on the half-line (JSON)");
  falk->add_option("--truncation", cfg.truncation, "Half-line truncation length");
  falk->add_option("--cylinder", cfg.cylinder, "Cylinder prefix for the measure pairing");
  falk->add_option("--measure", cfg.measure, "uniform | bernoulli:THETA | levels:T1,T2,...");
  add_common(falk);

  auto* sweep = app.add_subcommand("sweep", "Winding numbers over an (a, p) grid (CSV)");
  sweep->add_option("--p-grid", cfg.p_grid, "x1,x2,... or start:stop:step");
  sweep->add_option("--a-grid", cfg.a_grid, "x1,x2,... or start:stop:step");
  sweep->add_option("--samples", cfg.quadrature_samples, "Circle samples for the quadrature");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalidInput;
  }

  try {
    validate(cfg);
    if (check->parsed()) return cmd_check(cfg, out);
    if (winding->parsed()) return cmd_winding(cfg, out);
    if (index->parsed()) return cmd_index(cfg, out);
    if (onedim->parsed()) return cmd_onedim(cfg, out);
    if (falk->parsed()) return cmd_falk(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, out);
  } catch (const SymbolSingular& e) {
    err << "symbol-singular: " << e.what() << '\n';
    return kExitSymbolSingular;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const InconclusiveTruncation& e) {
    err << "inconclusive truncation: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace treewalk
