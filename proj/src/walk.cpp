#include "treewalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "treewalk/errors.hpp"

namespace treewalk {

using nlohmann::json;

namespace {

constexpr double kRenormalizeThreshold = 1e-14;

// Accepts either a bare number or {"re": x, "im": y}.
Complex complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_object() && j.contains("re")) {
    const double re = j.at("re").get<double>();
    const double im = j.contains("im") ? j.at("im").get<double>() : 0.0;
    return {re, im};
  }
  throw ValidationError(where + ": expected a number or {\"re\":..,\"im\":..}");
}

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file \"" + path + "\"");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

SphereCoeff coeff_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b"))
    throw ValidationError(where + ": expected fields \"a\" and \"b\"");
  try {
    return SphereCoeff::make(j.at("a").get<double>(), complex_from_json(j.at("b"), where));
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  } catch (const json::exception& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

json coeff_to_json(const SphereCoeff& c) {
  return json{{"a", c.a}, {"b", complex_to_json(c.b)}};
}

}  // namespace

SphereCoeff SphereCoeff::make(double a, Complex b, double margin) {
  if (!std::isfinite(a) || !std::isfinite(b.real()) || !std::isfinite(b.imag()))
    throw ValidationError("coin value is not finite");
  const double n2 = a * a + std::norm(b);
  if (std::abs(n2 - 1.0) > kSphereInputTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "(a, b) = (" << a << ", " << b << ") is not on S^2: a^2 + |b|^2 = " << n2;
    throw ValidationError(os.str());
  }
  if (std::abs(n2 - 1.0) > kRenormalizeThreshold) {
    const double n = std::sqrt(n2);
    a /= n;
    b /= n;
  }
  if (std::abs(a) > 1.0 - margin) {
    std::ostringstream os;
    os.precision(17);
    os << "|a| = " << std::abs(a) << " lies within " << margin << " of 1; the coin is not diagonalizable by a smooth unitary";
    throw SingularCoinError(os.str());
  }
  return {a, b};
}

WalkSpec::WalkSpec(double p, Complex q, std::vector<WalkCell> cells)
    : p_(p), q_(q), cells_(std::move(cells)) {
  const double n2 = p_ * p_ + std::norm(q_);
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kSphereInputTolerance)
    throw ValidationError("(p, q) is not on S^2: p^2 + |q|^2 = " + std::to_string(n2));
  if (std::abs(n2 - 1.0) > kRenormalizeThreshold) {
    const double n = std::sqrt(n2);
    p_ /= n;
    q_ /= n;
  }
  std::sort(cells_.begin(), cells_.end(),
            [](const WalkCell& x, const WalkCell& y) { return x.cylinder < y.cylinder; });
  std::vector<Cylinder> cyl;
  for (const auto& c : cells_) {
    cyl.push_back(c.cylinder);
    max_level_ = std::max(max_level_, c.cylinder.level());
  }
  validate_prefix_code(cyl);
}

std::size_t WalkSpec::cell_index(const Cylinder& c) const {
  for (std::size_t k = 0; k < cells_.size(); ++k)
    if (cells_[k].cylinder.contains(c)) return k;
  throw AmbiguousCylinder("cylinder \"" + c.prefix.str() +
                          "\" is coarser than the cell partition of the walk");
}

SphereCoeff eval_boundary(const WalkSpec& w, const Cylinder& c) {
  return w.cells()[w.cell_index(c)].coeff;
}

SphereCoeff eval_vertex(const WalkSpec& w, const VertexAddr& v, InteriorRule rule) {
  for (const auto& cell : w.cells())
    if (cell.cylinder.prefix.is_prefix_of(v)) return cell.coeff;
  const int fill = rule == InteriorRule::leftmost ? 0 : 1;
  VertexAddr x = v;
  while (x.size() < w.max_level()) x = x.append(fill);
  return eval_boundary(w, Cylinder{x});
}

WalkSpec parse_walk(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) throw ValidationError("walk document must be a JSON object");
  for (const char* key : {"p", "q", "cells"})
    if (!doc.contains(key)) throw ValidationError(std::string("walk document lacks \"") + key + "\"");
  if (!doc.at("cells").is_array()) throw ValidationError("\"cells\" must be an array");
  std::vector<WalkCell> cells;
  for (std::size_t k = 0; k < doc.at("cells").size(); ++k) {
    const json& jc = doc.at("cells")[k];
    if (!jc.is_object() || !jc.contains("prefix") || !jc.at("prefix").is_string())
      throw ValidationError("cell " + std::to_string(k) + ": missing string field \"prefix\"");
    const std::string prefix = jc.at("prefix").get<std::string>();
    const std::string where = "cell \"" + prefix + "\"";
    Cylinder cyl;
    try {
      cyl = Cylinder::parse(prefix);
    } catch (const InvalidArgument& e) {
      throw ValidationError(where + ": " + e.what());
    }
    cells.push_back({cyl, coeff_from_json(jc, where)});
  }
  try {
    return WalkSpec(doc.at("p").get<double>(), complex_from_json(doc.at("q"), "q"),
                    std::move(cells));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("walk document: ") + e.what());
  }
}

WalkSpec load_walk(const std::string& path) { return parse_walk(read_file(path)); }

std::string serialize_walk(const WalkSpec& w) {
  json cells = json::array();
  for (const auto& c : w.cells()) {
    json jc = coeff_to_json(c.coeff);
    jc["prefix"] = c.cylinder.prefix.str();
    cells.push_back(std::move(jc));
  }
  const json doc{{"p", w.p()}, {"q", complex_to_json(w.q())}, {"cells", std::move(cells)}};
  return doc.dump(2) + "\n";
}

LineWalkSpec LineWalkSpec::make(SphereCoeff left, SphereCoeff right, std::vector<Site> middle) {
  std::sort(middle.begin(), middle.end(), [](const Site& x, const Site& y) { return x.n < y.n; });
  for (std::size_t k = 1; k < middle.size(); ++k)
    if (middle[k].n == middle[k - 1].n)
      throw ValidationError("line walk lists site " + std::to_string(middle[k].n) + " twice");
  return {left, right, std::move(middle)};
}

SphereCoeff LineWalkSpec::at(std::int64_t n) const {
  const auto it = std::lower_bound(middle.begin(), middle.end(), n,
                                   [](const Site& s, std::int64_t v) { return s.n < v; });
  if (it != middle.end() && it->n == n) return it->coeff;
  return n < 0 ? left_tail : right_tail;
}

std::int64_t LineWalkSpec::support_radius() const {
  std::int64_t r = 0;
  for (const auto& s : middle) r = std::max(r, s.n < 0 ? -s.n : s.n);
  return r;
}

LineWalkSpec parse_line_walk(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object() || !doc.contains("left") || !doc.contains("right"))
    throw ValidationError("line walk document needs \"left\" and \"right\"");
  std::vector<LineWalkSpec::Site> middle;
  if (doc.contains("middle")) {
    if (!doc.at("middle").is_array()) throw ValidationError("\"middle\" must be an array");
    for (const json& js : doc.at("middle")) {
      if (!js.is_object() || !js.contains("n") || !js.at("n").is_number_integer())
        throw ValidationError("middle site lacks integer field \"n\"");
      const auto n = js.at("n").get<std::int64_t>();
      middle.push_back({n, coeff_from_json(js, "site " + std::to_string(n))});
    }
  }
  return LineWalkSpec::make(coeff_from_json(doc.at("left"), "left tail"),
                            coeff_from_json(doc.at("right"), "right tail"), std::move(middle));
}

LineWalkSpec load_line_walk(const std::string& path) { return parse_line_walk(read_file(path)); }

std::string serialize_line_walk(const LineWalkSpec& w) {
  json middle = json::array();
  for (const auto& s : w.middle) {
    json js = coeff_to_json(s.coeff);
    js["n"] = s.n;
    middle.push_back(std::move(js));
  }
  const json doc{{"left", coeff_to_json(w.left_tail)},
                 {"right", coeff_to_json(w.right_tail)},
                 {"middle", std::move(middle)}};
  return doc.dump(2) + "\n";
}

LineWalkSpec linear_ramp_walk(double a_left, double a_right, std::int64_t ramp) {
  auto coeff = [](double a) { return SphereCoeff::make(a, std::sqrt(1.0 - a * a)); };
  std::vector<LineWalkSpec::Site> middle;
  for (std::int64_t n = -ramp; n <= ramp; ++n) {
    const double t = ramp == 0 ? 0.5 : static_cast<double>(n + ramp) / static_cast<double>(2 * ramp);
    middle.push_back({n, coeff(a_left + (a_right - a_left) * t)});
  }
  return LineWalkSpec::make(coeff(a_left), coeff(a_right), std::move(middle));
}

}  // namespace treewalk
