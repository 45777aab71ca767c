#include <doctest.h>

#include <json.hpp>
#include <random>

#include "support.hpp"
#include "treewalk/errors.hpp"
#include "treewalk/index.hpp"

using namespace treewalk;
using testing_support::antisymmetric_walk;
using testing_support::level2_walk;
using testing_support::real_coeff;

namespace {

WalkSpec refined(const WalkSpec& w, std::size_t level) {
  std::vector<Cylinder> cyl;
  for (const auto& c : w.cells()) cyl.push_back(c.cylinder);
  std::vector<WalkCell> cells;
  for (const auto& rc : refine_partition(cyl, level)) cells.push_back({rc.cylinder, w.cells()[rc.ancestor].coeff});
  return WalkSpec(w.p(), w.q(), std::move(cells));
}

}  // namespace

TEST_SUITE("index") {

TEST_CASE("classify_point") {
  CHECK(classify_point(0.8, 0.5) == 1);
  CHECK(classify_point(0.2, 0.5) == 0);
  CHECK(classify_point(-0.8, 0.5) == -1);
  CHECK(classify_point(0.8, -0.5) == 1);
  CHECK_THROWS_AS(classify_point(0.5, -0.5), SymbolSingular);
}

TEST_CASE("s_index_exact examples") {
  const WalkSpec constant(0.0, 1.0, {{Cylinder::parse(""), real_coeff(0.9)}});
  const IndexReport c = s_index_exact(constant, ProductMeasure::uniform());
  CHECK(*c.exact == DyadicRational::integer(1));
  CHECK(c.numeric == 1.0);

  const IndexReport s = s_index_exact(antisymmetric_walk(), ProductMeasure::uniform());
  CHECK(*s.exact == DyadicRational{});

  const IndexReport r = s_index_exact(level2_walk(), ProductMeasure::uniform());
  CHECK(*r.exact == DyadicRational(1, 2));
  REQUIRE(r.per_cell.size() == 4);
  const int windings[] = {1, 1, 0, -1};
  for (std::size_t k = 0; k < 4; ++k) CHECK(r.per_cell[k].winding == windings[k]);
  CHECK(r.classification_counts.plus == 2);
  CHECK(r.classification_counts.zero == 1);
  CHECK(r.classification_counts.minus == 1);
}

TEST_CASE("s_index_exact names a degenerate cell") {
  const WalkSpec w(0.5, std::sqrt(0.75), {{Cylinder::parse("0"), real_coeff(0.9)}, {Cylinder::parse("1"), real_coeff(-0.5)}});
  try {
    s_index_exact(w, ProductMeasure::uniform());
    FAIL("expected SymbolSingular");
  } catch (const SymbolSingular& e) {
    CHECK(e.cell() == "1");
  }
  CHECK_THROWS_AS(s_index_montecarlo(w, ProductMeasure::uniform(), 10, 1), SymbolSingular);
}

TEST_CASE("bernoulli measure pairing") {
  const IndexReport r = s_index_exact(antisymmetric_walk(), ProductMeasure::bernoulli(1.0 / 3.0));
  CHECK_FALSE(r.exact.has_value());
  CHECK(r.numeric == doctest::Approx(1.0 / 3.0 - 2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("report invariants on random walks") {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 30; ++k) {
    const WalkSpec w = testing_support::random_walk(rng, k % 2 ? 0.0 : 0.45, 4, 0.02);
    const IndexReport r = s_index_exact(w, ProductMeasure::uniform());
    double sum = 0.0;
    for (const auto& c : r.per_cell) sum += c.winding * c.measure;
    CHECK(std::abs(r.numeric - sum) < 1e-12);
    CHECK(std::abs(r.exact->to_double() - r.numeric) < 1e-12);
    CHECK(r.numeric >= -1.0);
    CHECK(r.numeric <= 1.0);
    CHECK(r.exact->exponent() <= w.max_level());
    CHECK(s_index_exact(refined(w, 5), ProductMeasure::uniform()).exact == r.exact);
    const IndexReport b = s_index_exact(w, ProductMeasure::bernoulli(0.3));
    CHECK(std::abs(s_index_exact(refined(w, 5), ProductMeasure::bernoulli(0.3)).numeric - b.numeric) < 1e-12);
  }
}

TEST_CASE("range bound is attained only on full measure") {
  const WalkSpec minus(0.2, std::sqrt(0.96), {{Cylinder::parse("0"), real_coeff(-0.7)}, {Cylinder::parse("1"), real_coeff(-0.3)}});
  CHECK(*s_index_exact(minus, ProductMeasure::uniform()).exact == DyadicRational::integer(-1));
  const WalkSpec mixed(0.2, std::sqrt(0.96), {{Cylinder::parse("0"), real_coeff(-0.7)}, {Cylinder::parse("1"), real_coeff(0.1)}});
  CHECK(*s_index_exact(mixed, ProductMeasure::uniform()).exact == DyadicRational(-1, 1));
}

TEST_CASE("Monte Carlo: constant walk is exact") {
  const WalkSpec constant(0.0, 1.0, {{Cylinder::parse(""), real_coeff(0.9)}});
  const IndexReport r = s_index_montecarlo(constant, ProductMeasure::uniform(), 1000, 5);
  CHECK(r.numeric == 1.0);
  CHECK(*r.mc_stderr == 0.0);
}

TEST_CASE("Monte Carlo: level-2 example") {
  const IndexReport r = s_index_montecarlo(level2_walk(), ProductMeasure::uniform(), 4000, 11);
  CHECK(std::abs(r.numeric - 0.25) <= 3.0 * *r.mc_stderr);
  std::size_t hits = 0;
  for (const auto& c : r.per_cell) hits += c.hits;
  CHECK(hits == 4000);
}

TEST_CASE("Monte Carlo is deterministic and independent of the worker count") {
  const WalkSpec w = level2_walk();
  const IndexReport one = s_index_montecarlo(w, ProductMeasure::bernoulli(0.4), 3000, 17, 1);
  const IndexReport again = s_index_montecarlo(w, ProductMeasure::bernoulli(0.4), 3000, 17, 1);
  const IndexReport four = s_index_montecarlo(w, ProductMeasure::bernoulli(0.4), 3000, 17, 4);
  CHECK(report_to_json(one) == report_to_json(again));
  CHECK(report_to_json(one) == report_to_json(four));
  const IndexReport other = s_index_montecarlo(w, ProductMeasure::bernoulli(0.4), 3000, 18, 1);
  CHECK(report_to_json(one) != report_to_json(other));
}

TEST_CASE("report JSON") {
  const auto doc = nlohmann::json::parse(report_to_json(s_index_exact(level2_walk(), ProductMeasure::uniform())));
  CHECK(doc["exact"]["num"] == 1);
  CHECK(doc["exact"]["exp"] == 2);
  CHECK(doc["per_cell"].size() == 4);
  CHECK(doc["per_cell"][0]["exact_measure"]["exp"] == 2);
  const auto mc = nlohmann::json::parse(
      report_to_json(s_index_montecarlo(level2_walk(), ProductMeasure::bernoulli(0.3), 100, 1)));
  CHECK(mc["exact"].is_null());
  CHECK(mc.contains("mc_stderr"));
}

TEST_CASE("Falk pairing against a cylinder") {
  CHECK(std::abs(falk_measure_pairing(Cylinder::parse("0"), ProductMeasure::uniform(), 200) - 0.5) < 1e-6);
  CHECK(std::abs(falk_measure_pairing(Cylinder::parse("1"), ProductMeasure::bernoulli(1.0 / 3.0), 200) - 2.0 / 3.0) <
        1e-6);
  CHECK(std::abs(falk_measure_pairing(Cylinder::parse(""), ProductMeasure::uniform(), 200) - 1.0) < 1e-6);
}

}  // TEST_SUITE
