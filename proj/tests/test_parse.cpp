// Text front-ends: literal parsers with positioned errors, group spec JSON
// round-trips, and chain spec JSON including box reparametrization.

#include <catch2/catch_amalgamated.hpp>

#include "carnot/parse.hpp"
#include "carnot/stokes.hpp"

using namespace carnot;
using Catch::Matchers::ContainsSubstring;
using nlohmann::json;

namespace {

Mask mk(std::initializer_list<int> idx) {  // 1-based indices
  Mask m = 0;
  for (int i : idx) m |= Mask(1) << (i - 1);
  return m;
}

}  // namespace

TEST_CASE("form literals parse and round-trip") {
  auto xi = parse_form("3/2 t1^t3 - t2^t4");
  CHECK(xi.degree() == 2);
  CHECK(xi.coeff(mk({1, 3})) == rat(3, 2));
  CHECK(xi.coeff(mk({2, 4})) == -1);
  CHECK(parse_form(xi.str()) == xi);

  CHECK(parse_form("t1") == AlgebraicForm::basis(mk({1})));
  CHECK(parse_form("-2 t1^t2^t5") == -2 * AlgebraicForm::basis(mk({1, 2, 5})));
  CHECK(parse_form("0").is_zero());
}

TEST_CASE("polyform literal semantics") {
  auto f = parse_polyform(4, "x4 t3 + 1/2 x1*x2 t4");
  CHECK(f.degree() == 1);
  CHECK(f.coeff(mk({3})) == Poly::variable(4, 3));
  CHECK(f.coeff(mk({4})) ==
        rat(1, 2) * (Poly::variable(4, 0) * Poly::variable(4, 1)));
  CHECK(parse_polyform(4, f.str()) == f);

  auto g2 = parse_polyform(3, "(x1 + x2^2) t1 - 3 t2");
  CHECK(g2.coeff(mk({1})) ==
        Poly::variable(3, 0) + Poly::variable(3, 1) * Poly::variable(3, 1));
  CHECK(g2.coeff(mk({2})) == Poly(3, Rat(-3)));
  CHECK(parse_polyform(3, g2.str()) == g2);

  // negative single-term coefficients print as "+ -c ..." and must re-parse
  auto h = parse_polyform(3, "-1 t1^t3 + -3/2 t2^t3");
  CHECK(h.coeff(mk({1, 3})) == Poly(3, Rat(-1)));
  CHECK(h.coeff(mk({2, 3})) == Poly(3, rat(-3, 2)));
  CHECK(parse_polyform(3, h.str()) == h);

  // a 0-form is a bare polynomial
  auto p = parse_polyform(2, "x1^3 - 1/3 x1*x2 + 2");
  CHECK(p.degree() == 0);
  CHECK(parse_polyform(2, p.str()) == p);
}

TEST_CASE("round-trip on generated probe forms") {
  auto g = h1xr();
  int checked = 0;
  for (Mask m : masks_of_degree(*g, 2))
    for (auto& e : monomials_up_to(g->dim(), 2)) {
      PolyForm f(g->dim(), 2);
      f.add(m, Poly::monomial(g->dim(), e, rat(-7, 3)));
      CHECK(parse_polyform(g->dim(), f.str()) == f);
      ++checked;
    }
  CHECK(checked > 20);
}

TEST_CASE("polynomial literals accept x and w names") {
  auto p = parse_poly(2, "w1^2 - 1/3 w1*w2");
  auto q = parse_poly(2, "x1^2 - 1/3 x1 x2");  // whitespace multiplies
  CHECK(p == q);
  CHECK(p.eval({Rat(3), Rat(6)}) == 3);
}

TEST_CASE("parse errors carry line and column positions") {
  CHECK_THROWS_MATCHES(parse_polyform(3, "x1 +"), ParseError,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("line 1, column 5")));
  CHECK_THROWS_MATCHES(parse_polyform(3, "t1 + t1^t2"), ParseError,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("mixed form degree")));
  CHECK_THROWS_MATCHES(parse_polyform(3, "t1^t1"), ParseError,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("repeated covector")));
  CHECK_THROWS_MATCHES(parse_polyform(3, "x9 t1"), ParseError,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("out of range")));
  CHECK_THROWS_MATCHES(parse_poly(3, "t1"), ParseError,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("not allowed")));
  CHECK_THROWS_MATCHES(parse_form("x1 t1"), ParseError,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("not allowed")));
  CHECK_THROWS_MATCHES(parse_polyform(3, "1/0 t1"), ParseError,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("zero denominator")));
  CHECK_THROWS_MATCHES(parse_polyform(3, "(x1"), ParseError,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("unterminated")));
  // second line, for multi-line configs
  CHECK_THROWS_MATCHES(parse_polyform(3, "x1 t1 +\n y2 t1"), ParseError,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("line 2")));
}

TEST_CASE("group spec JSON round-trips bit-exactly") {
  for (auto& g : all_fixture_groups()) {
    auto j = group_spec_to_json(g->spec());
    auto spec = group_spec_from_json(j);
    CHECK(spec.name == g->spec().name);
    CHECK(spec.dim == g->spec().dim);
    CHECK(spec.weights == g->spec().weights);
    REQUIRE(spec.brackets.size() == g->spec().brackets.size());
    for (auto& [ij, terms] : g->spec().brackets) {
      auto it = spec.brackets.find(ij);
      REQUIRE(it != spec.brackets.end());
      REQUIRE(it->second.size() == terms.size());
      for (size_t t = 0; t < terms.size(); ++t) {
        CHECK(it->second[t].k == terms[t].k);
        CHECK(it->second[t].c == terms[t].c);
      }
    }
    // the serialized spec validates to the same group
    CHECK(CheckedGroup::validate(spec)->homogeneous_dim() ==
          g->homogeneous_dim());
  }

  // non-integer structure constant survives the string encoding exactly
  json j = {{"dim", 3},
            {"weights", {1, 1, 2}},
            {"brackets",
             {{{"i", 1},
               {"j", 2},
               {"terms", {{{"k", 3}, {"c", "1/2"}}}}}}}};
  auto spec = group_spec_from_json(j);
  CHECK(spec.brackets.at({0, 1})[0].c == rat(1, 2));
  auto back = group_spec_to_json(spec);
  CHECK(group_spec_from_json(back).brackets.at({0, 1})[0].c == rat(1, 2));
  CHECK(CheckedGroup::validate(spec)->step() == 2);

  CHECK_THROWS_AS(group_spec_from_json(json{{"dim", 3}}), ParseError);
  CHECK_THROWS_AS(rat_from_json(json("1/x")), ParseError);
}

TEST_CASE("chain spec JSON reproduces the counterexample graph") {
  auto g = h1xr();
  json j = {{"charts",
             {{{"pair", {{"rumin", "t1^t4"}}},
               {"phi", {"0", "w1"}}}}}};
  auto chain = chain_from_json(*g, j);
  CHECK(chain.dim == 2);
  CHECK(degree(*g, chain) == 3);
  // the correction-term density integrates to exactly 1 over the unit box
  auto omega = parse_polyform(g->dim(), "t3^t4");
  CHECK(integrate(*g, chain, omega) == 1);

  // bit-identical to the built-in fixture on a probe set
  auto fx = stokes_fixtures();
  for (auto& f : fx)
    if (f.name == "h1xr_remark_graph")
      for (Mask m : masks_of_degree(*g, 2)) {
        PolyForm probe(g->dim(), 2);
        probe.add(m, Poly::variable(g->dim(), 0) + Poly(g->dim(), Rat(1)));
        CHECK(integrate(*g, chain, probe) == integrate(*g, f.chain, probe));
      }
}

TEST_CASE("chain spec box intervals reparametrize affinely") {
  auto g = heisenberg1();
  json j = {{"charts",
             {{{"pair", {{"w", {{1, 0, 0}}}}},
               {"box", {{0, "2"}}}}}}};
  auto chain = chain_from_json(*g, j);
  CHECK(chain.dim == 1);
  // the x-axis segment [0,2]: integral of dx is the length
  CHECK(integrate(*g, chain, parse_polyform(3, "t1")) == 2);
  CHECK(integrate(*g, chain, parse_polyform(3, "x1 t1")) == 2);

  // orientation and coefficients compose
  json j2 = {{"charts",
              {{{"pair", {{"w", {{1, 0, 0}}}}},
                {"box", json::array({json::array({"1/2", "1"})})},
                {"coeff", "-2"},
                {"sign", -1}}}}};
  auto chain2 = chain_from_json(*g, j2);
  CHECK(integrate(*g, chain2, parse_polyform(3, "t1")) == 1);

  CHECK_THROWS_AS(
      chain_from_json(
          *g, json{{"charts",
                    {{{"pair", {{"w", {{1, 0, 0}}}}},
                      {"box", json::array({json::array({"1", "1"})})}}}}}),
      ParseError);
  CHECK_THROWS_AS(chain_from_json(*g, json::object()), ParseError);
  CHECK_THROWS_AS(chain_from_json(*g, json{{"charts",
                                            {{{"pair", json::object()}}}}}),
                  ParseError);
}
