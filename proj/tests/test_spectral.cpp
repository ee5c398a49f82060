// Spectral modules: Z/B witnesses, page differentials, weight sets,
// component detection, symbol-level fiber bases.

#include <catch2/catch_amalgamated.hpp>

#include "carnot/fixtures.hpp"
#include "carnot/spectral.hpp"

using namespace carnot;

namespace {

Mask mk(std::initializer_list<int> idx) {  // 1-based indices
  Mask m = 0;
  for (int i : idx) m |= Mask(1) << (i - 1);
  return m;
}

Poly var(const CheckedGroup& g, int i) {  // 1-based coordinate
  return Poly::variable(g.dim(), i - 1);
}

PolyForm pf(const CheckedGroup& g, Mask m, const Poly& c) {
  return PolyForm::term(g.dim(), m, c);
}

PolyForm pf(const CheckedGroup& g, Mask m, const Rat& c) {
  return PolyForm::term(g.dim(), m, Poly(g.dim(), c));
}

}  // namespace

TEST_CASE("Z_1 membership is ker d0") {
  auto g = heisenberg1();
  HodgeContext ctx(g);
  // weight-1 one-forms: d0 vanishes identically
  auto a = pf(*g, mk({1}), var(*g, 1) * var(*g, 2)) + pf(*g, mk({2}), var(*g, 3));
  auto res = z_solve(ctx, a, 1);
  REQUIRE(std::holds_alternative<ZWitness>(res));
  auto w = std::get<ZWitness>(res);
  CHECK(w.z.empty());
  CHECK(w.p == 1);
  CHECK(zwitness_valid(ctx, w));
  // f tau has d0(f tau) = -f dx^dy != 0
  auto bad = pf(*g, mk({3}), var(*g, 1));
  auto fail = z_solve(ctx, bad, 1);
  REQUIRE(std::holds_alternative<ZFailure>(fail));
  CHECK(std::get<ZFailure>(fail).stage == 0);
  CHECK(std::get<ZFailure>(fail).obstruction ==
        pf(*g, mk({1, 2}), -var(*g, 1)));
}

TEST_CASE("theta4 is not in Z_1 on H1 x R") {
  auto g = h1xr();
  HodgeContext ctx(g);
  auto fail = z_solve(ctx, pf(*g, mk({4}), Rat(1)), 1);
  REQUIRE(std::holds_alternative<ZFailure>(fail));
  CHECK(std::get<ZFailure>(fail).obstruction == pf(*g, mk({1, 2}), Rat(-1)));
}

TEST_CASE("canonical Z_2 witness on H1: f dy gives z = -(Xf) tau") {
  auto g = heisenberg1();
  HodgeContext ctx(g);
  auto f = var(*g, 1) * var(*g, 1) + rat(3) * var(*g, 2);  // x^2 + 3y
  auto a = pf(*g, mk({2}), f);
  auto res = z_solve(ctx, a, 2);
  REQUIRE(std::holds_alternative<ZWitness>(res));
  auto w = std::get<ZWitness>(res);
  REQUIRE(w.z.size() == 1);
  CHECK(w.z[0] == pf(*g, mk({3}), -g->frame_derivative(0, f)));
  CHECK(w.z_at(2) == w.z[0]);
  CHECK(zwitness_valid(ctx, w));
}

TEST_CASE("z_solve honors the polynomial degree budget") {
  auto g = heisenberg1();
  HodgeContext ctx(g);
  auto a = pf(*g, mk({2}), var(*g, 1) * var(*g, 1));  // z = -2x tau, degree 1
  CHECK_NOTHROW(z_solve(ctx, a, 2, 1));
  CHECK_THROWS_AS(z_solve(ctx, a, 2, 0), DegreeBudget);
}

TEST_CASE("Delta_1 is the first weight-raising component of d") {
  auto g = h1xr();
  HodgeContext ctx(g);
  auto f = var(*g, 1) * var(*g, 4);
  PolyForm a(g->dim(), 0);
  a.add(0, f);
  auto res = z_solve(ctx, a, 1);
  REQUIRE(std::holds_alternative<ZWitness>(res));
  auto d1 = delta_r(ctx, std::get<ZWitness>(res));
  CHECK(d1 == d_jump(*g, a, 1));
}

TEST_CASE("Delta_2 on H1 weight-1 one-forms equals d_c") {
  auto g = heisenberg1();
  HodgeContext ctx(g);
  std::vector<Poly> polys = {var(*g, 1) * var(*g, 2), var(*g, 3),
                             var(*g, 2) * var(*g, 2) * var(*g, 3)};
  for (auto& f1 : polys)
    for (auto& f2 : polys) {
      auto a = pf(*g, mk({1}), f1) + pf(*g, mk({2}), f2);
      auto res = z_solve(ctx, a, 2);
      REQUIRE(std::holds_alternative<ZWitness>(res));
      CHECK(delta_r(ctx, std::get<ZWitness>(res)) == ctx.dc(a));
    }
}

TEST_CASE("page composition Delta_2 Delta_1 vanishes on H1 functions") {
  auto g = heisenberg1();
  HodgeContext ctx(g);
  for (auto& f : {var(*g, 1) * var(*g, 2) * var(*g, 3),
                  var(*g, 3) * var(*g, 3), var(*g, 1) * var(*g, 1) * var(*g, 2)}) {
    PolyForm a(g->dim(), 0);
    a.add(0, f);
    auto w0 = std::get<ZWitness>(z_solve(ctx, a, 1));
    auto b = delta_r(ctx, w0);  // weight-1 one-form
    auto w1 = z_solve(ctx, b, 2);
    REQUIRE(std::holds_alternative<ZWitness>(w1));
    CHECK(delta_r(ctx, std::get<ZWitness>(w1)).is_zero());
  }
}

TEST_CASE("B_1 membership is Im d0") {
  auto g = heisenberg1();
  HodgeContext ctx(g);
  auto a = pf(*g, mk({1, 2}), var(*g, 1));  // x dx^dy = d0(-x tau)
  auto res = b_solve(ctx, a, 1);
  REQUIRE(std::holds_alternative<BWitness>(res));
  auto w = std::get<BWitness>(res);
  REQUIRE(w.c.size() == 1);
  CHECK(w.c[0] == pf(*g, mk({3}), -var(*g, 1)));
  CHECK(bwitness_valid(ctx, w));
  // dx is closed under d0 but not exact
  auto fail = b_solve(ctx, pf(*g, mk({1}), Rat(1)), 1);
  REQUIRE(std::holds_alternative<BFailure>(fail));
}

TEST_CASE("zero is in B_r and Z_r for every r") {
  auto g = h1xr();
  HodgeContext ctx(g);
  for (int r = 1; r <= 4; ++r) {
    CHECK(in_b(ctx, PolyForm(g->dim(), 2), r));
    CHECK(in_z(ctx, PolyForm(g->dim(), 2), r));
  }
}

TEST_CASE("B_2 membership on H1 weight-1 one-forms") {
  auto g = heisenberg1();
  HodgeContext ctx(g);
  // (Xh) dx + (Yh) dy is a boundary for any function h
  auto h = var(*g, 1) * var(*g, 2);
  auto b = pf(*g, mk({1}), g->frame_derivative(0, h)) +
           pf(*g, mk({2}), g->frame_derivative(1, h));
  auto res = b_solve(ctx, b, 2);
  REQUIRE(std::holds_alternative<BWitness>(res));
  auto w = std::get<BWitness>(res);
  CHECK(bwitness_valid(ctx, w));
  CHECK(w.c_at(0) == w.c[0]);
  // boundaries are cocycles
  CHECK(in_z(ctx, b, 2));
  // y dx = d1(-t + xy/2), a less obvious boundary
  auto res2 = b_solve(ctx, pf(*g, mk({1}), var(*g, 2)), 2);
  REQUIRE(std::holds_alternative<BWitness>(res2));
  CHECK(bwitness_valid(ctx, std::get<BWitness>(res2)));
  // x^2 dy has d_c != 0, so it cannot be a boundary
  auto bad = pf(*g, mk({2}), var(*g, 1) * var(*g, 1));
  REQUIRE(!ctx.dc(bad).is_zero());
  auto fail = b_solve(ctx, bad, 2);
  REQUIRE(std::holds_alternative<BFailure>(fail));
}

TEST_CASE("d_c images on H1 are boundaries on the third page") {
  auto g = heisenberg1();
  HodgeContext ctx(g);
  std::vector<PolyForm> probes = {
      pf(*g, mk({2}), var(*g, 1) * var(*g, 1)),
      pf(*g, mk({1}), var(*g, 2) * var(*g, 3)) + pf(*g, mk({2}), var(*g, 1)),
  };
  for (auto& a : probes) {
    auto im = ctx.dc(a);
    REQUIRE(!im.is_zero());
    auto res = b_solve(ctx, im, 3);
    REQUIRE(std::holds_alternative<BWitness>(res));
    CHECK(bwitness_valid(ctx, std::get<BWitness>(res)));
    // and they survive as cocycles at the same page
    CHECK(in_z(ctx, im, 3));
  }
}

TEST_CASE("Delta_2 representatives change by boundaries under Z_2 shifts") {
  auto g = h1xr();
  HodgeContext ctx(g);
  auto a = pf(*g, mk({1}), var(*g, 4));  // x4 theta1, in Z_2
  auto b = pf(*g, mk({1}), g->frame_derivative(0, var(*g, 1) * var(*g, 4))) +
           pf(*g, mk({2}), g->frame_derivative(1, var(*g, 1) * var(*g, 4))) +
           pf(*g, mk({3}), g->frame_derivative(2, var(*g, 1) * var(*g, 4)));
  auto wa = z_solve(ctx, a, 2);
  auto wab = z_solve(ctx, a + b, 2);
  REQUIRE(std::holds_alternative<ZWitness>(wa));
  REQUIRE(std::holds_alternative<ZWitness>(wab));
  auto diff = delta_r(ctx, std::get<ZWitness>(wab)) -
              delta_r(ctx, std::get<ZWitness>(wa));
  CHECK(in_b(ctx, diff, 2));
}

TEST_CASE("weight sets on H1") {
  auto g = heisenberg1();
  HodgeContext ctx(g);
  CHECK(weight_set_P(ctx, 0) == std::vector<int>{0});
  CHECK(weight_set_P(ctx, 1) == std::vector<int>{1});
  CHECK(weight_set_P(ctx, 2) == std::vector<int>{3});
  CHECK(weight_set_P(ctx, 3) == std::vector<int>{4});
}

TEST_CASE("weight sets on H1 x R include a split degree") {
  auto g = h1xr();
  HodgeContext ctx(g);
  CHECK(weight_set_P(ctx, 0) == std::vector<int>{0});
  CHECK(weight_set_P(ctx, 1) == std::vector<int>{1});
  CHECK(weight_set_P(ctx, 2) == (std::vector<int>{2, 3}));
  CHECK(weight_set_P(ctx, 3) == std::vector<int>{4});
  CHECK(weight_set_P(ctx, 4) == std::vector<int>{5});
}

TEST_CASE("weight sets are singletons on H1, H2, Cartan") {
  for (auto& name : {std::string("h1"), std::string("h2"),
                     std::string("cartan")}) {
    auto g = fixture_group(name);
    HodgeContext ctx(g);
    for (int k = 0; k <= g->dim(); ++k) {
      INFO(name << " k=" << k);
      CHECK(weight_set_P(ctx, k).size() == 1);
    }
    CHECK(weight_set_P(ctx, 0) == std::vector<int>{0});
    CHECK(weight_set_P(ctx, g->dim()) ==
          std::vector<int>{g->homogeneous_dim()});
  }
}

TEST_CASE("nonzero d_c jump components on H1") {
  auto g = heisenberg1();
  HodgeContext ctx(g);
  CHECK(nonzero_dc_components(ctx, 0, 0).nonzero_jumps == std::vector<int>{1});
  CHECK(nonzero_dc_components(ctx, 1, 1).nonzero_jumps == std::vector<int>{2});
  CHECK(nonzero_dc_components(ctx, 3, 2).nonzero_jumps == std::vector<int>{1});
  CHECK(nonzero_dc_components(ctx, 1, 1).probe_degree == 3);
}

TEST_CASE("d_c mixes jump orders on H1 x R") {
  auto g = h1xr();
  HodgeContext ctx(g);
  CHECK(nonzero_dc_components(ctx, 1, 1).nonzero_jumps ==
        (std::vector<int>{1, 2}));
  CHECK(nonzero_dc_components(ctx, 2, 2).nonzero_jumps == std::vector<int>{2});
  CHECK(nonzero_dc_components(ctx, 3, 2).nonzero_jumps == std::vector<int>{1});
}

TEST_CASE("symbol-level fiber bases") {
  auto g = heisenberg1();
  HodgeContext ctx(g);
  auto e11 = e_jl_symbol_basis(ctx, 1, 1, 1, 1);
  CHECK(e11.dim() == 2);
  CHECK(e11.contains(AlgebraicForm::basis(mk({1}))));
  CHECK(e11.contains(AlgebraicForm::basis(mk({2}))));
  // independent of the page indices
  for (int j = 1; j <= 3; ++j)
    for (int l = 1; l <= 3; ++l)
      CHECK(e_jl_symbol_basis(ctx, 1, 1, j, l).dim() == 2);
  // tau is d0-exact symbol-wise obstruction: fiber (1,2) carries nothing
  CHECK(e_jl_symbol_basis(ctx, 2, 1, 1, 1).dim() == 0);
  // the fiber agrees with the harmonic fiber everywhere
  for (int k = 0; k <= g->dim(); ++k)
    for (int p = 0; p <= g->homogeneous_dim(); ++p) {
      auto s = ctx.hodge_split(k, p);
      auto e = e_jl_symbol_basis(ctx, p, k, 2, 2);
      CHECK(e.dim() == s.ker_box0.dim());
      for (auto& f : e.basis) CHECK(s.ker_box0.contains(f));
    }
  CHECK_THROWS_AS(e_jl_symbol_basis(ctx, 1, 1, 0, 1), InvalidInput);
}

TEST_CASE("linear solver over polynomial forms") {
  auto g = heisenberg1();
  std::vector<PolyForm> basis = {pf(*g, mk({1}), Rat(1)),
                                 pf(*g, mk({1}), var(*g, 2))};
  auto L = [&](const PolyForm& x) { return std::vector<PolyForm>{x}; };
  auto sol = solve_linear_polyform(
      basis, L, {pf(*g, mk({1}), Poly(g->dim(), Rat(2)) + var(*g, 2))});
  REQUIRE(sol);
  CHECK((*sol)[0] == 2);
  CHECK((*sol)[1] == 1);
  // unreachable coordinate
  CHECK(!solve_linear_polyform(basis, L, {pf(*g, mk({2}), Rat(1))}));
}
