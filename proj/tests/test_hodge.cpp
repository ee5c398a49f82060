// Fiberwise Hodge machinery and the Rumin operators.

#include <catch2/catch_amalgamated.hpp>

#include "carnot/fixtures.hpp"
#include "carnot/hodge.hpp"

using namespace carnot;

namespace {
Mask mk(std::initializer_list<int> idx) {
  Mask m = 0;
  for (int i : idx) m |= Mask(1) << (i - 1);
  return m;
}

// Deterministic assorted probe forms of degree k: basis covectors times
// small mixed polynomials.
std::vector<PolyForm> probes(const CheckedGroup& g, int k, int max_deg = 2) {
  std::vector<PolyForm> out;
  int n = g.dim();
  long seed = 1;
  for (Mask m : masks_of_degree(g, k)) {
    Poly f(n, rat(seed % 5 - 2));
    for (int v = 0; v < n; ++v) {
      seed = (seed * 37 + 11) % 101;
      if (seed % 3 == 0) f += rat(seed % 7 - 3, 2) * Poly::variable(n, v);
      if (max_deg >= 2 && seed % 4 == 1)
        f += rat(1, 3) * Poly::variable(n, v) * Poly::variable(n, (v + 1) % n);
    }
    out.push_back(PolyForm::term(n, m, f));
  }
  return out;
}

// Probe forms with fiberwise-E0 coefficients.
std::vector<PolyForm> rumin_probes(const HodgeContext& ctx, int k,
                                   int max_deg = 2) {
  std::vector<PolyForm> out;
  const auto& g = ctx.group();
  int n = g.dim();
  for (auto& [p, sub] : ctx.rumin_basis(k)) {
    int v = 0;
    for (auto& beta : sub.basis) {
      PolyForm base = PolyForm::from_algebraic(n, beta);
      out.push_back(base);
      Poly f = Poly::variable(n, v % n) +
               rat(1, 2) * Poly::variable(n, (v + 1) % n);
      if (max_deg >= 2)
        f += Poly::variable(n, (v + 2) % n) * Poly::variable(n, v % n);
      out.push_back(f * base);
      ++v;
    }
  }
  return out;
}
}  // namespace

TEST_CASE("d0_inverse on H1: pseudo-inverse of the fiber block") {
  HodgeContext ctx(heisenberg1());
  auto dxdy = PolyForm::from_algebraic(3, AlgebraicForm::basis(mk({1, 2})));
  auto tau = PolyForm::from_algebraic(3, AlgebraicForm::basis(mk({3})));
  CHECK(ctx.d0_inverse(dxdy) == -tau);  // consistent with d0 tau = -dx^dy
  CHECK(d0(ctx.group(), -tau) == dxdy);
  CHECK(ctx.pi0(tau).is_zero());  // tau spans Im delta0 in degree 1
  // Pi0 is the identity on ker Box_0
  auto dx = PolyForm::from_algebraic(3, AlgebraicForm::basis(mk({1})));
  CHECK(ctx.pi0(dx) == dx);
}

TEST_CASE("operator identities of the fiber calculus") {
  for (auto& g : all_fixture_groups()) {
    HodgeContext ctx(g);
    for (int k = 0; k <= g->dim(); ++k) {
      for (auto& f : probes(*g, k, 1)) {
        auto a = ctx.d0_inverse(f);
        CHECK(ctx.d0_inverse(a).is_zero());        // (d0^{-1})^2 = 0
        CHECK(d0(*g, a) == ctx.pr_im_d0(f));       // d0 d0^{-1} = pr_{Im d0}
        CHECK(ctx.d0_inverse(d0(*g, f)) == ctx.pr_im_delta0(f));
        CHECK(ctx.pi0(ctx.pi0(f)) == ctx.pi0(f));  // projector
        CHECK(ctx.pi0(f) + ctx.pr_im_d0(f) + ctx.pr_im_delta0(f) == f);
        // Box_0 = d0 delta0 + delta0 d0 kills exactly ker Box_0
        auto box = ctx.delta0(d0(*g, f)) + d0(*g, ctx.delta0(f));
        if (ctx.pi0(f) == f) {
          CHECK(box.is_zero());
        }
      }
    }
  }
}

TEST_CASE("delta0 is the adjoint of d0") {
  auto g = h1xr();
  HodgeContext ctx(g);
  for (Mask a : masks_of_degree(*g, 1))
    for (Mask b : masks_of_degree(*g, 2)) {
      auto fa = AlgebraicForm::basis(a);
      auto fb = AlgebraicForm::basis(b);
      auto da = d0(*g, PolyForm::from_algebraic(4, fa)).at(
          {Rat(0), Rat(0), Rat(0), Rat(0)});
      CHECK(inner_product(da, fb) == inner_product(fa, ctx.delta0(fb)));
    }
}

TEST_CASE("Hodge split tables match the known fiber lists") {
  SECTION("H1, degree 1") {
    HodgeContext ctx(heisenberg1());
    auto s1 = ctx.hodge_split(1, 1);
    CHECK(s1.ker_box0.dim() == 2);
    CHECK(s1.im_d0.dim() == 0);
    CHECK(s1.im_delta0.dim() == 0);
    CHECK(s1.ker_box0.contains(AlgebraicForm::basis(mk({1}))));
    CHECK(s1.ker_box0.contains(AlgebraicForm::basis(mk({2}))));
    auto s2 = ctx.hodge_split(1, 2);
    CHECK(s2.im_delta0.dim() == 1);
    CHECK(s2.ker_box0.dim() == 0);
    CHECK(s2.im_delta0.contains(AlgebraicForm::basis(mk({3}))));
    auto rb = ctx.rumin_basis(1);
    REQUIRE(rb.size() == 1);
    CHECK(rb[0].first == 1);
    CHECK(rb[0].second.dim() == 2);
  }
  SECTION("H1 x R, degree 2") {
    HodgeContext ctx(h1xr());
    auto s2 = ctx.hodge_split(2, 2);
    CHECK(s2.im_d0.dim() == 1);
    CHECK(s2.im_d0.contains(AlgebraicForm::basis(mk({1, 2}))));
    CHECK(s2.ker_box0.dim() == 2);
    CHECK(s2.ker_box0.contains(AlgebraicForm::basis(mk({1, 3}))));
    CHECK(s2.ker_box0.contains(AlgebraicForm::basis(mk({2, 3}))));
    auto s3 = ctx.hodge_split(2, 3);
    CHECK(s3.im_delta0.dim() == 1);
    CHECK(s3.im_delta0.contains(AlgebraicForm::basis(mk({3, 4}))));
    CHECK(s3.ker_box0.dim() == 2);
    CHECK(s3.ker_box0.contains(AlgebraicForm::basis(mk({1, 4}))));
    CHECK(s3.ker_box0.contains(AlgebraicForm::basis(mk({2, 4}))));
  }
  SECTION("H2, degree 2: five Rumin covectors") {
    HodgeContext ctx(heisenberg2());
    int total = 0;
    for (auto& [p, sub] : ctx.rumin_basis(2)) total += sub.dim();
    CHECK(total == 5);
  }
  SECTION("dimensions always sum to the fiber dimension") {
    for (auto& g : all_fixture_groups()) {
      HodgeContext ctx(g);
      for (int k = 0; k <= g->dim(); ++k)
        for (int p : ctx.fiber_weights(k)) {
          auto s = ctx.hodge_split(k, p);
          int fiber = static_cast<int>(masks_of_degree_weight(*g, k, p).size());
          CHECK(s.im_d0.dim() + s.ker_box0.dim() + s.im_delta0.dim() == fiber);
          // pairwise orthogonality of the three pieces
          for (auto& a : s.im_d0.basis)
            for (auto& b : s.ker_box0.basis) CHECK(inner_product(a, b) == 0);
          for (auto& a : s.im_d0.basis)
            for (auto& b : s.im_delta0.basis) CHECK(inner_product(a, b) == 0);
          for (auto& a : s.ker_box0.basis)
            for (auto& b : s.im_delta0.basis) CHECK(inner_product(a, b) == 0);
        }
    }
  }
}

TEST_CASE("Pi_E examples") {
  SECTION("H1 first-order correction") {
    auto g = heisenberg1();
    HodgeContext ctx(g);
    Poly x = Poly::variable(3, 0), y = Poly::variable(3, 1),
         t = Poly::variable(3, 2);
    Poly f1 = x * t + y, f2 = y * y - t;
    PolyForm alpha(3, 1);
    alpha.add(mk({1}), f1);
    alpha.add(mk({2}), f2);
    PolyForm want = alpha;
    want = PolyForm(3, 1);
    want.add(mk({1}), f1);
    want.add(mk({2}), f2);
    want.add(mk({3}),
             g->frame_derivative(0, f2) - g->frame_derivative(1, f1));
    CHECK(ctx.pi_e(alpha) == want);
  }
  SECTION("maximal weight and constant coefficients are fixed") {
    auto g = heisenberg1();
    HodgeContext ctx(g);
    // max-weight Rumin 2-form f dx^tau
    PolyForm a = Poly::variable(3, 2) *
                 PolyForm::from_algebraic(3, AlgebraicForm::basis(mk({1, 3})));
    CHECK(ctx.pi_e(a) == a);
    for (auto& gg : all_fixture_groups()) {
      HodgeContext c2(gg);
      for (int k = 0; k <= gg->dim(); ++k)
        for (auto& [p, sub] : c2.rumin_basis(k))
          for (auto& beta : sub.basis) {
            auto cst = PolyForm::from_algebraic(gg->dim(), beta);
            CHECK(c2.pi_e(cst) == cst);
          }
    }
  }
}

TEST_CASE("projection laws of Pi_E") {
  for (auto& g : all_fixture_groups()) {
    HodgeContext ctx(g);
    int kmax = std::min(3, g->dim());
    for (int k = 0; k <= kmax; ++k) {
      for (auto& f : probes(*g, k, 1)) {
        auto pe = ctx.pi_e(f);
        CHECK(ctx.d0_inverse(pe).is_zero());            // d0^{-1} Pi_E = 0
        CHECK(ctx.pi_e(ctx.d0_inverse(f)).is_zero());   // Pi_E d0^{-1} = 0
        CHECK(d(*g, pe) == ctx.pi_e(d(*g, f)));         // d Pi_E = Pi_E d
        CHECK(ctx.pi0(ctx.pi_e(ctx.pi0(f))) == ctx.pi0(f));
        CHECK(ctx.pi_e(ctx.pi0(pe)) == pe);
      }
    }
  }
}

TEST_CASE("partial operators") {
  auto g = h1xr();
  HodgeContext ctx(g);
  for (int k = 0; k <= 2; ++k) {
    for (auto& f : probes(*g, k)) {
      CHECK(ctx.partial_r(f, 1) == d_jump(*g, f, 1));  // partial_1 = d_1
      // partial_2 = d_2 - d_1 d0^{-1} d_1
      auto p2 = d_jump(*g, f, 2) -
                d_jump(*g, ctx.d0_inverse(d_jump(*g, f, 1)), 1);
      CHECK(ctx.partial_r(f, 2) == p2);
    }
  }
}

TEST_CASE("d_c on H1 matches the explicit second-order formula") {
  auto g = heisenberg1();
  HodgeContext ctx(g);
  auto X = [&](const Poly& f) { return g->frame_derivative(0, f); };
  auto Y = [&](const Poly& f) { return g->frame_derivative(1, f); };
  auto T = [&](const Poly& f) { return g->frame_derivative(2, f); };
  // all monomials up to total degree 3 as f1, f2 (linearity covers the rest)
  for (auto& e : monomials_up_to(3, 3)) {
    Poly f = Poly::monomial(3, e, Rat(1));
    for (int slot = 0; slot < 2; ++slot) {
      Poly f1 = slot == 0 ? f : Poly(3);
      Poly f2 = slot == 0 ? Poly(3) : f;
      PolyForm alpha(3, 1);
      alpha.add(mk({1}), f1);
      alpha.add(mk({2}), f2);
      Poly curl = X(f2) - Y(f1);
      PolyForm want(3, 2);
      want.add(mk({1, 3}), X(curl) - T(f1));
      want.add(mk({2, 3}), Y(curl) - T(f2));
      CHECK(ctx.dc(alpha) == want);
    }
  }
}

TEST_CASE("d_c structural identities") {
  for (auto& g : all_fixture_groups()) {
    HodgeContext ctx(g);
    for (int k = 0; k + 1 <= g->dim(); ++k) {
      for (auto& f : rumin_probes(ctx, k)) {
        auto dcf = ctx.dc(f);
        CHECK(ctx.is_rumin(dcf));
        CHECK(ctx.dc(dcf).is_zero());        // dc o dc = 0
        CHECK(ctx.dc_via_pi(f) == dcf);      // dc = Pi0 d Pi_E
        // dc = sum_r dc_r
        PolyForm acc(f.nvars(), f.degree() + 1);
        for (int r = 1; r <= g->homogeneous_dim(); ++r)
          acc += ctx.dc_r(f, r);
        CHECK(acc == dcf);
      }
    }
  }
}

TEST_CASE("d_c of a constant Rumin form vanishes on H1 degree 1") {
  HodgeContext ctx(heisenberg1());
  auto cdx = PolyForm::from_algebraic(3, AlgebraicForm::basis(mk({1})));
  CHECK(ctx.dc(cdx).is_zero());
}

TEST_CASE("dc rejects non-Rumin input") {
  HodgeContext ctx(heisenberg1());
  auto tau = PolyForm::from_algebraic(3, AlgebraicForm::basis(mk({3})));
  CHECK_THROWS_AS(ctx.dc(tau), NotRuminForm);
  CHECK_THROWS_AS(ctx.dc_r(tau, 1), NotRuminForm);
}

TEST_CASE("d0-partial identity") {
  auto g = h1xr();
  HodgeContext ctx(g);
  for (int k = 0; k <= 2; ++k) {
    for (auto& f : probes(*g, k)) {
      PolyForm kd = f - ctx.d0_inverse(d0(*g, f));  // strip Im delta0 part
      kd = kd - ctx.pr_im_d0(kd);
      // now kd is in ker d0 fiberwise
      if (!d0(*g, kd).is_zero()) continue;
      CHECK(ctx.d0_partial_identity_check(kd, 1).is_zero());
      CHECK(ctx.d0_partial_identity_check(kd, 2).is_zero());
      CHECK(ctx.d0_partial_identity_check(kd, 3).is_zero());
    }
  }
  auto tau4 = PolyForm::from_algebraic(4, AlgebraicForm::basis(mk({4})));
  CHECK_THROWS_AS(ctx.d0_partial_identity_check(tau4, 2),
                  PreconditionViolated);
}

TEST_CASE("Leibniz residual lies in Im delta0") {
  SECTION("H1 x R explicit correction term") {
    auto g = h1xr();
    HodgeContext ctx(g);
    Poly x1 = Poly::variable(4, 0), x2 = Poly::variable(4, 1),
         x3 = Poly::variable(4, 2), x4 = Poly::variable(4, 3);
    Poly f1 = x2 * x3, f2 = x1 * x1, f3 = x4 + x1 * x2;
    PolyForm alpha(4, 1);
    alpha.add(mk({1}), f1);
    alpha.add(mk({2}), f2);
    alpha.add(mk({3}), f3);
    REQUIRE(ctx.is_rumin(alpha));
    CHECK(ctx.leibniz_identity_check(alpha).is_zero());
    auto diff = d(*g, ctx.pi_e(alpha)) - ctx.dc(alpha);
    auto X = [&](int i, const Poly& f) { return g->frame_derivative(i, f); };
    PolyForm want(4, 2);
    want.add(mk({3, 4}), X(2, X(0, f2) - X(1, f1)) - X(3, f3));
    CHECK(diff == want);
  }
  SECTION("residual vanishes on all fixtures' Rumin probes") {
    for (auto& g : all_fixture_groups()) {
      HodgeContext ctx(g);
      for (int k = 0; k + 1 <= g->dim(); ++k)
        for (auto& f : rumin_probes(ctx, k))
          CHECK(ctx.leibniz_identity_check(f).is_zero());
    }
  }
  SECTION("on H1 in top Rumin degrees, dc equals d Pi_E") {
    auto g = heisenberg1();
    HodgeContext ctx(g);
    for (auto& f : rumin_probes(ctx, 2))
      CHECK(d(*g, ctx.pi_e(f)) == ctx.dc(f));
  }
}

TEST_CASE("first nonzero weight jump of d Pi_E is in ker Box_0") {
  for (auto& g : all_fixture_groups()) {
    HodgeContext ctx(g);
    for (int k = 0; k + 1 <= g->dim(); ++k) {
      for (auto& f : rumin_probes(ctx, k, 1)) {
        auto df = d(*g, ctx.pi_e(f));
        if (df.is_zero()) continue;
        auto parts = weight_split(*g, df);
        auto& first = parts.begin()->second;
        CHECK(ctx.pi0(first) == first);
      }
    }
  }
}
