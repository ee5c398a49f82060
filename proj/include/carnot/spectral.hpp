#pragma once

// Spectral modules of the weight-filtered de Rham multicomplex: cocycle
// witnesses (Z_r), boundary witnesses (B_r), the page differentials Delta_r
// with explicit representatives, weight sets P_k, nonzero d_c component
// detection, and constant-coefficient E_{j,l} fiber bases.

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "carnot/hodge.hpp"

namespace carnot {

struct ZMembershipFailed : Error {
  using Error::Error;
};

// alpha homogeneous of weight p with witnesses z[p+1..p+r-1] satisfying
// d0 alpha = 0 and d_n alpha = sum_{i=0}^{n-1} d_i z_{p+n-i}.
struct ZWitness {
  PolyForm alpha;
  int p = 0;
  int r = 1;
  std::vector<PolyForm> z;  // z[i] has weight p+1+i

  const PolyForm& z_at(int weight) const { return z.at(weight - p - 1); }
};

// target = sum_{k=0}^{r-1} d_k c_{p-k} with the homogeneous relations
// 0 = sum_{k=l}^{r-1} d_{k-l} c_{p-k} for 1 <= l <= r-1.
struct BWitness {
  PolyForm target;
  int p = 0;
  int r = 1;
  std::vector<PolyForm> c;  // c[i] has weight p-r+1+i

  const PolyForm& c_at(int weight) const { return c.at(weight - p + r - 1); }
};

// Certificate of z_solve failure: the fiberwise obstruction (component of the
// forced residual outside Im d0) at the first bad stage.
struct ZFailure {
  int stage = 0;  // weight jump n at which the obstruction appeared
  PolyForm obstruction;
};

struct BFailure {
  std::string reason;
};

inline bool zwitness_valid(const HodgeContext& ctx, const ZWitness& w) {
  const auto& g = ctx.group();
  if (!d0(g, w.alpha).is_zero()) return false;
  for (int n = 1; n <= w.r - 1; ++n) {
    PolyForm lhs = d_jump(g, w.alpha, n);
    PolyForm rhs(w.alpha.nvars(), w.alpha.degree() + 1);
    for (int i = 0; i <= n - 1; ++i)
      rhs += d_component(g, w.z.at(n - i - 1), i);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

inline bool bwitness_valid(const HodgeContext& ctx, const BWitness& w) {
  const auto& g = ctx.group();
  PolyForm sum(w.target.nvars(), w.target.degree());
  for (int k = 0; k <= w.r - 1; ++k)
    sum += d_component(g, w.c.at(w.r - 1 - k), k);
  if (!(sum == w.target)) return false;
  for (int l = 1; l <= w.r - 1; ++l) {
    PolyForm rel(w.target.nvars(), w.target.degree());
    for (int k = l; k <= w.r - 1; ++k)
      rel += d_component(g, w.c.at(w.r - 1 - k), k - l);
    if (!rel.is_zero()) return false;
  }
  return true;
}

// Canonical-witness membership test for Z_r: witnesses are forced stage by
// stage (Im delta0 parts via d0^{-1}, ker d0 parts zero).  A nonzero
// obstruction outside Im d0 certifies failure for the canonical choice.
inline std::variant<ZWitness, ZFailure> z_solve(const HodgeContext& ctx,
                                                const PolyForm& alpha, int r,
                                                int degree_budget = -1) {
  const auto& g = ctx.group();
  ZWitness w;
  w.alpha = alpha;
  w.r = r;
  w.p = alpha.is_zero() ? 0 : form_weight(g, alpha);
  if (degree_budget < 0)
    degree_budget = std::max(alpha.max_poly_degree(), 0) +
                    g.step() * (g.homogeneous_dim() - w.p + 1) + 4;
  PolyForm d0a = d0(g, alpha);
  if (!d0a.is_zero()) return ZFailure{0, d0a};
  for (int n = 1; n <= r - 1; ++n) {
    PolyForm residual = d_jump(g, alpha, n);
    for (int i = 1; i <= n - 1; ++i)
      residual -= d_component(g, w.z.at(n - i - 1), i);
    PolyForm obstruction = residual - ctx.pr_im_d0(residual);
    if (!obstruction.is_zero()) return ZFailure{n, obstruction};
    PolyForm zn = ctx.d0_inverse(residual);
    if (zn.max_poly_degree() > degree_budget)
      throw DegreeBudget("z_solve witness exceeds polynomial degree budget");
    w.z.push_back(std::move(zn));
  }
  return w;
}

inline bool in_z(const HodgeContext& ctx, const PolyForm& alpha, int r) {
  return std::holds_alternative<ZWitness>(z_solve(ctx, alpha, r));
}

// Representative of Delta_r on a Z_r witness: the weight-(p+r) component of
// d(alpha - z_{p+1} - ... - z_{p+r-1}).
inline PolyForm delta_r(const HodgeContext& ctx, const ZWitness& w) {
  const auto& g = ctx.group();
  PolyForm y = w.alpha;
  for (auto& z : w.z) y -= z;
  return weight_component(g, d(g, y), w.p + w.r);
}

// Exact linear solve for a rational combination of `basis` mapped through the
// linear operator L (which may emit several stacked constraint forms) to hit
// `target`.  Returns coefficients or nullopt when inconsistent.
inline std::optional<std::vector<Rat>> solve_linear_polyform(
    const std::vector<PolyForm>& basis,
    const std::function<std::vector<PolyForm>(const PolyForm&)>& L,
    const std::vector<PolyForm>& target) {
  // Row space: (slot, mask, exponent) coordinates discovered on the fly.
  std::map<std::tuple<size_t, Mask, Poly::Expo>, int> row_of;
  std::vector<std::vector<Rat>> cols;
  auto coords = [&](const std::vector<PolyForm>& forms,
                    std::vector<std::pair<int, Rat>>& out, bool grow) {
    for (size_t s = 0; s < forms.size(); ++s)
      for (auto& [m, poly] : forms[s].coef())
        for (auto& [e, cc] : poly.terms()) {
          auto key = std::make_tuple(s, m, e);
          auto it = row_of.find(key);
          if (it == row_of.end()) {
            if (!grow) {
              // target hits a coordinate no basis image can reach
              out.clear();
              out.push_back({-1, Rat(0)});
              return;
            }
            it = row_of.emplace(key, static_cast<int>(row_of.size())).first;
          }
          out.push_back({it->second, cc});
        }
  };
  std::vector<std::vector<std::pair<int, Rat>>> images;
  for (auto& b : basis) {
    std::vector<std::pair<int, Rat>> img;
    coords(L(b), img, true);
    images.push_back(std::move(img));
  }
  std::vector<std::pair<int, Rat>> tgt;
  coords(target, tgt, false);
  for (auto& [row, c] : tgt)
    if (row < 0) return std::nullopt;
  int rows = static_cast<int>(row_of.size());
  RatMat m(rows, static_cast<int>(basis.size()));
  for (size_t j = 0; j < images.size(); ++j)
    for (auto& [row, c] : images[j]) m(row, static_cast<int>(j)) = c;
  std::vector<Rat> b(rows, Rat(0));
  for (auto& [row, c] : tgt) b[row] += c;
  return solve(m, b);
}

// Membership search for B_r via the characterization
// B_r = d Z_{r-1}^{p-r+1} + Im d0: find x in ker d0 at weight p-r+1 (with
// canonical Z-witnesses, obstructions imposed as linear constraints) whose
// reconstructed weight-p boundary matches alpha modulo Im d0.
inline std::variant<BWitness, BFailure> b_solve(const HodgeContext& ctx,
                                                const PolyForm& alpha, int r,
                                                int monomial_budget = -1) {
  const auto& g = ctx.group();
  int p = alpha.is_zero() ? 0 : form_weight(g, alpha);
  int k = alpha.degree();
  BWitness w;
  w.target = alpha;
  w.p = p;
  w.r = r;
  if (alpha.is_zero()) {
    w.c.assign(r, PolyForm(alpha.nvars(), k - 1));
    return w;
  }
  if (r == 1) {
    PolyForm c = ctx.d0_inverse(alpha);
    if (!(d0(g, c) == alpha))
      return BFailure{"target is not in Im d0"};
    w.c = {c};
    return w;
  }
  if (k == 0) return BFailure{"no boundaries in degree 0"};
  if (monomial_budget < 0)
    monomial_budget = std::max(alpha.max_poly_degree(), 0) + g.step();

  // Unknown space: ker d0 fiber basis at (k-1, p-r+1) times monomials.
  int p0 = p - r + 1;
  auto split = ctx.hodge_split(k - 1, p0);
  std::vector<AlgebraicForm> fiber;
  for (auto& f : split.im_d0.basis) fiber.push_back(f);
  for (auto& f : split.ker_box0.basis) fiber.push_back(f);
  std::vector<PolyForm> basis;
  for (auto& f : fiber)
    for (auto& e : monomials_up_to(g.dim(), monomial_budget))
      basis.push_back(Poly::monomial(g.dim(), e, Rat(1)) *
                      PolyForm::from_algebraic(g.dim(), f));
  if (basis.empty()) {
    // only the Im d0 freedom remains
    PolyForm c = ctx.d0_inverse(alpha);
    if (!(d0(g, c) == alpha)) return BFailure{"empty witness space"};
    w.c.assign(r, PolyForm(g.dim(), k - 1));
    w.c.back() = c;
    return w;
  }

  // Linear images: stacked [obstruction_1 .. obstruction_{r-2},
  // non-Im-d0 part of the weight-p boundary value].
  auto canonical = [&](const PolyForm& x) {
    // stagewise canonical witnesses for x at weight p0
    std::vector<PolyForm> zs, obstructions;
    for (int n = 1; n <= r - 2; ++n) {
      PolyForm residual = d_jump(g, x, n);
      for (int i = 1; i <= n - 1; ++i)
        residual -= d_component(g, zs[n - i - 1], i);
      obstructions.push_back(residual - ctx.pr_im_d0(residual));
      zs.push_back(ctx.d0_inverse(residual));
    }
    PolyForm y = x;
    for (auto& z : zs) y -= z;
    PolyForm value = weight_component(g, d(g, y), p);
    return std::make_tuple(zs, obstructions, value);
  };
  auto L = [&](const PolyForm& x) {
    auto [zs, obstructions, value] = canonical(x);
    std::vector<PolyForm> out = obstructions;
    out.push_back(value - ctx.pr_im_d0(value));
    return out;
  };
  std::vector<PolyForm> target(r - 2, PolyForm(g.dim(), k));
  target.push_back(alpha - ctx.pr_im_d0(alpha));
  auto sol = solve_linear_polyform(basis, L, target);
  if (!sol) return BFailure{"no witness within monomial degree budget"};

  PolyForm x(g.dim(), k - 1);
  for (size_t i = 0; i < basis.size(); ++i)
    if ((*sol)[i] != 0) x += (*sol)[i] * basis[i];
  auto [zs, obstructions, value] = canonical(x);
  w.c.assign(r, PolyForm(g.dim(), k - 1));
  w.c[0] = x;                                  // weight p-r+1
  for (int n = 1; n <= r - 2; ++n) w.c[n] = -zs[n - 1];
  w.c[r - 1] = ctx.d0_inverse(alpha - value);  // Im d0 correction at weight p
  if (!bwitness_valid(ctx, w))
    return BFailure{"internal: reconstructed witness failed verification"};
  return w;
}

inline bool in_b(const HodgeContext& ctx, const PolyForm& alpha, int r) {
  return std::holds_alternative<BWitness>(b_solve(ctx, alpha, r));
}

// Weights of nontrivial Rumin covector fibers in degree k.
inline std::vector<int> weight_set_P(const HodgeContext& ctx, int k) {
  std::vector<int> out;
  for (auto& [p, sub] : ctx.rumin_basis(k)) out.push_back(p);
  return out;
}

// Jumps r with d_c^r not identically zero on E0 forms of weight p, degree k,
// decided by monomial probing up to the stated coefficient degree.  Sound for
// "nonzero", heuristic for "zero" (the probing bound is reported).
struct DcComponentReport {
  std::vector<int> nonzero_jumps;  // I_{p,k}
  int probe_degree = 0;
};

inline DcComponentReport nonzero_dc_components(const HodgeContext& ctx, int p,
                                               int k, int probe_degree = -1) {
  const auto& g = ctx.group();
  DcComponentReport rep;
  int n_bound = g.homogeneous_dim() - p + 1;
  rep.probe_degree = probe_degree >= 0 ? probe_degree : std::min(n_bound, 3);
  auto split = ctx.hodge_split(k, p);
  for (int r = 1; r <= g.homogeneous_dim() - p; ++r) {
    bool found = false;
    for (auto& beta : split.ker_box0.basis) {
      for (auto& e : monomials_up_to(g.dim(), rep.probe_degree)) {
        PolyForm probe = Poly::monomial(g.dim(), e, Rat(1)) *
                         PolyForm::from_algebraic(g.dim(), beta);
        if (!ctx.dc_r(probe, r).is_zero()) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (found) rep.nonzero_jumps.push_back(r);
  }
  return rep;
}

// Constant-coefficient (symbol level) fiber of E_{j,l} = Z_j cap (B_l)^perp:
// with invariant coefficients every positive-jump differential vanishes, so
// the Z fiber is ker d0 and the B fiber is Im d0, independent of j and l.
// Kept as an explicit computation so the construction mirrors the general
// definition.
inline Subspace e_jl_symbol_basis(const HodgeContext& ctx, int p, int k, int j,
                                  int l) {
  if (j < 1 || l < 1) throw InvalidInput("page indices must be >= 1");
  const auto& g = ctx.group();
  auto split = ctx.hodge_split(k, p);
  // Z fiber = Im d0 + ker Box0; project out the B fiber (Im d0).
  std::vector<AlgebraicForm> span;
  for (auto& f : split.im_d0.basis) span.push_back(f - split.im_d0.project(f));
  for (auto& f : split.ker_box0.basis)
    span.push_back(f - split.im_d0.project(f));
  return make_subspace(g, k, p, span);
}

}  // namespace carnot
