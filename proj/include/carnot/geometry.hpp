#pragma once

// Complementary homogeneous subgroups, intrinsic-graph charts over the unit
// box, cubical chains with exact boundary, exact and Gauss-Legendre
// integration of forms, and pointwise/global chart degrees.

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

#include "carnot/polyform.hpp"
#include "carnot/spectral.hpp"

namespace carnot {

struct NotSimple : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct WedgeVanishes : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct NotSubalgebra : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct ZeroDimensional : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct RankDeficient : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct DimensionMismatch : InvalidInput {
  using InvalidInput::InvalidInput;
};

// Transverse pair of homogeneous subalgebras spanning the whole algebra.
struct ComplementaryPair {
  std::vector<std::vector<Rat>> w_basis, v_basis;  // algebra coordinates
  std::vector<int> w_weights, v_weights;           // layer weight per vector
  int w_degree = 0, v_degree = 0;                  // sums of weights
};

namespace detail {

// Layer-homogeneous basis of {X : iota_X theta = 0}; throws NotSimple when
// the annihilator cannot be spanned layer by layer or has the wrong size.
inline void annihilator_basis(const CheckedGroup& g, const AlgebraicForm& th,
                              int expected_dim,
                              std::vector<std::vector<Rat>>& basis,
                              std::vector<int>& weights, const char* label) {
  const int n = g.dim();
  // full annihilator dimension, for the simplicity check
  auto contraction_matrix = [&](const std::vector<int>& cols) {
    std::vector<AlgebraicForm> imgs;
    std::map<Mask, int> row;
    for (int i : cols) {
      std::vector<Rat> e(n, Rat(0));
      e[i] = 1;
      imgs.push_back(interior_product(g, e, th));
      for (auto& [m, c] : imgs.back().coef()) row.try_emplace(m, 0);
    }
    int r = 0;
    for (auto& [m, idx] : row) idx = r++;
    RatMat mat(r, static_cast<int>(cols.size()));
    for (size_t j = 0; j < imgs.size(); ++j)
      for (auto& [m, c] : imgs[j].coef())
        mat(row.at(m), static_cast<int>(j)) = c;
    return mat;
  };
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  int full_dim = static_cast<int>(nullspace(contraction_matrix(all)).size());
  if (full_dim != expected_dim) {
    std::ostringstream os;
    os << label << " is not simple: annihilator dimension " << full_dim
       << ", expected " << expected_dim;
    throw NotSimple(os.str());
  }
  int layered = 0;
  for (int w : g.distinct_weights()) {
    std::vector<int> cols = g.layer(w);
    for (auto& v : nullspace(contraction_matrix(cols))) {
      std::vector<Rat> x(n, Rat(0));
      for (size_t j = 0; j < cols.size(); ++j) x[cols[j]] = v[j];
      basis.push_back(std::move(x));
      weights.push_back(w);
      ++layered;
    }
  }
  if (layered != expected_dim)
    throw NotSimple(std::string(label) +
                    " does not have homogeneous annihilator factors");
}

inline bool in_span(const std::vector<std::vector<Rat>>& basis,
                    const std::vector<Rat>& v) {
  if (basis.empty()) {
    for (auto& c : v)
      if (c != 0) return false;
    return true;
  }
  int n = static_cast<int>(v.size());
  RatMat m(n, static_cast<int>(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j)
    for (int i = 0; i < n; ++i) m(i, static_cast<int>(j)) = basis[j][i];
  return solve(m, v).has_value();
}

inline void check_subalgebra(const CheckedGroup& g,
                             const std::vector<std::vector<Rat>>& basis,
                             const char* label) {
  for (size_t a = 0; a < basis.size(); ++a)
    for (size_t b = a + 1; b < basis.size(); ++b) {
      auto br = g.bracket(basis[a], basis[b], Rat(0));
      if (!in_span(basis, br)) {
        std::ostringstream os;
        os << label << " is not a subalgebra: bracket of basis vectors "
           << a + 1 << " and " << b + 1 << " leaves the span";
        throw NotSubalgebra(os.str());
      }
    }
}

}  // namespace detail

// Complementary pair from explicit homogeneous bases (validated).
inline ComplementaryPair make_complementary_pair(
    const CheckedGroup& g, std::vector<std::vector<Rat>> w_basis,
    std::vector<std::vector<Rat>> v_basis) {
  const int n = g.dim();
  ComplementaryPair pair;
  pair.w_basis = std::move(w_basis);
  pair.v_basis = std::move(v_basis);
  auto weight_of = [&](const std::vector<Rat>& v) {
    if (static_cast<int>(v.size()) != n)
      throw DimensionMismatch("basis vector arity");
    int w = 0;
    for (int i = 0; i < n; ++i)
      if (v[i] != 0) {
        if (w != 0 && g.weights()[i] != w)
          throw NotSimple("basis vector is not layer-homogeneous");
        w = g.weights()[i];
      }
    if (w == 0) throw InvalidInput("zero basis vector");
    return w;
  };
  for (auto& v : pair.w_basis) pair.w_weights.push_back(weight_of(v));
  for (auto& v : pair.v_basis) pair.v_weights.push_back(weight_of(v));
  detail::check_subalgebra(g, pair.w_basis, "W");
  detail::check_subalgebra(g, pair.v_basis, "V");
  for (int w : pair.w_weights) pair.w_degree += w;
  for (int w : pair.v_weights) pair.v_degree += w;
  RatMat all(n, n);
  if (pair.w_basis.size() + pair.v_basis.size() != static_cast<size_t>(n))
    throw DimensionMismatch("bases must jointly have full dimension");
  int col = 0;
  for (auto* side : {&pair.w_basis, &pair.v_basis})
    for (auto& v : *side) {
      for (int i = 0; i < n; ++i) all(i, col) = v[i];
      ++col;
    }
  if (rref(all).rank() != n)
    throw InvalidInput("bases do not span the algebra");
  return pair;
}

// Complementary pair from a simple Rumin covector xi (and optionally a
// transverse simple covector theta; default: Hodge star of xi).  The
// W-factor annihilates theta, the V-factor annihilates xi.
inline ComplementaryPair pair_from_rumin(
    const CheckedGroup& g, const AlgebraicForm& xi,
    std::optional<AlgebraicForm> theta = std::nullopt) {
  const int n = g.dim();
  int k = xi.degree();
  if (!theta) theta = hodge_star(g, xi);
  if (theta->degree() != n - k)
    throw DegreeMismatch("transverse covector has wrong degree");
  if (wedge(g, xi, *theta).is_zero())
    throw WedgeVanishes("xi ^ theta = 0: factors are not transverse");
  ComplementaryPair pair;
  detail::annihilator_basis(g, *theta, k, pair.w_basis, pair.w_weights,
                            "theta");
  detail::annihilator_basis(g, xi, n - k, pair.v_basis, pair.v_weights, "xi");
  detail::check_subalgebra(g, pair.w_basis, "W");
  detail::check_subalgebra(g, pair.v_basis, "V");
  for (int w : pair.w_weights) pair.w_degree += w;
  for (int w : pair.v_weights) pair.v_degree += w;
  // transversality already forces a direct sum; guard the invariant anyway
  RatMat all(n, n);
  int col = 0;
  for (auto* side : {&pair.w_basis, &pair.v_basis})
    for (auto& v : *side) {
      for (int i = 0; i < n; ++i) all(i, col) = v[i];
      ++col;
    }
  if (rref(all).rank() != n)
    throw Error("internal: pair does not span the algebra");
  return pair;
}

// Polynomial chart over the closed unit box [0,1]^dim.
struct Chart {
  int dim = 0;             // number of parameters
  std::vector<Poly> map;   // group coordinates, polynomials in dim variables
  int sign = 1;            // orientation

  bool operator==(const Chart& o) const {
    return dim == o.dim && map == o.map && sign == o.sign;
  }
};

struct CubicalChain {
  int dim = 0;
  std::vector<std::pair<Rat, Chart>> terms;
};

inline CubicalChain chain_of(const Chart& c, const Rat& coeff = Rat(1)) {
  CubicalChain ch;
  ch.dim = c.dim;
  ch.terms.push_back({coeff, c});
  return ch;
}

// Intrinsic graph chart w |-> w . phi(w): the W-point with coordinates w in
// the pair's W-basis multiplied by the V-point phi(w), all through the exact
// group law.
inline Chart graph_chart(const CheckedGroup& g, const ComplementaryPair& pair,
                         const std::vector<Poly>& phi, int sign = 1) {
  const int n = g.dim();
  int k = static_cast<int>(pair.w_basis.size());
  if (phi.size() != pair.v_basis.size())
    throw DimensionMismatch("phi component count must match the V-basis");
  for (auto& f : phi)
    if (f.nvars() != k)
      throw DimensionMismatch("phi components must use the W parameters");
  std::vector<Poly> wpt(n, Poly(k)), vpt(n, Poly(k));
  for (int j = 0; j < k; ++j) {
    Poly wj = Poly::variable(k, j);
    for (int i = 0; i < n; ++i)
      if (pair.w_basis[j][i] != 0) wpt[i] += pair.w_basis[j][i] * wj;
  }
  for (size_t j = 0; j < phi.size(); ++j)
    for (int i = 0; i < n; ++i)
      if (pair.v_basis[j][i] != 0) vpt[i] += pair.v_basis[j][i] * phi[j];
  std::vector<Poly> args;
  args.insert(args.end(), wpt.begin(), wpt.end());
  args.insert(args.end(), vpt.begin(), vpt.end());
  Chart c;
  c.dim = k;
  c.sign = sign;
  c.map.resize(n);
  for (int i = 0; i < n; ++i) c.map[i] = g.product_polys()[i].compose(args);
  return c;
}

// Inclusion of the W-factor (phi identically zero).
inline Chart inclusion_chart(const CheckedGroup& g,
                             const ComplementaryPair& pair, int sign = 1) {
  int k = static_cast<int>(pair.w_basis.size());
  return graph_chart(
      g, pair, std::vector<Poly>(pair.v_basis.size(), Poly(k)), sign);
}

// Merges charts that differ only in bookkeeping: orientation signs are
// folded into the coefficients, identical maps are combined, zeros dropped.
inline CubicalChain canonicalize(const CubicalChain& ch) {
  using Key = std::vector<std::map<Poly::Expo, Rat>>;
  std::map<Key, std::pair<Rat, Chart>> acc;
  for (auto& [coeff, chart] : ch.terms) {
    Key key;
    for (auto& f : chart.map) key.push_back(f.terms());
    Chart canon = chart;
    canon.sign = 1;
    auto [it, fresh] = acc.try_emplace(std::move(key),
                                       std::make_pair(Rat(0), canon));
    it->second.first += coeff * rat(chart.sign);
  }
  CubicalChain out;
  out.dim = ch.dim;
  for (auto& [key, term] : acc)
    if (term.first != 0) out.terms.push_back(term);
  return out;
}

// Cubical boundary: face (i, sigma) pins parameter i to sigma with the sign
// (-1)^{i+sigma}, i counted from 1.
inline CubicalChain boundary(const CubicalChain& ch) {
  if (ch.dim == 0)
    throw ZeroDimensional("boundary of a 0-dimensional chain");
  CubicalChain out;
  out.dim = ch.dim - 1;
  for (auto& [coeff, chart] : ch.terms) {
    int k = chart.dim;
    for (int i = 0; i < k; ++i)
      for (int sigma = 0; sigma <= 1; ++sigma) {
        std::vector<Poly> args(k);
        int v = 0;
        for (int j = 0; j < k; ++j)
          args[j] = j == i ? Poly(k - 1, Rat(sigma))
                           : Poly::variable(k - 1, v++);
        Chart face;
        face.dim = k - 1;
        face.sign = chart.sign;
        for (auto& f : chart.map) face.map.push_back(f.compose(args));
        int s = (i + 1 + sigma) % 2 ? -1 : 1;
        out.terms.push_back({coeff * rat(s), face});
      }
  }
  return canonicalize(out);
}

namespace detail {

// Pulled-back coframe rows: M[i][l] = sum_j Theta_ij(Phi(w)) dPhi_j/dw_l.
inline std::vector<std::vector<Poly>> pullback_matrix(const CheckedGroup& g,
                                                      const Chart& c) {
  const int n = g.dim();
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(c.dim, Poly(c.dim)));
  std::vector<std::vector<Poly>> dphi(n, std::vector<Poly>(c.dim));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < c.dim; ++l) dphi[j][l] = c.map[j].derivative(l);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Poly& th = g.coframe()[i][j];
      if (th.is_zero()) continue;
      Poly composed = th.compose(c.map);
      if (composed.is_zero()) continue;
      for (int l = 0; l < c.dim; ++l)
        if (!dphi[j][l].is_zero()) m[i][l] += composed * dphi[j][l];
    }
  return m;
}

inline Poly poly_det(const std::vector<std::vector<Poly>>& m,
                     const std::vector<int>& rows, std::vector<int>& cols) {
  if (rows.size() == 1) return m[rows[0]][cols[0]];
  Poly acc(m[rows[0]][cols[0]].nvars());
  std::vector<int> sub(cols.begin() + 1, cols.end());
  for (size_t i = 0; i < rows.size(); ++i) {
    const Poly& pivot = m[rows[i]][cols[0]];
    if (!pivot.is_zero()) {
      std::vector<int> rest;
      for (size_t j = 0; j < rows.size(); ++j)
        if (j != i) rest.push_back(rows[j]);
      Poly minor = poly_det(m, rest, sub);
      if (i % 2) acc -= pivot * minor;
      else acc += pivot * minor;
    }
  }
  return acc;
}

// Frame expansion of the tangent k-vector: mask -> minor polynomial.
inline std::map<Mask, Poly> tangent_components(const CheckedGroup& g,
                                               const Chart& c) {
  auto m = pullback_matrix(g, c);
  std::vector<int> cols(c.dim);
  for (int l = 0; l < c.dim; ++l) cols[l] = l;
  std::map<Mask, Poly> out;
  for (Mask msk : masks_of_degree(g, c.dim)) {
    std::vector<int> rows;
    for (int i = 0; i < g.dim(); ++i)
      if (msk >> i & 1) rows.push_back(i);
    std::vector<int> cc = cols;
    Poly d = poly_det(m, rows, cc);
    if (!d.is_zero()) out[msk] = std::move(d);
  }
  return out;
}

inline Rat unit_box_integral(const Poly& f) {
  Rat total = 0;
  for (auto& [e, c] : f.terms()) {
    Rat t = c;
    for (unsigned a : e) t /= static_cast<int>(a) + 1;
    total += t;
  }
  return total;
}

}  // namespace detail

// Exact integral of a polynomial-coefficient form over one chart.
inline Rat integrate(const CheckedGroup& g, const Chart& c,
                     const PolyForm& alpha) {
  if (alpha.degree() != c.dim)
    throw DegreeMismatch("form degree must equal the chart dimension");
  if (c.dim == 0) {
    std::vector<Rat> pt;
    for (auto& f : c.map) pt.push_back(f.eval({}));
    return rat(c.sign) * alpha.coeff(0).eval(pt);
  }
  auto comps = detail::tangent_components(g, c);
  Poly integrand(c.dim);
  for (auto& [m, coeff] : alpha.coef()) {
    auto it = comps.find(m);
    if (it == comps.end()) continue;
    integrand += coeff.compose(c.map) * it->second;
  }
  return rat(c.sign) * detail::unit_box_integral(integrand);
}

inline Rat integrate(const CheckedGroup& g, const CubicalChain& ch,
                     const PolyForm& alpha) {
  Rat total = 0;
  for (auto& [coeff, chart] : ch.terms)
    total += coeff * integrate(g, chart, alpha);
  return total;
}

// Gauss-Legendre nodes/weights on [0,1].
inline void gauss_legendre(int order, std::vector<double>& nodes,
                           std::vector<double>& weights) {
  if (order < 1) throw InvalidInput("quadrature order must be >= 1");
  nodes.resize(order);
  weights.resize(order);
  for (int i = 0; i < order; ++i) {
    // Newton iteration from the Chebyshev initial guess, on [-1,1]
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= order; ++j) {
      double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double dp = order * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = (x + 1.0) / 2.0;
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

// Coefficient callback: group point -> (mask -> coefficient value).
using FormCallback =
    std::function<std::map<Mask, double>(const std::vector<double>&)>;

inline double integrate_numeric(const CheckedGroup& g, const Chart& c,
                                const FormCallback& alpha, int degree,
                                int order) {
  if (degree != c.dim)
    throw DegreeMismatch("form degree must equal the chart dimension");
  if (c.dim == 0) {
    std::vector<double> pt;
    for (auto& f : c.map) pt.push_back(f.eval_d({}));
    auto coef = alpha(pt);
    auto it = coef.find(0);
    return c.sign * (it == coef.end() ? 0.0 : it->second);
  }
  auto m = detail::pullback_matrix(g, c);
  std::vector<double> nodes, weights;
  gauss_legendre(order, nodes, weights);
  // tensor grid over the unit box, fixed iteration order
  std::vector<int> idx(c.dim, 0);
  double total = 0.0;
  while (true) {
    std::vector<double> w(c.dim);
    double wt = 1.0;
    for (int l = 0; l < c.dim; ++l) {
      w[l] = nodes[idx[l]];
      wt *= weights[idx[l]];
    }
    std::vector<double> x;
    for (auto& f : c.map) x.push_back(f.eval_d(w));
    auto coef = alpha(x);
    double value = 0.0;
    for (auto& [msk, cv] : coef) {
      if (cv == 0.0) continue;
      std::vector<int> rows;
      for (int i = 0; i < g.dim(); ++i)
        if (msk >> i & 1) rows.push_back(i);
      if (static_cast<int>(rows.size()) != c.dim) continue;
      // numeric determinant of the pulled-back rows
      std::vector<std::vector<double>> a(c.dim, std::vector<double>(c.dim));
      for (int i = 0; i < c.dim; ++i)
        for (int l = 0; l < c.dim; ++l) a[i][l] = m[rows[i]][l].eval_d(w);
      double det = 1.0;
      for (int col = 0; col < c.dim; ++col) {
        int piv = col;
        for (int r2 = col + 1; r2 < c.dim; ++r2)
          if (std::abs(a[r2][col]) > std::abs(a[piv][col])) piv = r2;
        if (a[piv][col] == 0.0) {
          det = 0.0;
          break;
        }
        if (piv != col) {
          std::swap(a[piv], a[col]);
          det = -det;
        }
        det *= a[col][col];
        for (int r2 = col + 1; r2 < c.dim; ++r2) {
          double f = a[r2][col] / a[col][col];
          for (int c2 = col; c2 < c.dim; ++c2) a[r2][c2] -= f * a[col][c2];
        }
      }
      value += cv * det;
    }
    total += wt * value;
    int l = 0;
    while (l < c.dim && ++idx[l] == order) idx[l++] = 0;
    if (l == c.dim) break;
  }
  return c.sign * total;
}

inline double integrate_numeric(const CheckedGroup& g, const CubicalChain& ch,
                                const FormCallback& alpha, int degree,
                                int order) {
  double total = 0.0;
  for (auto& [coeff, chart] : ch.terms)
    total += rat_double(coeff) * integrate_numeric(g, chart, alpha, degree,
                                                   order);
  return total;
}

inline FormCallback callback_of(const PolyForm& alpha) {
  return [alpha](const std::vector<double>& x) {
    std::map<Mask, double> out;
    for (auto& [m, f] : alpha.coef()) out[m] = f.eval_d(x);
    return out;
  };
}

// Pointwise degree: top weight present in the tangent k-vector at w.
inline int degree_at(const CheckedGroup& g, const Chart& c,
                     const std::vector<Rat>& w) {
  if (c.dim == 0) return 0;
  if (static_cast<int>(w.size()) != c.dim)
    throw DimensionMismatch("sample point arity");
  auto comps = detail::tangent_components(g, c);
  int best = -1;
  for (auto& [m, f] : comps)
    if (f.eval(w) != 0) best = std::max(best, mask_weight(g, m));
  if (best < 0) throw RankDeficient("tangent vector vanishes at the sample");
  return best;
}

// Chart degree: top weight whose tangent component is not identically zero.
inline int degree(const CheckedGroup& g, const Chart& c) {
  if (c.dim == 0) return 0;
  auto comps = detail::tangent_components(g, c);
  if (comps.empty())
    throw RankDeficient("tangent vector vanishes identically");
  int best = 0;
  for (auto& [m, f] : comps) best = std::max(best, mask_weight(g, m));
  return best;
}

inline int degree(const CheckedGroup& g, const CubicalChain& ch) {
  if (ch.terms.empty()) throw RankDeficient("empty chain has no degree");
  int best = 0;
  for (auto& [coeff, chart] : ch.terms)
    best = std::max(best, degree(g, chart));
  return best;
}

// Verifies pointwise degree constancy when certifiable: true when some
// top-weight tangent component is a nonzero constant (hence never vanishes).
inline bool degree_constancy_certified(const CheckedGroup& g, const Chart& c) {
  if (c.dim == 0) return true;
  auto comps = detail::tangent_components(g, c);
  int top = degree(g, c);
  for (auto& [m, f] : comps)
    if (mask_weight(g, m) == top && f.total_degree() == 0) return true;
  return false;
}

// Three-valued verdict on the vanishing of integrals of Im delta0 forms.
struct RManifoldReport {
  int degree = 0;
  bool sufficient = false;   // every Im delta0 fiber weight exceeds degree
  std::optional<PolyForm> falsified;  // witness with nonzero integral
  Rat witness_integral = 0;
  bool inconclusive = false;
  int probe_degree = 0;
};

inline RManifoldReport r_manifold_report(const HodgeContext& ctx,
                                         const CubicalChain& ch,
                                         int probe_degree = 2) {
  const auto& g = ctx.group();
  RManifoldReport rep;
  rep.degree = degree(g, ch);
  rep.probe_degree = probe_degree;
  std::vector<HodgeSplit> splits;
  for (int p : ctx.fiber_weights(ch.dim))
    splits.push_back(ctx.hodge_split(ch.dim, p));
  rep.sufficient = true;
  for (auto& s : splits)
    if (s.im_delta0.dim() > 0 && s.weight <= rep.degree)
      rep.sufficient = false;
  if (rep.sufficient) return rep;
  for (auto& s : splits) {
    if (s.im_delta0.dim() == 0) continue;
    for (auto& beta : s.im_delta0.basis)
      for (auto& e : monomials_up_to(g.dim(), probe_degree)) {
        PolyForm probe = Poly::monomial(g.dim(), e, Rat(1)) *
                         PolyForm::from_algebraic(g.dim(), beta);
        Rat val = integrate(g, ch, probe);
        if (val != 0) {
          rep.falsified = probe;
          rep.witness_integral = val;
          return rep;
        }
      }
  }
  rep.inconclusive = true;
  return rep;
}

// Degree-membership test for the spectral Stokes hypotheses.
struct SpectralManifoldReport {
  int deg_sigma = 0, deg_boundary = 0, j = 0;
  bool sigma_in_p = false, boundary_in_p = false, ok = false;
};

inline SpectralManifoldReport is_spectral_manifold(const HodgeContext& ctx,
                                                   const CubicalChain& sigma,
                                                   const CubicalChain& bdry) {
  const auto& g = ctx.group();
  if (bdry.dim != sigma.dim - 1)
    throw DimensionMismatch("boundary chain must have one dimension less");
  SpectralManifoldReport rep;
  rep.deg_sigma = degree(g, sigma);
  rep.deg_boundary = bdry.terms.empty() ? 0 : degree(g, bdry);
  rep.j = rep.deg_sigma - rep.deg_boundary;
  auto pk = weight_set_P(ctx, sigma.dim);
  auto pk1 = weight_set_P(ctx, sigma.dim - 1);
  rep.sigma_in_p =
      std::find(pk.begin(), pk.end(), rep.deg_sigma) != pk.end();
  rep.boundary_in_p = bdry.terms.empty() ||
      std::find(pk1.begin(), pk1.end(), rep.deg_boundary) != pk1.end();
  rep.ok = rep.sigma_in_p && rep.boundary_in_p && rep.j >= 1;
  return rep;
}

}  // namespace carnot
