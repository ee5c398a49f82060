#pragma once

// Differential forms with polynomial coefficients relative to the
// left-invariant coframe, the exterior derivative, and its exact weight
// decomposition d = d_0 + d_1 + ... (jump-indexed components).

#include <map>
#include <sstream>
#include <vector>

#include "carnot/exterior.hpp"
#include "carnot/group.hpp"
#include "carnot/poly.hpp"

namespace carnot {

class PolyForm {
 public:
  PolyForm() : nvars_(0), degree_(0) {}
  PolyForm(int nvars, int degree) : nvars_(nvars), degree_(degree) {}

  static PolyForm from_algebraic(int nvars, const AlgebraicForm& f) {
    PolyForm r(nvars, f.degree());
    for (auto& [m, c] : f.coef()) r.coef_[m] = Poly(nvars, c);
    return r;
  }
  static PolyForm term(int nvars, Mask m, const Poly& f) {
    PolyForm r(nvars, mask_degree(m));
    if (!f.is_zero()) r.coef_[m] = f;
    return r;
  }

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  bool is_zero() const { return coef_.empty(); }
  const std::map<Mask, Poly>& coef() const { return coef_; }
  Poly coeff(Mask m) const {
    auto it = coef_.find(m);
    return it == coef_.end() ? Poly(nvars_) : it->second;
  }

  void add(Mask m, const Poly& f) {
    if (mask_degree(m) != degree_)
      throw DegreeMismatch("term degree does not match form degree");
    if (f.is_zero()) return;
    auto [it, fresh] = coef_.try_emplace(m, f);
    if (!fresh) {
      it->second += f;
      if (it->second.is_zero()) coef_.erase(it);
    }
  }

  PolyForm& operator+=(const PolyForm& o) {
    check_compatible(o);
    for (auto& [m, f] : o.coef_) add(m, f);
    return *this;
  }
  PolyForm& operator-=(const PolyForm& o) {
    check_compatible(o);
    for (auto& [m, f] : o.coef_) add(m, -f);
    return *this;
  }
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator*(const Rat& s, PolyForm f) {
    if (s == 0) return PolyForm(f.nvars_, f.degree_);
    for (auto& [m, c] : f.coef_) c *= s;
    return f;
  }
  friend PolyForm operator*(const Poly& s, const PolyForm& f) {
    PolyForm r(f.nvars_, f.degree_);
    for (auto& [m, c] : f.coef_) r.add(m, s * c);
    return r;
  }
  PolyForm operator-() const { return Rat(-1) * *this; }
  bool operator==(const PolyForm& o) const {
    return nvars_ == o.nvars_ && degree_ == o.degree_ && coef_ == o.coef_;
  }

  int max_poly_degree() const {
    int d = -1;
    for (auto& [m, f] : coef_) d = std::max(d, f.total_degree());
    return d;
  }

  // Evaluates the polynomial coefficients at a point.
  AlgebraicForm at(const std::vector<Rat>& x) const {
    AlgebraicForm r(degree_);
    for (auto& [m, f] : coef_) r.add(m, f.eval(x));
    return r;
  }

  std::string str() const {
    if (coef_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, f] : coef_) {
      if (!first) os << " + ";
      first = false;
      bool wrap = f.terms().size() > 1;
      if (m == 0) {
        os << f.str();
        continue;
      }
      if (f == Poly(nvars_, Rat(1))) {
        os << mask_str(m);
      } else {
        if (wrap) os << "(" << f.str() << ")";
        else os << f.str();
        os << " " << mask_str(m);
      }
    }
    return os.str();
  }

 private:
  void check_compatible(const PolyForm& o) const {
    if (nvars_ != o.nvars_ || degree_ != o.degree_)
      throw DegreeMismatch("form shape mismatch");
  }

  int nvars_, degree_;
  std::map<Mask, Poly> coef_;
};

inline PolyForm wedge(const CheckedGroup& g, const PolyForm& a,
                      const PolyForm& b) {
  if (a.degree() + b.degree() > g.dim())
    throw DegreeOverflow("wedge degree exceeds group dimension");
  PolyForm r(a.nvars(), a.degree() + b.degree());
  for (auto& [ma, fa] : a.coef())
    for (auto& [mb, fb] : b.coef()) {
      if (ma & mb) continue;
      r.add(ma | mb, rat(merge_sign(ma, mb)) * (fa * fb));
    }
  return r;
}

// Splits a form into its pure-weight components.
inline std::map<int, PolyForm> weight_split(const CheckedGroup& g,
                                            const PolyForm& f) {
  std::map<int, PolyForm> out;
  for (auto& [m, c] : f.coef()) {
    int w = mask_weight(g, m);
    auto [it, fresh] = out.try_emplace(w, PolyForm(f.nvars(), f.degree()));
    it->second.add(m, c);
  }
  return out;
}

// Weight of a homogeneous form; throws if mixed.
inline int form_weight(const CheckedGroup& g, const PolyForm& f) {
  auto parts = weight_split(g, f);
  if (parts.size() != 1)
    throw InvalidInput("form is not weight-homogeneous");
  return parts.begin()->first;
}

inline PolyForm weight_component(const CheckedGroup& g, const PolyForm& f,
                                 int p) {
  PolyForm out(f.nvars(), f.degree());
  for (auto& [m, c] : f.coef())
    if (mask_weight(g, m) == p) out.add(m, c);
  return out;
}

// Chevalley-Eilenberg differential of a basis covector:
// d theta_k = -sum_{a<b} c_{ab}^k theta_a wedge theta_b, extended to
// multi-indices by the graded Leibniz rule.
inline AlgebraicForm ce_d_basis(const CheckedGroup& g, Mask m) {
  AlgebraicForm out(mask_degree(m) + 1);
  if (mask_degree(m) >= g.dim()) return out;
  int pos = 0;
  for (int k = 0; k < g.dim(); ++k) {
    if (!(m >> k & 1)) continue;
    AlgebraicForm dtheta(2);
    for (int a = 0; a < g.dim(); ++a)
      for (int b = a + 1; b < g.dim(); ++b) {
        Rat c = g.c(a, b, k);
        if (c != 0) dtheta.add(Mask(1) << a | Mask(1) << b, -c);
      }
    if (!dtheta.is_zero()) {
      AlgebraicForm rest = AlgebraicForm::basis(m & ~(Mask(1) << k));
      AlgebraicForm t = wedge(g, dtheta, rest);
      out += rat(pos % 2 ? -1 : 1) * t;
    }
    ++pos;
  }
  return out;
}

// Weight-preserving part d_0 (coefficient-linear).
inline PolyForm d0(const CheckedGroup& g, const PolyForm& f) {
  PolyForm r(f.nvars(), f.degree() + 1);
  if (f.degree() >= g.dim()) return r;
  for (auto& [m, c] : f.coef()) {
    AlgebraicForm dm = ce_d_basis(g, m);
    for (auto& [m2, c2] : dm.coef()) r.add(m2, c2 * c);
  }
  return r;
}

// Weight-jump-j part for j >= 1: sum over frame fields in the layer of
// weight j of (X_l f) theta_l wedge theta_I.
inline PolyForm d_jump(const CheckedGroup& g, const PolyForm& f, int j) {
  PolyForm r(f.nvars(), f.degree() + 1);
  if (f.degree() >= g.dim()) return r;
  for (int l : g.layer(j)) {
    for (auto& [m, c] : f.coef()) {
      if (m >> l & 1) continue;
      Poly df = g.frame_derivative(l, c);
      if (df.is_zero()) continue;
      r.add(m | Mask(1) << l, rat(merge_sign(Mask(1) << l, m)) * df);
    }
  }
  return r;
}

inline PolyForm d_component(const CheckedGroup& g, const PolyForm& f, int j) {
  if (j == 0) return d0(g, f);
  return d_jump(g, f, j);
}

inline PolyForm d(const CheckedGroup& g, const PolyForm& f) {
  PolyForm r = d0(g, f);
  for (int w : g.distinct_weights()) r += d_jump(g, f, w);
  return r;
}

// Residual report for the truncated multicomplex relations
// sum_{i+j=n} d_i d_j = 0 on monomial probes of degree k.
struct MulticomplexReport {
  bool all_zero = true;
  int max_n = 0;
  std::vector<std::string> failures;
};

inline MulticomplexReport multicomplex_check(const CheckedGroup& g, int k,
                                             int probe_degree) {
  MulticomplexReport rep;
  rep.max_n = 2 * g.step();
  auto monos = monomials_up_to(g.dim(), probe_degree);
  for (Mask m : masks_of_degree(g, k)) {
    for (auto& e : monos) {
      PolyForm probe =
          PolyForm::term(g.dim(), m, Poly::monomial(g.dim(), e, Rat(1)));
      for (int n = 0; n <= rep.max_n; ++n) {
        PolyForm acc(g.dim(), k + 2);
        for (int i = 0; i <= n; ++i) {
          PolyForm inner = d_component(g, probe, n - i);
          if (inner.is_zero()) continue;
          acc += d_component(g, inner, i);
        }
        if (!acc.is_zero()) {
          rep.all_zero = false;
          std::ostringstream os;
          os << "sum_{i+j=" << n << "} d_i d_j != 0 on " << probe.str();
          rep.failures.push_back(os.str());
        }
      }
    }
  }
  return rep;
}

}  // namespace carnot
