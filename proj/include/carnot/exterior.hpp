#pragma once

// Exterior algebra of the (co)frame with its weight bigrading: wedge, Hodge
// star, interior product, the graded scalar product, weight splitting, and
// rational-orthogonal subspace bases.  Multi-indices are packed bitmasks
// (bit i set <=> theta_{i+1} is a factor), so n <= 62.

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/linalg.hpp"

namespace carnot {

struct DegreeOverflow : Error {
  using Error::Error;
};
struct DegreeMismatch : Error {
  using Error::Error;
};

using Mask = std::uint64_t;

inline int mask_degree(Mask m) { return std::popcount(m); }

inline int mask_weight(const CheckedGroup& g, Mask m) {
  int w = 0;
  for (int i = 0; i < g.dim(); ++i)
    if (m >> i & 1) w += g.weight(i);
  return w;
}

// Sign of merging two disjoint ascending index blocks: number of
// transpositions needed to sort the concatenation (a, b).
inline int merge_sign(Mask a, Mask b) {
  int sign = 1;
  for (int i = 0; i < 64; ++i) {
    if (!(b >> i & 1)) continue;
    // count factors of a that must jump over index i
    Mask higher = a & ~((Mask(1) << (i + 1)) - 1);
    if (std::popcount(higher) % 2) sign = -sign;
  }
  return sign;
}

// Multi-indices of the given degree (and optionally fixed weight).
inline std::vector<Mask> masks_of_degree(const CheckedGroup& g, int k) {
  std::vector<Mask> out;
  Mask top = Mask(1) << g.dim();
  for (Mask m = 0; m < top; ++m)
    if (mask_degree(m) == k) out.push_back(m);
  return out;
}

inline std::vector<Mask> masks_of_degree_weight(const CheckedGroup& g, int k,
                                                int p) {
  std::vector<Mask> out;
  for (Mask m : masks_of_degree(g, k))
    if (mask_weight(g, m) == p) out.push_back(m);
  return out;
}

inline std::string mask_str(Mask m) {
  if (m == 0) return "1";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < 64; ++i)
    if (m >> i & 1) {
      if (!first) os << "^";
      os << "t" << i + 1;
      first = false;
    }
  return os.str();
}

// A covector (constant-coefficient form) of fixed degree.
class AlgebraicForm {
 public:
  AlgebraicForm() : degree_(0) {}
  explicit AlgebraicForm(int degree) : degree_(degree) {}

  static AlgebraicForm basis(Mask m) {
    AlgebraicForm f(mask_degree(m));
    f.coef_[m] = 1;
    return f;
  }
  static AlgebraicForm term(Mask m, const Rat& c) {
    AlgebraicForm f(mask_degree(m));
    if (c != 0) f.coef_[m] = c;
    return f;
  }

  int degree() const { return degree_; }
  bool is_zero() const { return coef_.empty(); }
  const std::map<Mask, Rat>& coef() const { return coef_; }
  Rat coeff(Mask m) const {
    auto it = coef_.find(m);
    return it == coef_.end() ? Rat(0) : it->second;
  }

  void add(Mask m, const Rat& c) {
    if (mask_degree(m) != degree_)
      throw DegreeMismatch("term degree does not match form degree");
    auto [it, fresh] = coef_.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) coef_.erase(it);
    }
    if (c == 0 && fresh) coef_.erase(m);
  }

  AlgebraicForm& operator+=(const AlgebraicForm& o) {
    check_same_degree(o);
    for (auto& [m, c] : o.coef_) add(m, c);
    return *this;
  }
  AlgebraicForm& operator-=(const AlgebraicForm& o) {
    check_same_degree(o);
    for (auto& [m, c] : o.coef_) add(m, -c);
    return *this;
  }
  friend AlgebraicForm operator+(AlgebraicForm a, const AlgebraicForm& b) {
    return a += b;
  }
  friend AlgebraicForm operator-(AlgebraicForm a, const AlgebraicForm& b) {
    return a -= b;
  }
  friend AlgebraicForm operator*(const Rat& s, AlgebraicForm f) {
    if (s == 0) return AlgebraicForm(f.degree_);
    for (auto& [m, c] : f.coef_) c *= s;
    return f;
  }
  AlgebraicForm operator-() const { return Rat(-1) * *this; }
  bool operator==(const AlgebraicForm& o) const {
    return degree_ == o.degree_ && coef_ == o.coef_;
  }

  std::string str() const {
    if (coef_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : coef_) {
      Rat a = c;
      if (first) {
        if (a < 0) { os << "-"; a = -a; }
      } else {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      }
      first = false;
      if (a != 1 || m == 0) {
        os << rat_str(a);
        if (m != 0) os << " ";
      }
      if (m != 0) os << mask_str(m);
    }
    return os.str();
  }

 private:
  void check_same_degree(const AlgebraicForm& o) const {
    if (degree_ != o.degree_)
      throw DegreeMismatch("form degrees differ");
  }

  int degree_;
  std::map<Mask, Rat> coef_;
};

inline AlgebraicForm wedge(const CheckedGroup& g, const AlgebraicForm& a,
                           const AlgebraicForm& b) {
  if (a.degree() + b.degree() > g.dim())
    throw DegreeOverflow("wedge degree exceeds group dimension");
  AlgebraicForm r(a.degree() + b.degree());
  for (auto& [ma, ca] : a.coef())
    for (auto& [mb, cb] : b.coef()) {
      if (ma & mb) continue;
      r.add(ma | mb, rat(merge_sign(ma, mb)) * ca * cb);
    }
  return r;
}

// theta_I wedge star(theta_J) = <theta_I, theta_J> vol with vol = theta_1
// wedge ... wedge theta_n.
inline AlgebraicForm hodge_star(const CheckedGroup& g,
                                const AlgebraicForm& f) {
  Mask vol = (Mask(1) << g.dim()) - 1;
  AlgebraicForm r(g.dim() - f.degree());
  for (auto& [m, c] : f.coef()) {
    Mask comp = vol & ~m;
    r.add(comp, rat(merge_sign(m, comp)) * c);
  }
  return r;
}

// Interior product with the algebra vector X = sum x_i X_i.
inline AlgebraicForm interior_product(const CheckedGroup& g,
                                      const std::vector<Rat>& x,
                                      const AlgebraicForm& f) {
  if (static_cast<int>(x.size()) != g.dim())
    throw InvalidInput("vector dimension mismatch");
  if (f.degree() == 0) return AlgebraicForm(0);
  AlgebraicForm r(f.degree() - 1);
  for (auto& [m, c] : f.coef())
    for (int i = 0; i < g.dim(); ++i) {
      if (!(m >> i & 1) || x[i] == 0) continue;
      int before = std::popcount(m & ((Mask(1) << i) - 1));
      r.add(m & ~(Mask(1) << i), rat(before % 2 ? -1 : 1) * x[i] * c);
    }
  return r;
}

inline Rat inner_product(const AlgebraicForm& a, const AlgebraicForm& b) {
  if (a.degree() != b.degree())
    throw DegreeMismatch("inner product of forms of different degree");
  Rat r = 0;
  for (auto& [m, c] : a.coef()) r += c * b.coeff(m);
  return r;
}

inline std::map<int, AlgebraicForm> weight_split(const CheckedGroup& g,
                                                 const AlgebraicForm& f) {
  std::map<int, AlgebraicForm> out;
  for (auto& [m, c] : f.coef()) {
    int w = mask_weight(g, m);
    auto [it, fresh] = out.try_emplace(w, AlgebraicForm(f.degree()));
    it->second.add(m, c);
  }
  return out;
}

// An orthogonal (not normalized: rational field) basis of a subspace of the
// degree-k fiber, optionally at a fixed weight.
struct Subspace {
  int degree = 0;
  std::optional<int> weight;
  std::vector<AlgebraicForm> basis;  // pairwise orthogonal, nonzero
  std::vector<Rat> norm_sq;

  int dim() const { return static_cast<int>(basis.size()); }

  // Orthogonal projection of f onto this subspace.
  AlgebraicForm project(const AlgebraicForm& f) const {
    AlgebraicForm r(degree);
    for (size_t i = 0; i < basis.size(); ++i)
      r += inner_product(f, basis[i]) / norm_sq[i] * basis[i];
    return r;
  }

  bool contains(const AlgebraicForm& f) const { return project(f) == f; }
};

// Builds a Subspace from spanning forms via Gram-Schmidt over the rationals.
inline Subspace make_subspace(const CheckedGroup& g, int degree,
                              std::optional<int> weight,
                              const std::vector<AlgebraicForm>& span) {
  // Coordinates relative to the full degree-k mask basis.
  auto masks = masks_of_degree(g, degree);
  std::map<Mask, int> pos;
  for (size_t i = 0; i < masks.size(); ++i) pos[masks[i]] = static_cast<int>(i);
  std::vector<std::vector<Rat>> rows;
  for (auto& f : span) {
    if (f.degree() != degree) throw DegreeMismatch("subspace span degree");
    std::vector<Rat> v(masks.size(), Rat(0));
    for (auto& [m, c] : f.coef()) v[pos.at(m)] = c;
    rows.push_back(std::move(v));
  }
  auto ob = gram_schmidt(rows);
  Subspace s;
  s.degree = degree;
  s.weight = weight;
  for (size_t i = 0; i < ob.vecs.size(); ++i) {
    AlgebraicForm f(degree);
    for (size_t j = 0; j < masks.size(); ++j)
      if (ob.vecs[i][j] != 0) f.add(masks[j], ob.vecs[i][j]);
    s.basis.push_back(std::move(f));
    s.norm_sq.push_back(ob.norm_sq[i]);
  }
  return s;
}

}  // namespace carnot
