#pragma once

// Positively graded Lie groups in exponential coordinates of the first kind:
// specification validation (Jacobi, grading compatibility), the group law via
// the Dynkin commutator series truncated at the nilpotency step, dilations,
// and the polynomial left-invariant frame/coframe.

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "carnot/linalg.hpp"
#include "carnot/poly.hpp"
#include "carnot/rational.hpp"

namespace carnot {

struct JacobiViolation : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct GradingViolation : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct NonpositiveWeight : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct WeightsNotSorted : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct StepBudgetExceeded : Error {
  using Error::Error;
};

// Largest nilpotency step for which the group law is constructed.  The Dynkin
// series itself is generic, but the budget keeps symbolic work bounded and is
// surfaced as a hard error instead of a silent truncation.
inline constexpr int kMaxStep = 6;

struct BracketTerm {
  int k;   // 0-based target index
  Rat c;   // coefficient of X_k in [X_i, X_j]
};

// Raw user-supplied description of the algebra.  Indices are 0-based here;
// the text file format is 1-based (see parse.hpp).
struct GroupSpec {
  std::string name;  // optional label used in reports
  int dim = 0;
  std::vector<int> weights;  // nondecreasing, positive
  std::map<std::pair<int, int>, std::vector<BracketTerm>> brackets;  // i<j
};

class CheckedGroup;
using GroupPtr = std::shared_ptr<const CheckedGroup>;

// A validated group with all derived data precomputed.  Immutable; share via
// GroupPtr and use freely across threads.
class CheckedGroup {
 public:
  const GroupSpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }
  int dim() const { return spec_.dim; }
  int weight(int i) const { return spec_.weights.at(i); }
  const std::vector<int>& weights() const { return spec_.weights; }
  int step() const { return step_; }
  int homogeneous_dim() const { return q_; }
  const std::vector<int>& distinct_weights() const { return distinct_weights_; }
  // Basis indices lying in the layer of the given weight (possibly empty).
  std::vector<int> layer(int w) const {
    std::vector<int> out;
    for (int i = 0; i < dim(); ++i)
      if (weight(i) == w) out.push_back(i);
    return out;
  }

  // Structure constant c_{ij}^k with antisymmetry filled in.
  Rat c(int i, int j, int k) const {
    if (i == j) return 0;
    if (i > j) return -c(j, i, k);
    auto it = spec_.brackets.find({i, j});
    if (it == spec_.brackets.end()) return 0;
    for (auto& t : it->second)
      if (t.k == k) return t.c;
    return 0;
  }

  // Bracket of algebra elements given by coefficient vectors over any
  // commutative coefficient ring T (Rat or Poly).
  template <class T>
  std::vector<T> bracket(const std::vector<T>& u, const std::vector<T>& v,
                         const T& zero) const {
    std::vector<T> r(dim(), zero);
    for (auto& [ij, terms] : spec_.brackets) {
      auto [i, j] = ij;
      T cross = u[i] * v[j] - u[j] * v[i];
      for (auto& t : terms) r[t.k] += t.c * cross;
    }
    return r;
  }

  // Group law m(x,y) as dim() polynomials in 2*dim() variables
  // (x_1..x_n, y_1..y_n).
  const std::vector<Poly>& product_polys() const {
    require_law();
    return law_;
  }

  std::vector<Rat> product(const std::vector<Rat>& x,
                           const std::vector<Rat>& y) const {
    require_law();
    if (static_cast<int>(x.size()) != dim() ||
        static_cast<int>(y.size()) != dim())
      throw InvalidInput("point dimension mismatch");
    std::vector<Rat> xy(x);
    xy.insert(xy.end(), y.begin(), y.end());
    std::vector<Rat> out(dim());
    for (int i = 0; i < dim(); ++i) out[i] = law_[i].eval(xy);
    return out;
  }

  std::vector<Rat> inverse_point(const std::vector<Rat>& x) const {
    std::vector<Rat> r(x);
    for (auto& v : r) v = -v;
    return r;  // exp coordinates: inverse is negation
  }

  std::vector<Rat> dilation(const Rat& lambda, std::vector<Rat> x) const {
    if (lambda <= 0) throw InvalidInput("dilation requires lambda > 0");
    for (int i = 0; i < dim(); ++i) {
      Rat f = 1;
      for (int k = 0; k < weight(i); ++k) f *= lambda;
      x[i] *= f;
    }
    return x;
  }

  // Left-invariant frame: column i of A(x) expresses X_i in the coordinate
  // fields.  Rows of Theta(x) = A(x)^-1 express theta_i in dx_1..dx_n.
  const std::vector<std::vector<Poly>>& frame() const {
    require_law();
    return frame_;
  }
  const std::vector<std::vector<Poly>>& coframe() const {
    require_law();
    return coframe_;
  }

  // X_i f as a polynomial in the coordinates.
  Poly frame_derivative(int i, const Poly& f) const {
    require_law();
    if (f.nvars() != dim()) throw InvalidInput("frame_derivative arity");
    Poly r(dim());
    for (int j = 0; j < dim(); ++j) {
      if (frame_[j][i].is_zero()) continue;
      r += frame_[j][i] * f.derivative(j);
    }
    return r;
  }

  static GroupPtr validate(const GroupSpec& spec);

 private:
  explicit CheckedGroup(GroupSpec spec) : spec_(std::move(spec)) {}

  void require_law() const {
    if (step_ > kMaxStep) {
      std::ostringstream os;
      os << "nilpotency step " << step_ << " exceeds supported maximum "
         << kMaxStep;
      throw StepBudgetExceeded(os.str());
    }
  }

  void build_law();
  void build_frame();

  GroupSpec spec_;
  int step_ = 0;
  int q_ = 0;
  std::vector<int> distinct_weights_;
  std::vector<Poly> law_;
  std::vector<std::vector<Poly>> frame_, coframe_;
};

inline GroupPtr CheckedGroup::validate(const GroupSpec& spec) {
  if (spec.dim <= 0) throw InvalidInput("group dimension must be positive");
  if (static_cast<int>(spec.weights.size()) != spec.dim)
    throw InvalidInput("weights list length must equal dim");
  for (int w : spec.weights)
    if (w <= 0) throw NonpositiveWeight("weights must be positive integers");
  for (int i = 1; i < spec.dim; ++i)
    if (spec.weights[i] < spec.weights[i - 1])
      throw WeightsNotSorted("basis must be ordered by nondecreasing weight");

  auto g = std::shared_ptr<CheckedGroup>(new CheckedGroup(spec));
  for (auto& [ij, terms] : spec.brackets) {
    auto [i, j] = ij;
    if (i < 0 || j < 0 || i >= spec.dim || j >= spec.dim || i >= j)
      throw InvalidInput("bracket indices must satisfy 0 <= i < j < dim");
    for (auto& t : terms) {
      if (t.k < 0 || t.k >= spec.dim)
        throw InvalidInput("bracket target index out of range");
      if (t.c != 0 && spec.weights[t.k] != spec.weights[i] + spec.weights[j]) {
        std::ostringstream os;
        os << "grading violated: [X" << i + 1 << ",X" << j + 1
           << "] hits X" << t.k + 1 << " of weight " << spec.weights[t.k]
           << " != " << spec.weights[i] + spec.weights[j];
        throw GradingViolation(os.str());
      }
    }
  }

  // Jacobi: [[Xi,Xj],Xk] + [[Xj,Xk],Xi] + [[Xk,Xi],Xj] = 0.
  auto basis = [&](int i) {
    std::vector<Rat> e(spec.dim, Rat(0));
    e[i] = 1;
    return e;
  };
  Rat zero(0);
  for (int i = 0; i < spec.dim; ++i)
    for (int j = i + 1; j < spec.dim; ++j)
      for (int k = j + 1; k < spec.dim; ++k) {
        auto t1 = g->bracket(g->bracket(basis(i), basis(j), zero), basis(k), zero);
        auto t2 = g->bracket(g->bracket(basis(j), basis(k), zero), basis(i), zero);
        auto t3 = g->bracket(g->bracket(basis(k), basis(i), zero), basis(j), zero);
        for (int m = 0; m < spec.dim; ++m)
          if (t1[m] + t2[m] + t3[m] != 0) {
            std::ostringstream os;
            os << "Jacobi identity fails on (X" << i + 1 << ",X" << j + 1
               << ",X" << k + 1 << ")";
            throw JacobiViolation(os.str());
          }
      }

  for (int w : spec.weights) {
    g->q_ += w;
    if (g->distinct_weights_.empty() || g->distinct_weights_.back() != w)
      g->distinct_weights_.push_back(w);
  }
  g->step_ = spec.weights.back();
  if (g->step_ <= kMaxStep) {
    g->build_law();
    g->build_frame();
  }
  return g;
}

inline void CheckedGroup::build_law() {
  const int n = dim();
  const int nv = 2 * n;
  Poly pzero(nv);
  // Generic algebra elements X = sum x_i E_i and Y = sum y_i E_i with
  // polynomial coordinates.
  std::vector<Poly> ex(n, pzero), ey(n, pzero);
  for (int i = 0; i < n; ++i) {
    ex[i] = Poly::variable(nv, i);
    ey[i] = Poly::variable(nv, n + i);
  }

  std::vector<Poly> acc(n, pzero);
  // Dynkin series: sum over sequences ((p_1,q_1),...,(p_m,q_m)) with
  // p_i + q_i >= 1 and total letter count <= step (longer words vanish:
  // every generator has weight >= 1).  Contribution is
  //   (-1)^(m-1)/m * 1/(total * prod p_i! q_i!) * [word] (right-nested).
  std::vector<std::pair<int, int>> seq;
  long fact[7] = {1, 1, 2, 6, 24, 120, 720};
  auto emit = [&]() {
    int total = 0;
    long denom_parts = 1;
    std::vector<int> word;  // 0 = X letter, 1 = Y letter
    for (auto& [p, q] : seq) {
      total += p + q;
      denom_parts *= fact[p] * fact[q];
      word.insert(word.end(), p, 0);
      word.insert(word.end(), q, 1);
    }
    std::vector<Poly> b = word.back() ? ey : ex;
    for (int idx = static_cast<int>(word.size()) - 2; idx >= 0; --idx)
      b = bracket(word[idx] ? ey : ex, b, pzero);
    Rat coeff = rat(seq.size() % 2 ? 1 : -1,
                    static_cast<long>(seq.size()) * total * denom_parts);
    for (int i = 0; i < n; ++i)
      if (!b[i].is_zero()) acc[i] += coeff * b[i];
  };
  auto rec = [&](auto&& self, int left) -> void {
    if (!seq.empty()) emit();
    for (int t = 1; t <= left; ++t)
      for (int p = 0; p <= t; ++p) {
        seq.push_back({p, t - p});
        self(self, left - t);
        seq.pop_back();
      }
  };
  rec(rec, step_);
  law_ = std::move(acc);
}

inline void CheckedGroup::build_frame() {
  const int n = dim();
  // Column i of A(x): d/dy_i of the group law at y = 0.
  std::vector<Poly> at_y0(2 * n);
  for (int j = 0; j < n; ++j) at_y0[j] = Poly::variable(n, j);
  for (int j = 0; j < n; ++j) at_y0[n + j] = Poly(n);
  frame_.assign(n, std::vector<Poly>(n, Poly(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      frame_[j][i] = law_[j].derivative(n + i).compose(at_y0);

  // A = I + N with N nilpotent (entries only where weight(row) > weight(col)),
  // so the inverse is the finite alternating geometric series.
  auto matmul = [&](const std::vector<std::vector<Poly>>& a,
                    const std::vector<std::vector<Poly>>& b) {
    std::vector<std::vector<Poly>> r(n, std::vector<Poly>(n, Poly(n)));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (a[i][k].is_zero()) continue;
        for (int j = 0; j < n; ++j)
          if (!b[k][j].is_zero()) r[i][j] += a[i][k] * b[k][j];
      }
    return r;
  };
  std::vector<std::vector<Poly>> nil(n, std::vector<Poly>(n, Poly(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      nil[i][j] = frame_[i][j];
      if (i == j) nil[i][j] -= Poly(n, Rat(1));
    }
  coframe_.assign(n, std::vector<Poly>(n, Poly(n)));
  for (int i = 0; i < n; ++i) coframe_[i][i] = Poly(n, Rat(1));
  std::vector<std::vector<Poly>> pw = nil;
  Rat sign(-1);
  for (int m = 1; m < n + 1; ++m) {
    bool all_zero = true;
    for (int i = 0; i < n && all_zero; ++i)
      for (int j = 0; j < n; ++j)
        if (!pw[i][j].is_zero()) { all_zero = false; break; }
    if (all_zero) break;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!pw[i][j].is_zero()) coframe_[i][j] += sign * pw[i][j];
    pw = matmul(pw, nil);
    sign = -sign;
  }
  // Sanity: Theta * A must be the identity (A is unipotent by the grading).
  auto check = matmul(coframe_, frame_);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Poly want(n, i == j ? Rat(1) : Rat(0));
      if (!(check[i][j] == want))
        throw Error("internal: coframe inversion failed");
    }
}

// Symbolic associativity check m(m(x,y),z) == m(x,m(y,z)) in 3n variables.
inline bool associativity_holds(const CheckedGroup& g) {
  const int n = g.dim();
  const auto& m = g.product_polys();
  std::vector<Poly> vars3(3 * n);
  for (int i = 0; i < 3 * n; ++i) vars3[i] = Poly::variable(3 * n, i);

  auto lift = [&](int first, int second) {
    // m with its two argument blocks replaced by blocks of the 3n variables.
    std::vector<Poly> args(2 * n);
    for (int i = 0; i < n; ++i) {
      args[i] = vars3[first * n + i];
      args[n + i] = vars3[second * n + i];
    }
    std::vector<Poly> out(n);
    for (int i = 0; i < n; ++i) out[i] = m[i].compose(args);
    return out;
  };
  auto subst = [&](const std::vector<Poly>& a, const std::vector<Poly>& b) {
    std::vector<Poly> args(2 * n);
    for (int i = 0; i < n; ++i) {
      args[i] = a[i];
      args[n + i] = b[i];
    }
    std::vector<Poly> out(n);
    for (int i = 0; i < n; ++i) out[i] = m[i].compose(args);
    return out;
  };
  std::vector<Poly> x(n), z(n);
  for (int i = 0; i < n; ++i) {
    x[i] = vars3[i];
    z[i] = vars3[2 * n + i];
  }
  auto lhs = subst(lift(0, 1), z);
  auto rhs = subst(x, lift(1, 2));
  for (int i = 0; i < n; ++i)
    if (!(lhs[i] == rhs[i])) return false;
  return true;
}

}  // namespace carnot
