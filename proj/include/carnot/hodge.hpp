#pragma once

// Fiberwise Hodge machinery for the weight-preserving differential d_0
// (adjoint, restricted pseudo-inverse, projection onto ker Box_0, three-way
// split of each fiber) and the second-order operators built from it: Pi_E,
// the partial_r recursion, d_c and its weight components.
//
// d_0 is constant-coefficient, so one exact factorization per (degree,
// weight) block serves every polynomial coefficient.  Blocks are cached.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "carnot/exterior.hpp"
#include "carnot/polyform.hpp"

namespace carnot {

struct NotRuminForm : Error {
  using Error::Error;
};
struct PreconditionViolated : Error {
  using Error::Error;
};

struct HodgeSplit {
  int degree = 0;
  int weight = 0;
  Subspace im_d0, ker_box0, im_delta0;
};

class HodgeContext {
 public:
  explicit HodgeContext(GroupPtr g) : g_(std::move(g)) {}

  const CheckedGroup& group() const { return *g_; }
  GroupPtr group_ptr() const { return g_; }

  // ---- fiberwise operators on covectors ------------------------------

  AlgebraicForm delta0(const AlgebraicForm& f) const {
    // adjoint of d_0: transpose of the block mapping into this fiber
    return apply_blockwise(f, -1, [&](const Block& b) { return b.d0_down.transpose(); },
                           [&](int k, int p) { return block(k, p); });
  }

  AlgebraicForm d0_inverse(const AlgebraicForm& f) const {
    return apply_blockwise(f, -1, [&](const Block& b) { return b.d0_down_pinv; },
                           [&](int k, int p) { return block(k, p); });
  }

  AlgebraicForm pi0(const AlgebraicForm& f) const {
    return apply_blockwise(f, 0, [&](const Block& b) { return b.pi0; },
                           [&](int k, int p) { return block(k, p); });
  }
  AlgebraicForm pr_im_d0(const AlgebraicForm& f) const {
    return apply_blockwise(f, 0, [&](const Block& b) { return b.proj_im_d0; },
                           [&](int k, int p) { return block(k, p); });
  }
  AlgebraicForm pr_im_delta0(const AlgebraicForm& f) const {
    return apply_blockwise(f, 0,
                           [&](const Block& b) { return b.proj_im_delta0; },
                           [&](int k, int p) { return block(k, p); });
  }

  // ---- the same operators extended coefficient-linearly to PolyForm ---

  PolyForm delta0(const PolyForm& f) const { return lift(f, -1, Block::kDelta0); }
  PolyForm d0_inverse(const PolyForm& f) const { return lift(f, -1, Block::kD0Inv); }
  PolyForm pi0(const PolyForm& f) const { return lift(f, 0, Block::kPi0); }
  PolyForm pr_im_d0(const PolyForm& f) const { return lift(f, 0, Block::kPrImD0); }
  PolyForm pr_im_delta0(const PolyForm& f) const {
    return lift(f, 0, Block::kPrImDelta0);
  }

  bool is_rumin(const PolyForm& f) const { return pi0(f) == f; }

  // ---- split tables ---------------------------------------------------

  HodgeSplit hodge_split(int k, int p) const {
    auto b = block(k, p);
    HodgeSplit s;
    s.degree = k;
    s.weight = p;
    s.im_d0 = subspace_from_columns(k, p, b->im_d0_basis);
    s.ker_box0 = subspace_from_columns(k, p, b->ker_box0_basis);
    s.im_delta0 = subspace_from_columns(k, p, b->im_delta0_basis);
    return s;
  }

  // ker Box_0 fibers per weight: the degree-k Rumin covector space.
  std::vector<std::pair<int, Subspace>> rumin_basis(int k) const {
    std::vector<std::pair<int, Subspace>> out;
    for (int p : fiber_weights(k)) {
      auto s = hodge_split(k, p);
      if (s.ker_box0.dim() > 0) out.push_back({p, s.ker_box0});
    }
    return out;
  }

  std::vector<int> fiber_weights(int k) const {
    std::vector<int> ws;
    for (Mask m : masks_of_degree(*g_, k)) {
      int w = mask_weight(*g_, m);
      if (std::find(ws.begin(), ws.end(), w) == ws.end()) ws.push_back(w);
    }
    std::sort(ws.begin(), ws.end());
    return ws;
  }

  // ---- Rumin operators ------------------------------------------------

  // b = -d0^{-1} (d - d0); raises weight, hence nilpotent.
  PolyForm b_op(const PolyForm& f) const {
    PolyForm high(f.nvars(), f.degree() + 1);
    for (int w : g_->distinct_weights()) high += d_jump(*g_, f, w);
    return -d0_inverse(high);
  }

  // (Id - b)^{-1} via the finite Neumann series.
  PolyForm neumann(PolyForm f) const {
    PolyForm acc = f;
    int guard = g_->homogeneous_dim() + 2;
    for (int j = 0; j < guard && !f.is_zero(); ++j) {
      f = b_op(f);
      acc += f;
    }
    if (!f.is_zero()) throw Error("internal: Neumann series did not terminate");
    return acc;
  }

  PolyForm pi(const PolyForm& f) const {
    PolyForm t1 = neumann(d0_inverse(d(*g_, f)));
    PolyForm t2 = d(*g_, neumann(d0_inverse(f)));
    return t1 + t2;
  }

  PolyForm pi_e(const PolyForm& f) const { return f - pi(f); }

  // partial_r = d_r - sum_{j<r} d_{r-j} d0^{-1} partial_j.
  PolyForm partial_r(const PolyForm& f, int r) const {
    if (r < 1) throw InvalidInput("partial_r needs r >= 1");
    std::map<int, PolyForm> memo;
    return partial_impl(f, r, memo);
  }

  // d_c^r = Pi_0 partial_r  (the two correction terms subtract the Im d0 and
  // Im delta0 parts).
  PolyForm dc_r(const PolyForm& f, int r) const {
    require_rumin(f, "dc_r");
    return pi0(partial_r(f, r));
  }

  // d_c on a form with fiberwise-E0 coefficients: Pi_0 of the sum of all
  // partial_r (r bounded by the homogeneous dimension).
  PolyForm dc(const PolyForm& f) const {
    require_rumin(f, "dc");
    std::map<int, PolyForm> memo;
    PolyForm acc(f.nvars(), f.degree() + 1);
    for (int r = 1; r <= g_->homogeneous_dim(); ++r)
      acc += partial_impl(f, r, memo);
    return pi0(acc);
  }

  // Alternate global formula d_c = Pi_0 d Pi_E (defined on all forms).
  PolyForm dc_via_pi(const PolyForm& f) const { return pi0(d(*g_, pi_e(f))); }

  // Residual of: d0 partial_r a = -sum_{i=1}^{r-1} d_i (partial_{r-i}
  // - d0 d0^{-1} partial_{r-i}) a   for a in ker d0.
  PolyForm d0_partial_identity_check(const PolyForm& f, int r) const {
    if (!d0(*g_, f).is_zero())
      throw PreconditionViolated("form is not in ker d0");
    std::map<int, PolyForm> memo;
    PolyForm lhs = d0(*g_, partial_impl(f, r, memo));
    PolyForm rhs(f.nvars(), f.degree() + 2);
    for (int i = 1; i < r; ++i) {
      PolyForm pj = partial_impl(f, r - i, memo);
      rhs -= d_jump(*g_, pj - pr_im_d0(pj), i);
    }
    return lhs - rhs;
  }

  // Part of d Pi_E a - d_c a lying outside Im delta0 (must vanish for a
  // with fiberwise-E0 coefficients).
  PolyForm leibniz_identity_check(const PolyForm& f) const {
    require_rumin(f, "leibniz_identity_check");
    PolyForm diff = d(*g_, pi_e(f)) - dc(f);
    return diff - pr_im_delta0(diff);
  }

 private:
  struct Block {
    std::vector<Mask> basis;          // fiber basis of (k,p)
    std::map<Mask, int> pos;
    RatMat d0_up;                     // d0: (k,p) -> (k+1,p)
    RatMat d0_down;                   // d0: (k-1,p) -> (k,p)
    RatMat d0_down_pinv;              // pinv of d0_down
    RatMat proj_im_d0, proj_im_delta0, pi0;
    std::vector<std::vector<Rat>> im_d0_basis, ker_box0_basis,
        im_delta0_basis;              // columns in fiber coordinates

    enum Kind { kDelta0, kD0Inv, kPi0, kPrImD0, kPrImDelta0 };
    const RatMat& matrix(Kind kind, RatMat& scratch) const {
      switch (kind) {
        case kDelta0: scratch = d0_down.transpose(); return scratch;
        case kD0Inv: return d0_down_pinv;
        case kPi0: return pi0;
        case kPrImD0: return proj_im_d0;
        case kPrImDelta0: return proj_im_delta0;
      }
      throw Error("unreachable");
    }
  };

  std::shared_ptr<const Block> block(int k, int p) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(k, p);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto b = build_block(k, p);
    cache_[key] = b;
    return b;
  }

  std::shared_ptr<const Block> build_block(int k, int p) const {
    auto b = std::make_shared<Block>();
    b->basis = masks_of_degree_weight(*g_, k, p);
    for (size_t i = 0; i < b->basis.size(); ++i)
      b->pos[b->basis[i]] = static_cast<int>(i);
    int dim = static_cast<int>(b->basis.size());

    auto matrix_of_d0 = [&](int from_k) {
      // d0 from (from_k, p) fiber to (from_k + 1, p) fiber
      auto dom = masks_of_degree_weight(*g_, from_k, p);
      auto cod = masks_of_degree_weight(*g_, from_k + 1, p);
      std::map<Mask, int> cpos;
      for (size_t i = 0; i < cod.size(); ++i) cpos[cod[i]] = static_cast<int>(i);
      RatMat m(static_cast<int>(cod.size()), static_cast<int>(dom.size()));
      for (size_t j = 0; j < dom.size(); ++j) {
        AlgebraicForm df = ce_d_basis(*g_, dom[j]);
        for (auto& [mm, c] : df.coef()) m(cpos.at(mm), static_cast<int>(j)) = c;
      }
      return m;
    };

    b->d0_up = matrix_of_d0(k);
    b->d0_down = k >= 1 ? matrix_of_d0(k - 1) : RatMat(dim, 0);
    const RatMat& down = b->d0_down;
    b->d0_down_pinv = pseudo_inverse(down);
    b->proj_im_d0 = down * b->d0_down_pinv;
    b->proj_im_delta0 = pseudo_inverse(b->d0_up) * b->d0_up;
    b->pi0 = RatMat::identity(dim) - b->proj_im_d0 - b->proj_im_delta0;

    // Subspace bases: Im d0 = column space of `down`; Im delta0 = row space
    // of d0_up; ker Box_0 = ker d0_up  intersect  ker down^T.
    for (int j = 0; j < down.cols(); ++j) {
      std::vector<Rat> col(dim);
      for (int i = 0; i < dim; ++i) col[i] = down(i, j);
      b->im_d0_basis.push_back(std::move(col));
    }
    RatMat upt = b->d0_up.transpose();
    for (int j = 0; j < upt.cols(); ++j) {
      std::vector<Rat> col(dim);
      for (int i = 0; i < dim; ++i) col[i] = upt(i, j);
      b->im_delta0_basis.push_back(std::move(col));
    }
    RatMat stacked(b->d0_up.rows() + down.cols(), dim);
    for (int i = 0; i < b->d0_up.rows(); ++i)
      for (int j = 0; j < dim; ++j) stacked(i, j) = b->d0_up(i, j);
    for (int i = 0; i < down.cols(); ++i)
      for (int j = 0; j < dim; ++j)
        stacked(b->d0_up.rows() + i, j) = down(j, i);
    b->ker_box0_basis = nullspace(stacked);
    return b;
  }

  // Applies a per-block matrix to a covector; degree_shift: 0 for
  // projections, -1 for delta0/d0_inverse.
  template <class MatFn, class BlockFn>
  AlgebraicForm apply_blockwise(const AlgebraicForm& f, int degree_shift,
                                MatFn mat_of, BlockFn block_of) const {
    AlgebraicForm out(f.degree() + degree_shift);
    for (auto& [p, comp] : weight_split(*g_, f)) {
      auto b = block_of(f.degree(), p);
      std::vector<Rat> v(b->basis.size(), Rat(0));
      for (auto& [m, c] : comp.coef()) v[b->pos.at(m)] = c;
      RatMat mat = mat_of(*b);
      auto w = mat.apply(v);
      auto cod = degree_shift == 0
                     ? b->basis
                     : masks_of_degree_weight(*g_, f.degree() - 1, p);
      for (size_t i = 0; i < w.size(); ++i)
        if (w[i] != 0) out.add(cod[i], w[i]);
    }
    return out;
  }

  PolyForm lift(const PolyForm& f, int degree_shift, Block::Kind kind) const {
    PolyForm out(f.nvars(), f.degree() + degree_shift);
    for (auto& [p, comp] : weight_split(*g_, f)) {
      auto b = block(f.degree(), p);
      std::vector<Poly> v(b->basis.size(), Poly(f.nvars()));
      for (auto& [m, c] : comp.coef()) v[b->pos.at(m)] = c;
      RatMat scratch;
      const RatMat& mat = b->matrix(kind, scratch);
      auto cod = degree_shift == 0
                     ? b->basis
                     : masks_of_degree_weight(*g_, f.degree() - 1, p);
      for (int i = 0; i < mat.rows(); ++i) {
        Poly acc(f.nvars());
        for (int j = 0; j < mat.cols(); ++j)
          if (mat(i, j) != 0 && !v[j].is_zero()) acc += mat(i, j) * v[j];
        if (!acc.is_zero()) out.add(cod[i], acc);
      }
    }
    return out;
  }

  Subspace subspace_from_columns(
      int k, int p, const std::vector<std::vector<Rat>>& cols) const {
    auto basis = masks_of_degree_weight(*g_, k, p);
    std::vector<AlgebraicForm> span;
    for (auto& v : cols) {
      AlgebraicForm f(k);
      for (size_t i = 0; i < basis.size(); ++i)
        if (v[i] != 0) f.add(basis[i], v[i]);
      span.push_back(std::move(f));
    }
    return make_subspace(*g_, k, p, span);
  }

  PolyForm partial_impl(const PolyForm& f, int r,
                        std::map<int, PolyForm>& memo) const {
    auto it = memo.find(r);
    if (it != memo.end()) return it->second;
    PolyForm out = d_jump(*g_, f, r);
    for (int j = 1; j < r; ++j) {
      PolyForm pj = partial_impl(f, j, memo);
      if (pj.is_zero()) continue;
      out -= d_jump(*g_, d0_inverse(pj), r - j);
    }
    memo.emplace(r, out);
    return out;
  }

  void require_rumin(const PolyForm& f, const char* what) const {
    if (!is_rumin(f))
      throw NotRuminForm(std::string(what) +
                         ": coefficients are not fiberwise in ker Box_0");
  }

  GroupPtr g_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::shared_ptr<const Block>> cache_;
};

}  // namespace carnot
