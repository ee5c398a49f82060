#pragma once

// Currents of cubical chains: evaluation by exact integration, weighted
// comass with exact fast paths and seeded frame sampling, boundary via the
// page-j differential, and lower-bound mass estimation.

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "carnot/stokes.hpp"

namespace carnot {

// No simple k-vector of the requested pure weight exists.
struct WeightNotAttainable : InvalidInput {
  using InvalidInput::InvalidInput;
};

// Degree hypotheses of the duality statement are not met.
struct HypothesisFailed : InvalidInput {
  using InvalidInput::InvalidInput;
};

// [[Sigma]]_p: integration over the chain, weight label p = degree(Sigma).
struct ChainCurrent {
  GroupPtr group;
  CubicalChain chain;
  int p = 0;

  Rat operator()(const PolyForm& omega) const {
    return integrate(*group, chain, omega);
  }
};

inline ChainCurrent chain_current(GroupPtr g, CubicalChain ch) {
  ChainCurrent t;
  t.p = ch.terms.empty() ? 0 : degree(*g, ch);
  t.group = std::move(g);
  t.chain = std::move(ch);
  return t;
}

// del^j T: evaluates T(Delta_j omega) through the canonical page-j witness.
struct BoundaryCurrent {
  const HodgeContext* ctx = nullptr;
  ChainCurrent base;
  int j = 1;

  Rat operator()(const PolyForm& omega) const {
    auto z = z_solve(*ctx, omega, j);
    if (std::holds_alternative<ZFailure>(z))
      throw ZMembershipFailed("form is not a page-" + std::to_string(j) +
                              " cocycle");
    return base(delta_r(*ctx, std::get<ZWitness>(z)));
  }
};

inline BoundaryCurrent boundary_current(const HodgeContext& ctx,
                                        ChainCurrent t, int j) {
  if (j < 1) throw InvalidInput("boundary jump must be >= 1");
  return {&ctx, std::move(t), j};
}

// Duality [[bdry Sigma]]_p(omega) = [[Sigma]]_{p+j}(Delta_j omega): the very
// computation of the spectral Stokes runner, reused verbatim.
struct DualityReport {
  SpectralStokesReport stokes;
  Rat boundary_side = 0, interior_side = 0;
  bool match = false;
};

inline DualityReport stokes_duality_check(const HodgeContext& ctx,
                                          const CubicalChain& sigma,
                                          const PolyForm& omega) {
  auto man = is_spectral_manifold(ctx, sigma, boundary(sigma));
  if (!man.ok)
    throw HypothesisFailed("chain is not a spectral manifold with boundary");
  DualityReport rep;
  rep.stokes = run_spectral_stokes(ctx, sigma, omega);
  rep.boundary_side = rep.stokes.boundary_integral;
  rep.interior_side = rep.stokes.interior_integral;
  rep.match = rep.stokes.discrepancy == 0;
  return rep;
}

// ---- weighted comass ------------------------------------------------

struct ComassEstimate {
  double value = 0;
  bool exact = false;  // true on the closed-form paths, else a lower bound
  int samples_used = 0;
};

namespace detail {

inline double det_double(std::vector<std::vector<double>> m) {
  int n = static_cast<int>(m.size());
  double det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (m[piv][c] == 0) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < n; ++r) {
      double f = m[r][c] / m[c][c];
      for (int cc = c; cc < n; ++cc) m[r][cc] -= f * m[c][cc];
    }
  }
  return det;
}

// xi evaluated on the wedge of the rows of `frame` (k x n, double).
inline double eval_on_frame(const CheckedGroup& g, const AlgebraicForm& xi,
                            const std::vector<std::vector<double>>& frame) {
  int k = static_cast<int>(frame.size());
  double total = 0;
  for (auto& [m, c] : xi.coef()) {
    std::vector<int> idx;
    for (int i = 0; i < g.dim(); ++i)
      if (m & (Mask(1) << i)) idx.push_back(i);
    std::vector<std::vector<double>> minor(k, std::vector<double>(k));
    for (int r = 0; r < k; ++r)
      for (int cc = 0; cc < k; ++cc) minor[r][cc] = frame[r][idx[cc]];
    total += c.get_d() * det_double(minor);
  }
  return total;
}

}  // namespace detail

inline ComassEstimate p_comass(const CheckedGroup& g, const AlgebraicForm& xi,
                               int p, int samples = 400,
                               std::uint64_t seed = 0) {
  const int n = g.dim();
  const int k = xi.degree();
  auto weight_masks = masks_of_degree_weight(g, k, p);
  if (weight_masks.empty())
    throw WeightNotAttainable("no simple " + std::to_string(k) +
                              "-vector of weight " + std::to_string(p));

  // single basis covector: 1 on its own dual frame, 0 on every other pure
  // weight
  if (xi.coef().size() == 1) {
    auto& [m, c] = *xi.coef().begin();
    double v = mask_weight(g, m) == p ? std::fabs(c.get_d()) : 0.0;
    return {v, true, 0};
  }

  // 1-forms: the supremum over the unit sphere of the weight-p layer is the
  // Euclidean norm of the layer component
  if (k == 1) {
    Rat norm_sq = 0;
    for (auto& [m, c] : xi.coef())
      if (mask_weight(g, m) == p) norm_sq += c * c;
    return {std::sqrt(norm_sq.get_d()), true, 0};
  }

  // layer-multiplicity profiles realizing weight p in degree k
  std::set<std::vector<int>> profiles;
  for (Mask m : weight_masks) {
    std::vector<int> prof;
    for (int i = 0; i < n; ++i)
      if (m & (Mask(1) << i)) prof.push_back(g.weights()[i]);
    profiles.insert(prof);
  }

  double best = 0;
  // canonical frames first: every dual basis frame of a weight-p mask
  for (Mask m : weight_masks) {
    std::vector<std::vector<double>> frame;
    for (int i = 0; i < n; ++i)
      if (m & (Mask(1) << i)) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        frame.push_back(e);
      }
    best = std::max(best, std::fabs(detail::eval_on_frame(g, xi, frame)));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int used = 0;
  for (int s = 0; s < samples; ++s) {
    for (auto& prof : profiles) {
      // orthonormal vectors drawn layer by layer so the wedge has pure
      // weight p; vectors in distinct layers are automatically orthogonal
      std::vector<std::vector<double>> frame;
      bool ok = true;
      size_t i = 0;
      while (i < prof.size() && ok) {
        size_t j = i;
        while (j < prof.size() && prof[j] == prof[i]) ++j;
        std::vector<std::vector<double>> block;
        for (size_t v = i; v < j; ++v) {
          std::vector<double> cand(n, 0.0);
          for (int c = 0; c < n; ++c)
            if (g.weights()[c] == prof[i]) cand[c] = gauss(rng);
          for (auto& prev : block) {
            double dot = 0;
            for (int c = 0; c < n; ++c) dot += cand[c] * prev[c];
            for (int c = 0; c < n; ++c) cand[c] -= dot * prev[c];
          }
          double norm = 0;
          for (double x : cand) norm += x * x;
          norm = std::sqrt(norm);
          if (norm < 1e-9) {
            ok = false;
            break;
          }
          for (auto& x : cand) x /= norm;
          block.push_back(std::move(cand));
        }
        frame.insert(frame.end(), block.begin(), block.end());
        i = j;
      }
      if (!ok) continue;
      ++used;
      best = std::max(best, std::fabs(detail::eval_on_frame(g, xi, frame)));
    }
  }
  return {best, false, used};
}

// ---- mass -----------------------------------------------------------

// Supremum of |T| over a finite probe set of comass-normalized forms; a
// certified lower bound for the mass (the true supremum ranges over all
// admissible forms, with quotient comass taken on the canonical witness).
struct MassEstimate {
  double value = 0;
  bool lower_bound = true;
  int probes_used = 0;
};

inline MassEstimate mass_estimate(const ChainCurrent& t,
                                  const std::vector<PolyForm>& probes) {
  MassEstimate est;
  for (auto& omega : probes) {
    est.value = std::max(est.value, std::fabs(t(omega).get_d()));
    ++est.probes_used;
  }
  return est;
}

}  // namespace carnot
