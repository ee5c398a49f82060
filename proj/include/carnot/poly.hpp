#pragma once

// Sparse multivariate polynomial over exact rationals.  Exponent vectors are
// dense per-term (nvars is small: group dimension or chart dimension), terms
// are kept in a map so printing and equality are canonical.

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

// Raised when an operation would exceed a caller-imposed total-degree budget.
struct DegreeBudget : Error {
  using Error::Error;
};

class Poly {
 public:
  using Expo = std::vector<unsigned>;  // length == nvars

  Poly() : nvars_(0) {}
  explicit Poly(int nvars) : nvars_(nvars) {}
  Poly(int nvars, const Rat& c) : nvars_(nvars) {
    if (c != 0) terms_[Expo(nvars, 0)] = c;
  }

  static Poly constant(int nvars, const Rat& c) { return Poly(nvars, c); }
  static Poly variable(int nvars, int i) {
    Poly p(nvars);
    Expo e(nvars, 0);
    e.at(i) = 1;
    p.terms_[e] = 1;
    return p;
  }
  static Poly monomial(int nvars, const Expo& e, const Rat& c) {
    Poly p(nvars);
    if (static_cast<int>(e.size()) != nvars)
      throw InvalidInput("monomial exponent arity mismatch");
    if (c != 0) p.terms_[e] = c;
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Expo, Rat>& terms() const { return terms_; }

  int total_degree() const {  // -1 for the zero polynomial
    int d = -1;
    for (auto& [e, c] : terms_) {
      int s = 0;
      for (unsigned x : e) s += static_cast<int>(x);
      d = std::max(d, s);
    }
    return d;
  }

  Rat coeff(const Expo& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
  }

  Rat constant_term() const { return coeff(Expo(nvars_, 0)); }

  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.begin()->first == Expo(nvars_, 0));
  }

  Poly& operator+=(const Poly& o) {
    check_arity(o);
    for (auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    check_arity(o);
    for (auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly operator-() const {
    Poly r(nvars_);
    for (auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_arity(b);
    Poly r(a.nvars_);
    for (auto& [ea, ca] : a.terms_)
      for (auto& [eb, cb] : b.terms_) {
        Expo e = ea;
        for (int i = 0; i < a.nvars_; ++i) e[i] += eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator*(const Rat& s, Poly p) {
    if (s == 0) return Poly(p.nvars_);
    for (auto& [e, c] : p.terms_) c *= s;
    return p;
  }
  Poly& operator*=(const Rat& s) { return *this = s * *this; }
  Poly& operator/=(const Rat& s) {
    if (s == 0) throw InvalidInput("division by zero");
    return *this = Rat(1) / s * *this;
  }

  bool operator==(const Poly& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }

  Poly derivative(int var) const {
    Poly r(nvars_);
    for (auto& [e, c] : terms_) {
      if (e.at(var) == 0) continue;
      Expo f = e;
      --f[var];
      r.add_term(f, c * static_cast<long>(e[var]));
    }
    return r;
  }

  // Substitutes args[i] for variable i; args share a common arity.
  Poly compose(const std::vector<Poly>& args) const {
    if (static_cast<int>(args.size()) != nvars_)
      throw InvalidInput("compose arity mismatch");
    int m = args.empty() ? 0 : args[0].nvars();
    Poly r(m);
    for (auto& [e, c] : terms_) {
      Poly t(m, c);
      for (int i = 0; i < nvars_; ++i)
        for (unsigned k = 0; k < e[i]; ++k) t *= args[i];
      r += t;
    }
    return r;
  }

  Rat eval(const std::vector<Rat>& x) const {
    if (static_cast<int>(x.size()) != nvars_)
      throw InvalidInput("eval arity mismatch");
    Rat r = 0;
    for (auto& [e, c] : terms_) {
      Rat t = c;
      for (int i = 0; i < nvars_; ++i)
        for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
      r += t;
    }
    return r;
  }

  double eval_d(const std::vector<double>& x) const {
    double r = 0;
    for (auto& [e, c] : terms_) {
      double t = rat_double(c);
      for (int i = 0; i < nvars_; ++i)
        for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
      r += t;
    }
    return r;
  }

  void check_degree(int budget, const char* what) const {
    if (total_degree() > budget) {
      std::ostringstream os;
      os << what << ": polynomial degree " << total_degree()
         << " exceeds budget " << budget;
      throw DegreeBudget(os.str());
    }
  }

  // Renders with 1-based variable names ("x1", "w2", ...).
  std::string str(char var = 'x') const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : terms_) {
      Rat a = c;
      if (first) {
        if (a < 0) { os << "-"; a = -a; }
      } else {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      }
      first = false;
      bool has_var = false;
      std::ostringstream vs;
      for (int i = 0; i < nvars_; ++i) {
        if (e[i] == 0) continue;
        if (has_var) vs << "*";
        vs << var << (i + 1);
        if (e[i] > 1) vs << "^" << e[i];
        has_var = true;
      }
      if (!has_var) {
        os << rat_str(a);
      } else {
        if (a != 1) os << rat_str(a) << " ";
        os << vs.str();
      }
    }
    return os.str();
  }

 private:
  void check_arity(const Poly& o) const {
    if (nvars_ != o.nvars_)
      throw InvalidInput("polynomial variable-count mismatch");
  }
  void add_term(const Expo& e, const Rat& c) {
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  int nvars_;
  std::map<Expo, Rat> terms_;
};

// Enumerates all exponent vectors with total degree <= d (ordered).
inline std::vector<Poly::Expo> monomials_up_to(int nvars, int d) {
  std::vector<Poly::Expo> out;
  Poly::Expo cur(nvars, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == nvars) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[i] = static_cast<unsigned>(k);
      self(self, i + 1, left - k);
    }
    cur[i] = 0;
  };
  rec(rec, 0, d);
  return out;
}

}  // namespace carnot
