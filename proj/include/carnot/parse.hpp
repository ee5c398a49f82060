#pragma once

// Text front-ends: form/polyform/polynomial literals with line/column error
// reporting, and JSON (de)serialization of group specs and chain specs.
//
// Literal syntax, by example:
//   "3/2 t1^t3 - t2^t4"            constant-coefficient 2-form
//   "x4 t3 + 1/2 x1*x2 t1^t4"      polynomial-coefficient form (t_i = theta_i)
//   "(x1 + x2^2) t1"               parenthesized coefficient polynomial
//   "w1^2 - 1/3 w1*w2"             plain polynomial (x or w variable names)
// Adjacent factors multiply; '^' raises a variable to an integer power and
// joins covector indices into a wedge mask.

#include <bit>
#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "carnot/geometry.hpp"
#include "json.hpp"

namespace carnot {

namespace detail {

class LiteralParser {
 public:
  LiteralParser(std::string text, int nvars, bool allow_x, bool allow_t)
      : text_(std::move(text)), nvars_(nvars), allow_x_(allow_x),
        allow_t_(allow_t) {}

  // sum of signed terms; each term is a product of factors with an optional
  // trailing wedge mask
  PolyForm parse() {
    skip_ws();
    if (eof()) fail("empty literal");
    std::vector<std::pair<Mask, Poly>> terms;
    int sign = read_sign(1);
    while (true) {
      auto [mask, coeff] = parse_term();
      terms.emplace_back(mask, sign < 0 ? -coeff : coeff);
      skip_ws();
      if (eof()) break;
      if (cur() == '+' || cur() == '-') {
        sign = cur() == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
        sign *= read_sign(1);  // "a + -1 b" round-trips
        if (eof()) fail("dangling sign");
      } else {
        fail("expected '+' or '-' between terms");
      }
    }
    int degree = -1;
    for (auto& [m, c] : terms) {
      int d = std::popcount(m);
      if (!c.is_zero() && degree != -1 && d != degree)
        fail("terms of mixed form degree");
      if (!c.is_zero()) degree = d;
    }
    PolyForm out(nvars_, degree == -1 ? std::popcount(terms[0].first)
                                      : degree);
    for (auto& [m, c] : terms)
      if (!c.is_zero()) out.add(m, c);
    return out;
  }

 private:
  std::pair<Mask, Poly> parse_term() {
    Poly coeff(nvars_, Rat(1));
    Mask mask = 0;
    bool any = false;
    while (true) {
      skip_ws_in_term();
      if (eof() || cur() == '+' || cur() == '-' || cur() == ')') break;
      if (mask != 0) fail("factors after a covector wedge");
      if (cur() == '(') {
        coeff *= parse_paren();
      } else if (std::isdigit(static_cast<unsigned char>(cur()))) {
        coeff *= Poly(nvars_, read_rat());
      } else if (cur() == 'x' || cur() == 'w') {
        coeff *= read_var_power();
      } else if (cur() == 't') {
        mask = read_mask();
      } else {
        fail(std::string("unexpected character '") + cur() + "'");
      }
      any = true;
    }
    if (!any) fail("empty term");
    return {mask, coeff};
  }

  Poly parse_paren() {
    expect('(');
    Poly sum(nvars_);
    int sign = read_sign(1);
    while (true) {
      Poly prod(nvars_, Rat(1));
      bool any = false;
      while (true) {
        skip_ws_in_term();
        if (eof()) fail("unterminated parenthesis");
        if (cur() == ')' || cur() == '+' || cur() == '-') break;
        if (cur() == '(')
          prod *= parse_paren();
        else if (std::isdigit(static_cast<unsigned char>(cur())))
          prod *= Poly(nvars_, read_rat());
        else if (cur() == 'x' || cur() == 'w')
          prod *= read_var_power();
        else
          fail(std::string("unexpected character '") + cur() +
               "' in coefficient");
        any = true;
      }
      if (!any) fail("empty summand in parenthesis");
      sum += sign < 0 ? -prod : prod;
      if (cur() == ')') {
        ++pos_;
        return sum;
      }
      sign = cur() == '-' ? -1 : 1;
      ++pos_;
    }
  }

  Poly read_var_power() {
    if (!allow_x_) fail("coordinate variables are not allowed here");
    ++pos_;  // 'x' or 'w'
    int i = read_index();
    if (i > nvars_) fail("variable index out of range");
    Poly v = Poly::variable(nvars_, i - 1);
    if (!eof() && cur() == '^') {
      // exponent only when followed by a digit; 'x1^t2' is a wedge error
      if (pos_ + 1 < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        ++pos_;
        int e = read_index();
        Poly p(nvars_, Rat(1));
        for (int k = 0; k < e; ++k) p *= v;
        return p;
      }
      fail("'^' after a variable needs an integer exponent");
    }
    return v;
  }

  Mask read_mask() {
    if (!allow_t_) fail("covectors are not allowed here");
    Mask m = 0;
    while (true) {
      expect('t');
      int i = read_index();
      if (i > 62) fail("covector index out of range");
      Mask bit = Mask(1) << (i - 1);
      if (m & bit) fail("repeated covector index in wedge");
      m |= bit;
      if (!eof() && cur() == '^') {
        ++pos_;
        if (eof() || cur() != 't') fail("expected covector after '^'");
        continue;
      }
      break;
    }
    return m;
  }

  Rat read_rat() {
    size_t start = pos_;
    while (!eof() && std::isdigit(static_cast<unsigned char>(cur()))) ++pos_;
    std::string num = text_.substr(start, pos_ - start);
    std::string den;
    if (!eof() && cur() == '/') {
      ++pos_;
      size_t d0 = pos_;
      while (!eof() && std::isdigit(static_cast<unsigned char>(cur()))) ++pos_;
      den = text_.substr(d0, pos_ - d0);
      if (den.empty()) fail("expected denominator digits");
      if (mpz_class(den) == 0) fail("zero denominator");
    }
    Rat q(num + (den.empty() ? "" : "/" + den));
    q.canonicalize();
    return q;
  }

  int read_index() {
    if (eof() || !std::isdigit(static_cast<unsigned char>(cur())))
      fail("expected an index");
    size_t start = pos_;
    while (!eof() && std::isdigit(static_cast<unsigned char>(cur()))) ++pos_;
    int i = std::stoi(text_.substr(start, pos_ - start));
    if (i < 1) fail("indices are 1-based");
    return i;
  }

  int read_sign(int dflt) {
    if (!eof() && (cur() == '+' || cur() == '-')) {
      int s = cur() == '-' ? -1 : 1;
      ++pos_;
      skip_ws();
      return s;
    }
    return dflt;
  }

  void expect(char c) {
    if (eof() || cur() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  // '*' acts as explicit multiplication; whitespace is implicit
  void skip_ws_in_term() {
    skip_ws();
    if (!eof() && cur() == '*') {
      ++pos_;
      skip_ws();
    }
  }
  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(cur()))) ++pos_;
  }

  bool eof() const { return pos_ >= text_.size(); }
  char cur() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1, col = 1;
    for (size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": " << msg;
    throw ParseError(os.str());
  }

  std::string text_;
  size_t pos_ = 0;
  int nvars_;
  bool allow_x_, allow_t_;
};

}  // namespace detail

// Polynomial-coefficient form in the coframe of an n-dimensional group.
inline PolyForm parse_polyform(int nvars, const std::string& text) {
  return detail::LiteralParser(text, nvars, true, true).parse();
}

// Constant-coefficient covector.
inline AlgebraicForm parse_form(const std::string& text) {
  PolyForm f = detail::LiteralParser(text, 1, false, true).parse();
  AlgebraicForm out(f.degree());
  for (auto& [m, c] : f.coef())
    out += AlgebraicForm::term(m, c.eval({Rat(0)}));
  return out;
}

// Plain polynomial over nvars variables named x1.. or w1..
inline Poly parse_poly(int nvars, const std::string& text) {
  PolyForm f = detail::LiteralParser(text, nvars, true, false).parse();
  return f.coeff(0);
}

// ---- group spec JSON -------------------------------------------------

inline Rat rat_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_string()) {
    auto q = try_parse_rat(j.get<std::string>());
    if (!q) throw ParseError("bad rational literal: " + j.get<std::string>());
    return *q;
  }
  throw ParseError("rationals must be integers or \"p/q\" strings");
}

inline GroupSpec group_spec_from_json(const nlohmann::json& j) {
  GroupSpec spec;
  if (!j.is_object() || !j.contains("dim") || !j.contains("weights"))
    throw ParseError("group spec needs 'dim' and 'weights'");
  spec.name = j.value("name", std::string("custom"));
  spec.dim = j.at("dim").get<int>();
  for (auto& w : j.at("weights")) spec.weights.push_back(w.get<int>());
  for (auto& b : j.value("brackets", nlohmann::json::array())) {
    int i = b.at("i").get<int>() - 1;  // file format is 1-based
    int jj = b.at("j").get<int>() - 1;
    std::vector<BracketTerm> terms;
    for (auto& t : b.at("terms"))
      terms.push_back({t.at("k").get<int>() - 1, rat_from_json(t.at("c"))});
    spec.brackets[{i, jj}] = std::move(terms);
  }
  return spec;
}

inline nlohmann::json group_spec_to_json(const GroupSpec& spec) {
  nlohmann::json j;
  j["name"] = spec.name;
  j["dim"] = spec.dim;
  j["weights"] = spec.weights;
  auto brackets = nlohmann::json::array();
  for (auto& [ij, terms] : spec.brackets) {
    nlohmann::json b;
    b["i"] = ij.first + 1;
    b["j"] = ij.second + 1;
    auto ts = nlohmann::json::array();
    for (auto& t : terms)
      ts.push_back({{"k", t.k + 1}, {"c", rat_str(t.c)}});
    b["terms"] = std::move(ts);
    brackets.push_back(std::move(b));
  }
  j["brackets"] = std::move(brackets);
  return j;
}

// ---- chain spec JSON -------------------------------------------------

inline std::vector<std::vector<Rat>> basis_from_json(const nlohmann::json& j) {
  std::vector<std::vector<Rat>> out;
  for (auto& row : j) {
    std::vector<Rat> v;
    for (auto& c : row) v.push_back(rat_from_json(c));
    out.push_back(std::move(v));
  }
  return out;
}

inline ComplementaryPair pair_from_json(const CheckedGroup& g,
                                        const nlohmann::json& j) {
  if (j.contains("rumin")) {
    auto xi = parse_form(j.at("rumin").get<std::string>());
    if (j.contains("transverse"))
      return pair_from_rumin(g, xi,
                             parse_form(j.at("transverse").get<std::string>()));
    return pair_from_rumin(g, xi);
  }
  if (j.contains("w")) {
    auto w = basis_from_json(j.at("w"));
    auto v = basis_from_json(j.value("v", nlohmann::json::array()));
    // complete a partial V with coordinate directions so W + V spans
    int n = g.dim();
    auto rank_of = [&](const std::vector<std::vector<Rat>>& extra) {
      RatMat m(n, static_cast<int>(w.size() + extra.size()));
      int col = 0;
      for (const auto* side : {&std::as_const(w), &extra})
        for (auto& vec : *side) {
          for (int i = 0; i < n && i < static_cast<int>(vec.size()); ++i)
            m(i, col) = vec[i];
          ++col;
        }
      return rref(m).rank();
    };
    int r = rank_of(v);
    for (int i = 0; i < n && r < n; ++i) {
      std::vector<Rat> e(n, Rat(0));
      e[i] = 1;
      auto cand = v;
      cand.push_back(e);
      if (rank_of(cand) > r) {
        v = std::move(cand);
        ++r;
      }
    }
    return make_complementary_pair(g, w, v);
  }
  throw ParseError("pair needs 'rumin' or explicit 'w'/'v' bases");
}

// Chart over a general box [a1,b1]x...x[ak,bk], reparametrized affinely onto
// the unit box.
inline CubicalChain chain_from_json(const CheckedGroup& g,
                                    const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("charts"))
    throw ParseError("chain spec needs a 'charts' list");
  CubicalChain out;
  bool first = true;
  for (auto& cj : j.at("charts")) {
    auto pair = pair_from_json(g, cj.at("pair"));
    int k = static_cast<int>(pair.w_basis.size());
    std::vector<Poly> phi(pair.v_basis.size(), Poly(k));
    if (cj.contains("phi")) {
      auto& pj = cj.at("phi");
      if (pj.size() != pair.v_basis.size())
        throw ParseError("phi must list one polynomial per V-basis vector");
      for (size_t i = 0; i < phi.size(); ++i)
        phi[i] = parse_poly(k, pj[i].get<std::string>());
    }
    Chart chart = graph_chart(g, pair, phi, cj.value("sign", 1));
    if (cj.contains("box")) {
      auto& bj = cj.at("box");
      if (static_cast<int>(bj.size()) != k)
        throw ParseError("box must give one interval per chart parameter");
      std::vector<Poly> affine;
      for (int l = 0; l < k; ++l) {
        Rat a = rat_from_json(bj[l][0]), b = rat_from_json(bj[l][1]);
        if (b <= a) throw ParseError("box intervals need a < b");
        affine.push_back(Poly(k, a) + (b - a) * Poly::variable(k, l));
      }
      for (auto& c : chart.map) c = c.compose(affine);
    }
    Rat coeff = cj.contains("coeff") ? rat_from_json(cj.at("coeff")) : Rat(1);
    if (first) {
      out.dim = chart.dim;
      first = false;
    } else if (out.dim != chart.dim) {
      throw ParseError("charts of mixed dimension in one chain");
    }
    out.terms.push_back({coeff, chart});
  }
  return out;
}

}  // namespace carnot
