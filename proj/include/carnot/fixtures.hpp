#pragma once

// Named example groups used throughout the tests and the CLI: the first and
// second Heisenberg groups, the product of the first Heisenberg group with a
// line, and the 5-dimensional free-nilpotent (Cartan) group.

#include "carnot/group.hpp"

namespace carnot {

// Heisenberg group H^1: basis (X, Y, T), weights (1,1,2), [X,Y] = T.
inline GroupPtr heisenberg1() {
  GroupSpec s;
  s.name = "h1";
  s.dim = 3;
  s.weights = {1, 1, 2};
  s.brackets[{0, 1}] = {{2, Rat(1)}};
  return CheckedGroup::validate(s);
}

// Heisenberg group H^2: basis (X1, X2, Y1, Y2, T), weights (1,1,1,1,2),
// [X1,Y1] = [X2,Y2] = T.
inline GroupPtr heisenberg2() {
  GroupSpec s;
  s.name = "h2";
  s.dim = 5;
  s.weights = {1, 1, 1, 1, 2};
  s.brackets[{0, 2}] = {{4, Rat(1)}};
  s.brackets[{1, 3}] = {{4, Rat(1)}};
  return CheckedGroup::validate(s);
}

// H^1 x R: basis (X1, X2, X3, X4), weights (1,1,1,2), [X1,X2] = X4.
// X3 spans the Euclidean factor.
inline GroupPtr h1xr() {
  GroupSpec s;
  s.name = "h1xr";
  s.dim = 4;
  s.weights = {1, 1, 1, 2};
  s.brackets[{0, 1}] = {{3, Rat(1)}};
  return CheckedGroup::validate(s);
}

// Free-nilpotent group of rank 2 and step 3 (Cartan group): weights
// (1,1,2,3,3), [X1,X2]=X3, [X1,X3]=X4, [X2,X3]=X5.
inline GroupPtr cartan() {
  GroupSpec s;
  s.name = "cartan";
  s.dim = 5;
  s.weights = {1, 1, 2, 3, 3};
  s.brackets[{0, 1}] = {{2, Rat(1)}};
  s.brackets[{0, 2}] = {{3, Rat(1)}};
  s.brackets[{1, 2}] = {{4, Rat(1)}};
  return CheckedGroup::validate(s);
}

// Abelian R^n, all weights 1 (handy degenerate case).
inline GroupPtr abelian(int n) {
  GroupSpec s;
  s.name = "r" + std::to_string(n);
  s.dim = n;
  s.weights.assign(n, 1);
  return CheckedGroup::validate(s);
}

inline GroupPtr fixture_group(const std::string& name) {
  if (name == "h1") return heisenberg1();
  if (name == "h2") return heisenberg2();
  if (name == "h1xr") return h1xr();
  if (name == "cartan") return cartan();
  if (name.size() > 1 && name[0] == 'r') {
    bool digits = true;
    for (size_t i = 1; i < name.size(); ++i)
      if (!isdigit(static_cast<unsigned char>(name[i]))) digits = false;
    if (digits) return abelian(std::stoi(name.substr(1)));
  }
  throw InvalidInput("unknown fixture group: " + name);
}

inline std::vector<GroupPtr> all_fixture_groups() {
  return {heisenberg1(), heisenberg2(), h1xr(), cartan()};
}

}  // namespace carnot
