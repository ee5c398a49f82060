#pragma once

// Exact rational scalar used throughout the engine, plus parse/format helpers.
// Backed by GMP so intermediate results never overflow or round.

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>

namespace carnot {

using Rat = mpq_class;

// Base class for every error the engine raises on bad input or broken
// preconditions.  Callers that want a single catch-all can use this.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed literals, config files, CLI arguments.
struct ParseError : Error {
  using Error::Error;
};

// Structurally invalid mathematical input (bad grading, Jacobi failure, ...).
struct InvalidInput : Error {
  using Error::Error;
};

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw InvalidInput("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p", "-p", or "p/q" with optional surrounding whitespace.
inline std::optional<Rat> try_parse_rat(const std::string& text) {
  size_t a = text.find_first_not_of(" \t");
  size_t b = text.find_last_not_of(" \t");
  if (a == std::string::npos) return std::nullopt;
  std::string core = text.substr(a, b - a + 1);
  // mpq_class accepts "p/q" directly but tolerates some junk; validate first.
  size_t slash = core.find('/');
  auto is_int = [](const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!is_int(core)) return std::nullopt;
  } else {
    std::string den = core.substr(slash + 1);
    if (!is_int(core.substr(0, slash)) || !is_int(den)) return std::nullopt;
    if (mpz_class(den) == 0) return std::nullopt;
  }
  Rat q(core);
  q.canonicalize();
  return q;
}

inline Rat parse_rat(const std::string& text) {
  auto q = try_parse_rat(text);
  if (!q) throw ParseError("bad rational literal: '" + text + "'");
  return *q;
}

// Canonical "p" / "p/q" rendering; round-trips bit-exactly through parse_rat.
inline std::string rat_str(const Rat& q) {
  return q.get_str();
}

inline double rat_double(const Rat& q) { return q.get_d(); }

}  // namespace carnot
