// Copyright 2026 the bmkp authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BMKP_RATIONAL_HPP
#define BMKP_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bmkp {

/// Exact rational scalar. GMP keeps values canonical (reduced, positive
/// denominator) through arithmetic; every correctness-bearing comparison in
/// this library is performed on these, never on doubles.
using Rat = mpq_class;
using Int = mpz_class;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw Error("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat rat(const Int& num, const Int& den) {
  if (den == 0) throw Error("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p", "p/q" or "-p/q" with arbitrary-precision integer parts.
inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw Error("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      Rat r(Int(s));
      r.canonicalize();
      return r;
    }
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    return rat(num, den);
  } catch (const std::invalid_argument&) {
    throw Error("malformed rational literal '" + s + "'");
  }
}

/// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string rat_str(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline bool rat_is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int rat_floor(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

inline Int rat_ceil(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

inline Rat rat_pow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  if (base == 0) {
    if (e < 0) throw Error("0 raised to a negative power");
    return Rat(0);
  }
  Rat b = e > 0 ? base : Rat(1) / base;
  unsigned long k = static_cast<unsigned long>(e > 0 ? e : -e);
  Rat acc(1);
  while (k) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  return acc;
}

/// Smallest integer k with base^k >= x. Requires base > 1 and x > 0.
inline long ceil_log(const Rat& base, const Rat& x) {
  if (base <= 1 || x <= 0) throw Error("ceil_log requires base > 1, x > 0");
  long k = 0;
  Rat p(1);
  if (p >= x) {
    // walk down while base^(k-1) still >= x
    while (p / base >= x) {
      p /= base;
      --k;
    }
    return k;
  }
  while (p < x) {
    p *= base;
    ++k;
  }
  return k;
}

/// Largest integer k with base^k <= x. Requires base > 1 and x > 0.
inline long floor_log(const Rat& base, const Rat& x) {
  long k = ceil_log(base, x);
  return rat_pow(base, k) == x ? k : k - 1;
}

inline double rat_double(const Rat& r) { return r.get_d(); }

/// FNV-1a over a string; used for instance fingerprints in run records.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace bmkp

#endif  // BMKP_RATIONAL_HPP
