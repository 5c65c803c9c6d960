#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "pic/field.hpp"
#include "pic/linear_form.hpp"
#include "pic/poly.hpp"
#include "pic/rng.hpp"

namespace pic {

enum class Family { rs, frs, additive_frs, mult, affine_frs };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::rs: return "rs";
    case Family::frs: return "frs";
    case Family::additive_frs: return "additive_frs";
    case Family::mult: return "mult";
    case Family::affine_frs: return "affine_frs";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "rs") return Family::rs;
  if (s == "frs") return Family::frs;
  if (s == "additive_frs" || s == "additive") return Family::additive_frs;
  if (s == "mult") return Family::mult;
  if (s == "affine_frs" || s == "affine") return Family::affine_frs;
  throw ValidationError("unknown code family '" + s + "'");
}

struct FamilySpec {
  Family family = Family::rs;
  std::uint64_t p = 0;
  std::size_t k = 0, n = 0, s = 1;
  Elem gamma = 0;  // frs
  Elem alpha = 1;  // affine_frs
  Elem beta = 0;   // additive_frs, affine_frs
  std::optional<std::vector<Elem>> points;
};

/// A received or transmitted word: one residue (degree < s) per evaluation point.
using Codeword = std::vector<Poly>;

struct PolyIdealCode {
  Field F;
  FamilySpec spec;
  std::vector<Elem> points;
  std::vector<Poly> moduli;

  std::size_t n() const { return moduli.size(); }
  std::size_t s() const { return spec.s; }
  std::size_t k() const { return spec.k; }
};

/// The i-fold iterate of the family's point map applied to a, for j < s.
inline std::vector<Elem> point_orbit(const Field& F, const FamilySpec& spec, Elem a) {
  std::vector<Elem> orbit;
  orbit.reserve(spec.s);
  switch (spec.family) {
    case Family::rs:
    case Family::mult:
      orbit.push_back(a);
      break;
    case Family::frs: {
      Elem x = a;
      for (std::size_t j = 0; j < spec.s; ++j, x = F.mul(x, spec.gamma)) orbit.push_back(x);
      break;
    }
    case Family::additive_frs: {
      Elem x = a;
      for (std::size_t j = 0; j < spec.s; ++j, x = F.add(x, spec.beta)) orbit.push_back(x);
      break;
    }
    case Family::affine_frs: {
      const LinearForm l(F, spec.alpha, spec.beta);
      Elem x = a;
      for (std::size_t j = 0; j < spec.s; ++j, x = l.apply(x)) orbit.push_back(x);
      break;
    }
  }
  return orbit;
}

namespace detail {

// Distinct points of an orbit; empty if the orbit is degenerate (shorter than the family requires).
inline std::vector<Elem> orbit_support(const Field& F, const FamilySpec& spec, Elem a) {
  std::vector<Elem> o = point_orbit(F, spec, a);
  std::vector<Elem> d = o;
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  std::size_t want = o.size();
  if (spec.family == Family::affine_frs) {
    const LinearForm l(F, spec.alpha, spec.beta);
    want = static_cast<std::size_t>(std::min<std::uint64_t>(spec.s, l.order()));
  }
  if (d.size() != want) return {};
  return d;
}

}  // namespace detail

/// Greedy ascending scan for n points whose orbits are full and pairwise disjoint.
inline std::vector<Elem> pick_evaluation_points(const Field& F, const FamilySpec& spec) {
  std::vector<Elem> pts;
  std::unordered_set<Elem> used;
  for (std::uint64_t a = 0; a < F.modulus() && pts.size() < spec.n; ++a) {
    auto sup = detail::orbit_support(F, spec, a);
    if (sup.empty()) continue;
    bool clash = false;
    for (Elem x : sup) {
      if (used.count(x)) {
        clash = true;
        break;
      }
    }
    if (clash) continue;
    used.insert(sup.begin(), sup.end());
    pts.push_back(a);
  }
  if (pts.size() < spec.n) {
    throw ValidationError("field F_" + std::to_string(F.modulus()) + " has only " + std::to_string(pts.size()) +
                          " admissible evaluation points, need " + std::to_string(spec.n));
  }
  return pts;
}

/// The modulus E_a for one evaluation point.
inline Poly family_modulus(const Field& F, const FamilySpec& spec, Elem a) {
  if (spec.family == Family::mult) return pow(F, Poly::linear_root(F, a), spec.s);
  return product_of_linear(F, point_orbit(F, spec, a));
}

inline void validate_family(const Field& F, const FamilySpec& spec) {
  if (spec.k == 0 || spec.n == 0 || spec.s == 0) throw ValidationError("k, n and s must be positive");
  if (spec.k >= spec.s * spec.n) throw ValidationError("need k < s*n");
  const std::uint64_t p = F.modulus();
  switch (spec.family) {
    case Family::rs:
      if (spec.s != 1) throw ValidationError("rs requires s = 1");
      break;
    case Family::frs:
      if (spec.gamma % p == 0) throw ValidationError("frs requires gamma != 0");
      if (F.order(spec.gamma % p) < spec.s) throw ValidationError("frs requires order(gamma) >= s");
      break;
    case Family::additive_frs:
      if (spec.beta % p == 0) throw ValidationError("additive_frs requires beta != 0");
      if (p < spec.s) throw ValidationError("additive_frs requires char >= s");
      break;
    case Family::mult:
      if (p < static_cast<std::uint64_t>(spec.s) * spec.n) throw ValidationError("mult requires char >= s*n");
      break;
    case Family::affine_frs:
      if (spec.alpha % p == 0) throw ValidationError("affine_frs requires alpha != 0");
      break;
  }
}

/// Build and validate a code: moduli monic of degree s and pairwise coprime.
inline PolyIdealCode build_code(const FamilySpec& spec) {
  Field F(spec.p);
  validate_family(F, spec);
  PolyIdealCode code{F, spec, {}, {}};
  if (spec.points) {
    if (spec.points->size() != spec.n) throw ValidationError("points list must have exactly n entries");
    for (Elem a : *spec.points) {
      if (a >= F.modulus()) throw ValidationError("evaluation point out of range");
      if (detail::orbit_support(F, spec, a).empty()) {
        throw ValidationError("evaluation point " + std::to_string(a) + " has a degenerate orbit");
      }
    }
    code.points = *spec.points;
  } else {
    code.points = pick_evaluation_points(F, spec);
  }
  for (Elem a : code.points) code.moduli.push_back(family_modulus(F, spec, a));
  for (std::size_t i = 0; i < code.moduli.size(); ++i) {
    const Poly& E = code.moduli[i];
    if (!E.is_monic() || E.degree() != static_cast<long>(spec.s)) {
      throw ValidationError("modulus " + std::to_string(i) + " is not monic of degree s");
    }
    for (std::size_t j = i + 1; j < code.moduli.size(); ++j) {
      if (gcd(F, E, code.moduli[j]).degree() != 0) {
        throw ValidationError("moduli " + std::to_string(i) + " and " + std::to_string(j) + " are not coprime");
      }
    }
  }
  return code;
}

inline void check_message(const PolyIdealCode& code, const Poly& f) {
  if (f.size() > code.k()) throw ValidationError("message degree must be < k");
}

inline void check_received(const PolyIdealCode& code, const Codeword& y) {
  if (y.size() != code.n()) throw ValidationError("received word must have n symbols");
  for (const auto& sym : y) {
    if (sym.size() > code.s()) throw ValidationError("received symbol degree must be < s");
    for (Elem c : sym.coeffs())
      if (c >= code.F.modulus()) throw ValidationError("received symbol has an unreduced coefficient");
  }
}

inline Codeword encode(const PolyIdealCode& code, const Poly& f) {
  check_message(code, f);
  Codeword out;
  out.reserve(code.n());
  for (const auto& E : code.moduli) out.push_back(mod(code.F, f, E));
  return out;
}

inline std::size_t hamming_agreement(const PolyIdealCode& code, const Codeword& y, const Poly& f) {
  std::size_t a = 0;
  for (std::size_t i = 0; i < code.n(); ++i)
    if (mod(code.F, f, code.moduli[i]) == y[i]) ++a;
  return a;
}

inline std::size_t hamming_agreement(const Codeword& a, const Codeword& b) {
  std::size_t t = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    if (a[i] == b[i]) ++t;
  return t;
}

struct ListEntry {
  Poly message;
  std::size_t agreement = 0;
  bool operator==(const ListEntry& o) const { return message == o.message && agreement == o.agreement; }
};

/// Descending agreement, then lexicographic on (c_0, c_1, ...).
inline bool list_order(const ListEntry& a, const ListEntry& b) {
  if (a.agreement != b.agreement) return a.agreement > b.agreement;
  const std::size_t n = std::max(a.message.size(), b.message.size());
  for (std::size_t i = 0; i < n; ++i)
    if (a.message[i] != b.message[i]) return a.message[i] < b.message[i];
  return false;
}

/// Every message with agreement >= t, by exhaustive enumeration.
inline std::vector<ListEntry> brute_force_list(const PolyIdealCode& code, const Codeword& y, std::size_t t,
                                               std::uint64_t budget = 1ULL << 24) {
  check_received(code, y);
  const Field& F = code.F;
  const std::uint64_t q = F.modulus();
  const std::size_t k = code.k(), n = code.n(), s = code.s();
  double total = std::pow(static_cast<double>(q), static_cast<double>(k));
  if (total > static_cast<double>(budget)) throw ValidationError("brute force: q^k exceeds the enumeration budget");
  std::vector<std::vector<Elem>> basis(k, std::vector<Elem>(n * s, 0));
  for (std::size_t e = 0; e < k; ++e) {
    Codeword c = encode(code, Poly::monomial(1, e));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < s; ++j) basis[e][i * s + j] = c[i][j];
  }
  std::vector<Elem> target(n * s, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < s; ++j) target[i * s + j] = y[i][j];
  std::vector<Elem> cur(n * s, 0);
  std::vector<Elem> digits(k, 0);
  std::vector<ListEntry> out;
  const std::uint64_t count = static_cast<std::uint64_t>(total + 0.5);
  for (std::uint64_t it = 0; it < count; ++it) {
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bool eq = true;
      for (std::size_t j = 0; j < s && eq; ++j) eq = cur[i * s + j] == target[i * s + j];
      agree += eq;
    }
    if (agree >= t) out.push_back({Poly(digits), agree});
    for (std::size_t e = 0; e < k; ++e) {
      for (std::size_t x = 0; x < n * s; ++x) cur[x] = F.add(cur[x], basis[e][x]);
      if (++digits[e] < q) break;
      digits[e] = 0;
    }
  }
  std::sort(out.begin(), out.end(), list_order);
  return out;
}

inline Poly random_message(const Field& F, std::size_t k, SplitMix64& rng) {
  std::vector<Elem> c(k);
  for (auto& x : c) x = rng.below(F.modulus());
  return Poly(std::move(c));
}

}  // namespace pic
