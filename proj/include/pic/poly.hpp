#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pic/field.hpp"

namespace pic {

/// Dense univariate polynomial over F_p, ascending coefficients, no trailing zeros.
class Poly {
 public:
  static constexpr long kZeroDegree = std::numeric_limits<long>::min();

  Poly() = default;
  explicit Poly(std::vector<Elem> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly constant(Elem c) { return Poly(std::vector<Elem>{c}); }
  static Poly monomial(Elem c, std::size_t e) {
    std::vector<Elem> v(e + 1, 0);
    v[e] = c;
    return Poly(std::move(v));
  }
  /// X - a
  static Poly linear_root(const Field& F, Elem a) { return Poly(std::vector<Elem>{F.neg(a), 1}); }

  bool is_zero() const { return c_.empty(); }
  /// Degree, or kZeroDegree for the zero polynomial.
  long degree() const { return c_.empty() ? kZeroDegree : static_cast<long>(c_.size()) - 1; }
  /// Number of stored coefficients (degree + 1, or 0).
  std::size_t size() const { return c_.size(); }
  Elem operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  Elem lead() const { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  const std::vector<Elem>& coeffs() const { return c_; }

  /// Coefficients zero-padded (or truncated) to exactly n entries.
  std::vector<Elem> padded(std::size_t n) const {
    std::vector<Elem> v(n, 0);
    for (std::size_t i = 0; i < std::min(n, c_.size()); ++i) v[i] = c_[i];
    return v;
  }

  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator!=(const Poly& o) const { return c_ != o.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Elem> c_;
};

inline std::string to_string(const Poly& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (std::size_t i = f.size(); i-- > 0;) {
    if (f[i] == 0) continue;
    if (!s.empty()) s += " + ";
    s += std::to_string(f[i]);
    if (i) s += i == 1 ? "*X" : "*X^" + std::to_string(i);
  }
  return s;
}

inline Poly add(const Field& F, const Poly& a, const Poly& b) {
  std::vector<Elem> r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.add(a[i], b[i]);
  return Poly(std::move(r));
}

inline Poly sub(const Field& F, const Poly& a, const Poly& b) {
  std::vector<Elem> r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.sub(a[i], b[i]);
  return Poly(std::move(r));
}

inline Poly neg(const Field& F, const Poly& a) {
  std::vector<Elem> r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.neg(a[i]);
  return Poly(std::move(r));
}

inline Poly scale(const Field& F, const Poly& a, Elem c) {
  if (c == 0) return {};
  std::vector<Elem> r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.mul(a[i], c);
  return Poly(std::move(r));
}

/// a * X^k
inline Poly shift(const Poly& a, std::size_t k) {
  if (a.is_zero()) return {};
  std::vector<Elem> r(k, 0);
  r.insert(r.end(), a.coeffs().begin(), a.coeffs().end());
  return Poly(std::move(r));
}

inline Poly mul(const Field& F, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const std::size_t n = a.size(), m = b.size();
  std::vector<Elem> r(n + m - 1);
  const std::uint64_t p = F.modulus();
  if (F.lazy_budget() >= std::min(n, m)) {
    std::vector<std::uint64_t> acc(n + m - 1, 0);
    const auto& A = n <= m ? a.coeffs() : b.coeffs();
    const auto& B = n <= m ? b.coeffs() : a.coeffs();
    for (std::size_t i = 0; i < A.size(); ++i) {
      const std::uint64_t ai = A[i];
      if (ai == 0) continue;
      std::uint64_t* dst = acc.data() + i;
      for (std::size_t j = 0; j < B.size(); ++j) dst[j] += ai * B[j];
    }
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = acc[i] % p;
  } else {
    std::vector<unsigned __int128> acc(n + m - 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
      if ((i & 31) == 31) {
        for (auto& x : acc) x %= p;
      }
    }
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.reduce128(acc[i]);
  }
  return Poly(std::move(r));
}

inline Poly pow(const Field& F, Poly base, std::uint64_t e) {
  Poly r = Poly::constant(1);
  while (e) {
    if (e & 1) r = mul(F, r, base);
    e >>= 1;
    if (e) base = mul(F, base, base);
  }
  return r;
}

/// Quotient and remainder. Throws std::domain_error on a zero divisor.
inline std::pair<Poly, Poly> divmod(const Field& F, const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.size() < b.size()) return {Poly{}, a};
  std::vector<Elem> r = a.coeffs();
  const std::size_t db = b.size() - 1;
  std::vector<Elem> q(a.size() - db, 0);
  const Elem inv_lead = F.inv(b.lead());
  const auto& bc = b.coeffs();
  for (std::size_t i = r.size(); i-- > db;) {
    const Elem c = F.mul(r[i], inv_lead);
    if (c == 0) continue;
    q[i - db] = c;
    const std::size_t off = i - db;
    for (std::size_t j = 0; j <= db; ++j) r[off + j] = F.sub(r[off + j], F.mul(c, bc[j]));
  }
  r.resize(db);
  return {Poly(std::move(q)), Poly(std::move(r))};
}

inline Poly mod(const Field& F, const Poly& a, const Poly& b) { return divmod(F, a, b).second; }

inline Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m) { return mod(F, mul(F, a, b), m); }

inline Poly powmod(const Field& F, Poly base, std::uint64_t e, const Poly& m) {
  Poly r = mod(F, Poly::constant(1), m);
  base = mod(F, base, m);
  while (e) {
    if (e & 1) r = mulmod(F, r, base, m);
    e >>= 1;
    if (e) base = mulmod(F, base, base, m);
  }
  return r;
}

inline Poly make_monic(const Field& F, const Poly& a) {
  if (a.is_zero()) return a;
  return scale(F, a, F.inv(a.lead()));
}

inline Elem eval(const Field& F, const Poly& f, Elem x) {
  Elem r = 0;
  for (std::size_t i = f.size(); i-- > 0;) r = F.add(F.mul(r, x), f[i]);
  return r;
}

/// j-th standard derivative.
inline Poly derivative(const Field& F, const Poly& f, std::size_t j = 1) {
  if (f.size() <= j) return {};
  const Binomials B(F, f.size());
  std::vector<Elem> r(f.size() - j);
  for (std::size_t i = j; i < f.size(); ++i) r[i - j] = F.mul(f[i], B.falling(i, j));
  return Poly(std::move(r));
}

/// f(alpha X + beta)
inline Poly compose_linear(const Field& F, const Poly& f, Elem alpha, Elem beta) {
  const Poly lin(std::vector<Elem>{beta, alpha});
  Poly r;
  for (std::size_t i = f.size(); i-- > 0;) r = add(F, mul(F, r, lin), Poly::constant(f[i]));
  return r;
}

/// Monic gcd (zero if both inputs are zero).
inline Poly gcd(const Field& F, Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(F, a);
}

struct XgcdResult {
  Poly g, u, v;  // u*a + v*b = g, g monic
};

inline XgcdResult xgcd(const Field& F, const Poly& a, const Poly& b) {
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(1), s1;
  Poly t0, t1 = Poly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(F, r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = sub(F, s0, mul(F, q, s1));
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly t2 = sub(F, t0, mul(F, q, t1));
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const Elem c = F.inv(r0.lead());
  return {scale(F, r0, c), scale(F, s0, c), scale(F, t0, c)};
}

inline Poly product_of_linear(const Field& F, const std::vector<Elem>& roots) {
  Poly r = Poly::constant(1);
  for (Elem a : roots) r = mul(F, r, Poly::linear_root(F, a));
  return r;
}

namespace detail {

inline std::uint64_t splitmix_step(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// g: monic, squarefree, splits into distinct linear factors.
inline void split_roots(const Field& F, const Poly& g, std::uint64_t& seed, std::vector<Elem>& out) {
  if (g.degree() <= 0) return;
  if (g.degree() == 1) {
    out.push_back(F.neg(g[0]));
    return;
  }
  const std::uint64_t p = F.modulus();
  for (;;) {
    const Elem delta = splitmix_step(seed) % p;
    Poly w = powmod(F, Poly(std::vector<Elem>{delta, 1}), (p - 1) / 2, g);
    w = sub(F, w, Poly::constant(1));
    Poly d = gcd(F, g, w);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      split_roots(F, d, seed, out);
      split_roots(F, divmod(F, g, d).first, seed, out);
      return;
    }
  }
}

}  // namespace detail

/// Distinct roots of f in F_p, ascending. f must be nonzero.
inline std::vector<Elem> roots(const Field& F, const Poly& f) {
  if (f.is_zero()) throw std::domain_error("roots of the zero polynomial");
  std::vector<Elem> out;
  if (f.degree() <= 0) return out;
  Poly g = make_monic(F, f);
  Poly xp = powmod(F, Poly::monomial(1, 1), F.modulus(), g);
  Poly h = gcd(F, g, sub(F, xp, Poly::monomial(1, 1)));
  std::uint64_t seed = 0x5eed;
  detail::split_roots(F, h, seed, out);
  std::sort(out.begin(), out.end());
  return out;
}

/// Solve p = r_i mod m_i for pairwise coprime m_i. Returns p with deg p < sum deg m_i.
inline Poly crt(const Field& F, const std::vector<Poly>& residues, const std::vector<Poly>& moduli) {
  if (residues.size() != moduli.size()) throw ValidationError("crt: residue/modulus count mismatch");
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (moduli[i].degree() < 1) throw ValidationError("crt: modulus " + std::to_string(i) + " is constant");
    for (std::size_t j = i + 1; j < moduli.size(); ++j) {
      if (gcd(F, moduli[i], moduli[j]).degree() != 0) {
        throw ValidationError("crt: moduli " + std::to_string(i) + " and " + std::to_string(j) + " are not coprime");
      }
    }
  }
  Poly acc;
  Poly prod = Poly::constant(1);
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    // acc + prod * t = r_i  (mod m_i)  =>  t = (r_i - acc) * prod^{-1} mod m_i
    const XgcdResult x = xgcd(F, mod(F, prod, moduli[i]), moduli[i]);
    Poly t = mulmod(F, sub(F, residues[i], acc), x.u, moduli[i]);
    acc = add(F, acc, mul(F, prod, t));
    prod = mul(F, prod, moduli[i]);
  }
  return acc;
}

}  // namespace pic
