#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pic {

using Elem = std::uint64_t;

/// Input or parameter rejected before any work was done.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A theorem-level guarantee failed at runtime (kernel too large, zero interpolant, ...).
class GuaranteeViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

inline std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t x) { return (mulmod(x, x, n) + c) % n; };
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    const std::uint64_t m = 128;
    std::uint64_t r = 1;
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd64(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd64(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

}  // namespace detail

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Distinct prime factors, ascending.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  std::vector<std::uint64_t> stack;
  for (std::uint64_t q = 2; q < 1000 && q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    std::uint64_t x = stack.back();
    stack.pop_back();
    if (x == 1) continue;
    if (is_prime(x)) {
      out.push_back(x);
      continue;
    }
    std::uint64_t d = detail::pollard_brent(x);
    stack.push_back(d);
    stack.push_back(x / d);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Prime field F_p with 2 < p < 2^61. Elements are canonical residues in [0, p).
class Field {
 public:
  explicit Field(std::uint64_t p) : p_(p) {
    if (p <= 2 || p >= (1ULL << 61) || !is_prime(p)) {
      throw ValidationError("field modulus must be a prime with 2 < p < 2^61, got " + std::to_string(p));
    }
    small_ = p < (1ULL << 32);
    if (small_) {
      const std::uint64_t sq = (p - 1) * (p - 1);
      lazy_budget_ = (~0ULL - (p - 1)) / sq;
    }
  }

  std::uint64_t modulus() const { return p_; }
  std::uint64_t characteristic() const { return p_; }

  /// How many products of two reduced elements can be summed into a uint64 without overflow (0 if none).
  std::uint64_t lazy_budget() const { return lazy_budget_; }

  Elem from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<Elem>(r < 0 ? r + static_cast<std::int64_t>(p_) : r);
  }
  Elem from_uint(std::uint64_t v) const { return v % p_; }

  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const { return small_ ? (a * b) % p_ : detail::mulmod(a, b, p_); }
  Elem pow(Elem b, std::uint64_t e) const {
    Elem r = 1;
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("inverse of zero in F_" + std::to_string(p_));
    // extended Euclid on signed 128-bit to stay exact near 2^61
    __int128 t = 0, nt = 1, r = p_, nr = a;
    while (nr != 0) {
      __int128 q = r / nr;
      __int128 tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<Elem>(t);
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// Reduce an accumulated value (used with lazy sums).
  Elem reduce(std::uint64_t v) const { return v % p_; }
  Elem reduce128(unsigned __int128 v) const { return static_cast<Elem>(v % p_); }

  /// Sum of a[i]*b[i].
  Elem dot(std::span<const Elem> a, std::span<const Elem> b) const {
    const std::size_t n = std::min(a.size(), b.size());
    if (small_) {
      std::uint64_t acc = 0;
      std::uint64_t used = 0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
        if (++used == lazy_budget_) {
          acc %= p_;
          used = 1;
        }
      }
      return acc % p_;
    }
    unsigned __int128 acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += static_cast<unsigned __int128>(a[i]) * b[i];
      if ((i & 31) == 31) acc %= p_;
    }
    return static_cast<Elem>(acc % p_);
  }

  const std::vector<std::uint64_t>& group_order_factors() const {
    if (factors_.empty()) factors_ = prime_factors(p_ - 1);
    return factors_;
  }

  /// Multiplicative order of a nonzero element.
  std::uint64_t order(Elem a) const {
    if (a % p_ == 0) throw std::domain_error("order of zero is undefined");
    std::uint64_t ord = p_ - 1;
    for (std::uint64_t q : group_order_factors()) {
      while (ord % q == 0 && pow(a, ord / q) == 1) ord /= q;
    }
    return ord;
  }

  /// Smallest generator of F_p^*.
  Elem primitive_root() const {
    for (Elem g = 2; g < p_; ++g) {
      bool ok = true;
      for (std::uint64_t q : group_order_factors()) {
        if (pow(g, (p_ - 1) / q) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) return g;
    }
    return 1;  // unreachable for p > 2
  }

  /// Some element of exact multiplicative order d (d must divide p-1).
  Elem element_of_order(std::uint64_t d) const {
    if (d == 0 || (p_ - 1) % d != 0) {
      throw ValidationError("no element of order " + std::to_string(d) + " in F_" + std::to_string(p_));
    }
    return pow(primitive_root(), (p_ - 1) / d);
  }

  bool operator==(const Field& o) const { return p_ == o.p_; }

 private:
  std::uint64_t p_;
  bool small_ = false;
  std::uint64_t lazy_budget_ = 0;
  mutable std::vector<std::uint64_t> factors_;
};

/// Binomial coefficients and falling factorials mod p. Uses Lucas once the top argument reaches p.
class Binomials {
 public:
  Binomials(const Field& F, std::size_t max_n) : F_(F) {
    const std::size_t lim = static_cast<std::size_t>(std::min<std::uint64_t>(max_n, F.modulus() - 1)) + 1;
    fact_.assign(lim, 1);
    for (std::size_t i = 1; i < lim; ++i) fact_[i] = F.mul(fact_[i - 1], i);
    inv_fact_.assign(lim, 1);
    inv_fact_[lim - 1] = F.inv(fact_[lim - 1]);
    for (std::size_t i = lim - 1; i > 0; --i) inv_fact_[i - 1] = F.mul(inv_fact_[i], i);
  }

  const Field& field() const { return F_; }

  Elem binom(std::uint64_t n, std::uint64_t k) const {
    if (k > n) return 0;
    const std::uint64_t p = F_.modulus();
    if (n < fact_.size()) return small_binom(n, k);
    Elem r = 1;
    while (n || k) {
      std::uint64_t nd = n % p, kd = k % p;
      if (kd > nd) return 0;
      r = F_.mul(r, small_binom_any(nd, kd));
      n /= p;
      k /= p;
    }
    return r;
  }

  /// n (n-1) ... (n-d+1) mod p.
  Elem falling(std::uint64_t n, std::uint64_t d) const {
    if (d > n) return 0;
    if (n < fact_.size()) return F_.mul(fact_[n], inv_fact_[n - d]);
    Elem r = 1;
    for (std::uint64_t t = 0; t < d; ++t) {
      Elem f = F_.from_uint(n - t);
      if (f == 0) return 0;
      r = F_.mul(r, f);
    }
    return r;
  }

  Elem factorial(std::uint64_t n) const { return falling(n, n); }
  Elem inv_factorial(std::uint64_t n) const {
    if (n < inv_fact_.size()) return inv_fact_[n];
    return F_.inv(factorial(n));
  }

 private:
  Elem small_binom(std::uint64_t n, std::uint64_t k) const {
    return F_.mul(fact_[n], F_.mul(inv_fact_[k], inv_fact_[n - k]));
  }
  Elem small_binom_any(std::uint64_t n, std::uint64_t k) const {
    if (n < fact_.size()) return small_binom(n, k);
    Elem num = 1, den = 1;
    for (std::uint64_t t = 0; t < k; ++t) {
      num = F_.mul(num, F_.from_uint(n - t));
      den = F_.mul(den, F_.from_uint(t + 1));
    }
    return F_.div(num, den);
  }

  Field F_;
  std::vector<Elem> fact_;
  std::vector<Elem> inv_fact_;
};

}  // namespace pic
