#pragma once

#include <cstdint>
#include <vector>

#include "pic/field.hpp"
#include "pic/poly.hpp"

namespace pic {

/// Q(X, Y) = sum_j Q_j(X) Y^j, stored by Y-slices with trailing zero slices trimmed.
class BivarPoly {
 public:
  BivarPoly() = default;
  explicit BivarPoly(std::vector<Poly> y_slices) : s_(std::move(y_slices)) { trim(); }

  /// Set coefficient of X^i Y^j.
  void set(const Field& F, std::size_t i, std::size_t j, Elem c) {
    if (j >= s_.size()) s_.resize(j + 1);
    std::vector<Elem> v = s_[j].padded(std::max(s_[j].size(), i + 1));
    v[i] = F.from_uint(c);
    s_[j] = Poly(std::move(v));
    trim();
  }

  Elem coeff(std::size_t i, std::size_t j) const { return j < s_.size() ? s_[j][i] : 0; }

  bool is_zero() const { return s_.empty(); }
  long degree_y() const { return s_.empty() ? Poly::kZeroDegree : static_cast<long>(s_.size()) - 1; }
  long degree_x() const {
    long d = Poly::kZeroDegree;
    for (const auto& q : s_) d = std::max(d, q.degree());
    return d;
  }
  /// max over the support of a*i + b*j.
  long weighted_degree(long a, long b) const {
    long d = Poly::kZeroDegree;
    for (std::size_t j = 0; j < s_.size(); ++j) {
      if (s_[j].is_zero()) continue;
      d = std::max(d, a * s_[j].degree() + b * static_cast<long>(j));
    }
    return d;
  }

  const std::vector<Poly>& y_slices() const { return s_; }
  Poly y_slice(std::size_t j) const { return j < s_.size() ? s_[j] : Poly{}; }

  /// Coefficient of X^i as a polynomial in Y.
  Poly x_slice(std::size_t i) const {
    std::vector<Elem> v(s_.size());
    for (std::size_t j = 0; j < s_.size(); ++j) v[j] = s_[j][i];
    return Poly(std::move(v));
  }

  /// Q(X, y0) as a polynomial in X.
  Poly eval_y(const Field& F, Elem y0) const {
    Poly r;
    for (std::size_t j = s_.size(); j-- > 0;) r = add(F, scale(F, r, y0), s_[j]);
    return r;
  }

  /// Q(X, f(X)).
  Poly substitute_y(const Field& F, const Poly& f) const {
    Poly r;
    for (std::size_t j = s_.size(); j-- > 0;) r = add(F, mul(F, r, f), s_[j]);
    return r;
  }

  bool operator==(const BivarPoly& o) const { return s_ == o.s_; }

 private:
  void trim() {
    while (!s_.empty() && s_.back().is_zero()) s_.pop_back();
  }
  std::vector<Poly> s_;
};

inline BivarPoly add(const Field& F, const BivarPoly& a, const BivarPoly& b) {
  std::vector<Poly> r(std::max(a.y_slices().size(), b.y_slices().size()));
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = add(F, a.y_slice(j), b.y_slice(j));
  return BivarPoly(std::move(r));
}

inline BivarPoly mul(const Field& F, const BivarPoly& a, const BivarPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Poly> r(a.y_slices().size() + b.y_slices().size() - 1);
  for (std::size_t i = 0; i < a.y_slices().size(); ++i)
    for (std::size_t j = 0; j < b.y_slices().size(); ++j)
      r[i + j] = add(F, r[i + j], mul(F, a.y_slices()[i], b.y_slices()[j]));
  return BivarPoly(std::move(r));
}

inline BivarPoly pow(const Field& F, const BivarPoly& a, std::size_t e) {
  BivarPoly r(std::vector<Poly>{Poly::constant(1)});
  for (std::size_t i = 0; i < e; ++i) r = mul(F, r, a);
  return r;
}

/// Y - c(X)
inline BivarPoly y_minus(const Field& F, const Poly& c) {
  return BivarPoly(std::vector<Poly>{neg(F, c), Poly::constant(1)});
}

/// Univariate polynomial in X viewed as bivariate.
inline BivarPoly from_x(const Poly& f) { return BivarPoly(std::vector<Poly>{f}); }

/// E(X, Y) = sum_i prod_{j != i} (Y - a_j)/(a_i - a_j) * E_i(X); E(X, a_i) = E_i(X).
inline BivarPoly lagrange_bivariate(const Field& F, const std::vector<Poly>& moduli, const std::vector<Elem>& points) {
  if (moduli.size() != points.size()) throw ValidationError("lagrange_bivariate: moduli/points length mismatch");
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (points[i] == points[j]) throw ValidationError("lagrange_bivariate: repeated point");
  std::vector<Poly> slices(n);
  for (std::size_t i = 0; i < n; ++i) {
    Poly basis = Poly::constant(1);
    Elem den = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      basis = mul(F, basis, Poly::linear_root(F, points[j]));
      den = F.mul(den, F.sub(points[i], points[j]));
    }
    basis = scale(F, basis, F.inv(den));
    for (std::size_t t = 0; t < basis.size(); ++t) {
      if (basis[t] == 0) continue;
      slices[t] = add(F, slices[t], scale(F, moduli[i], basis[t]));
    }
  }
  return BivarPoly(std::move(slices));
}

/// Number of monomials X^i Y^j with i + a*j <= b (a >= 1).
inline std::uint64_t weighted_monomial_count(std::uint64_t a, std::int64_t b) {
  if (b < 0) return 0;
  if (a == 0) throw std::invalid_argument("weighted_monomial_count: weight must be positive");
  const std::uint64_t B = static_cast<std::uint64_t>(b);
  std::uint64_t n = 0;
  for (std::uint64_t j = 0; j <= B / a; ++j) n += B - a * j + 1;
  return n;
}

}  // namespace pic
