#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pic/bivar.hpp"
#include "pic/field.hpp"
#include "pic/ideal_codes.hpp"
#include "pic/matrix.hpp"
#include "pic/poly.hpp"

namespace pic {

struct JohnsonParams {
  std::size_t r = 0;
  std::size_t D = 0;
  std::size_t D_prime = 0;
  std::size_t t_min = 0;
};

inline std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

inline JohnsonParams johnson_params(std::size_t n, std::size_t s, std::size_t k, std::size_t r) {
  if (r < 1) throw ValidationError("johnson: r must be >= 1");
  if (k < 2 || s + 1 >= k) throw ValidationError("johnson decoding requires s < k - 1");
  JohnsonParams P;
  P.r = r;
  P.D = static_cast<std::size_t>(isqrt(static_cast<std::uint64_t>(n) * s * r * (r + 1) * k)) + 1;
  P.D_prime = (P.D + s - 1) / s * s;
  P.t_min = P.D / (r * s) + 1;
  return P;
}

inline JohnsonParams johnson_params(const PolyIdealCode& code, std::size_t r) {
  return johnson_params(code.n(), code.s(), code.k(), r);
}

/// Smallest r with 1/(nrs) + sqrt(k/(sn)) sqrt(1 + 1/r) <= sqrt(k/(sn)) + epsilon.
inline JohnsonParams johnson_params_epsilon(const PolyIdealCode& code, double epsilon, std::size_t r_max = 256) {
  const double n = static_cast<double>(code.n()), s = static_cast<double>(code.s()), k = static_cast<double>(code.k());
  const double base = std::sqrt(k / (s * n));
  for (std::size_t r = 1; r <= r_max; ++r) {
    const double rr = static_cast<double>(r);
    if (1.0 / (n * rr * s) + base * std::sqrt(1.0 + 1.0 / rr) <= base + epsilon) return johnson_params(code, r);
  }
  throw ValidationError("johnson: epsilon too small, no r <= " + std::to_string(r_max) + " satisfies the bound");
}

struct JohnsonAccounting {
  std::uint64_t q_unknowns = 0;        // N(k-1, D)
  std::uint64_t per_point_slack = 0;   // N(s, D') - N(s, D'-rs) - r(D'-rs+1)
  std::uint64_t unknowns = 0;
  std::uint64_t constraints = 0;
};

inline JohnsonAccounting johnson_accounting(std::size_t n, std::size_t s, std::size_t k, const JohnsonParams& P) {
  const std::int64_t low = static_cast<std::int64_t>(P.D_prime) - static_cast<std::int64_t>(P.r * s);
  if (low < 0) throw ValidationError("johnson: D' < r*s");
  JohnsonAccounting a;
  a.q_unknowns = weighted_monomial_count(k - 1, static_cast<std::int64_t>(P.D));
  const std::uint64_t full = weighted_monomial_count(s, static_cast<std::int64_t>(P.D_prime));
  const std::uint64_t local = weighted_monomial_count(s, low) + P.r * static_cast<std::uint64_t>(low + 1);
  a.per_point_slack = full - local;
  a.unknowns = a.q_unknowns + n * local;
  a.constraints = n * full;
  return a;
}

namespace detail {

// Monomials X^i Y^j with i + w j <= b, indexed by Y-degree blocks.
struct MonomialIndex {
  std::size_t w = 1;
  std::int64_t b = 0;
  std::vector<std::size_t> offset;  // offset[j], plus total at the end

  MonomialIndex(std::size_t weight, std::int64_t bound) : w(weight), b(bound) {
    offset.push_back(0);
    if (b < 0) return;
    for (std::size_t j = 0; static_cast<std::int64_t>(w * j) <= b; ++j)
      offset.push_back(offset.back() + static_cast<std::size_t>(b - static_cast<std::int64_t>(w * j)) + 1);
  }
  std::size_t size() const { return offset.back(); }
  std::size_t y_blocks() const { return offset.size() - 1; }
  std::size_t x_len(std::size_t j) const { return offset[j + 1] - offset[j]; }
  bool contains(std::size_t i, std::size_t j) const { return j < y_blocks() && i < x_len(j); }
  std::size_t at(std::size_t i, std::size_t j) const { return offset[j] + i; }
};

// Add P * X^a Y^c (as coefficient vector over idx) into row.
inline void scatter(const Field& F, const BivarPoly& P, std::size_t a, std::size_t c, const MonomialIndex& idx,
                    std::span<Elem> row, bool negate) {
  const auto& sl = P.y_slices();
  for (std::size_t j = 0; j < sl.size(); ++j) {
    for (std::size_t i = 0; i < sl[j].size(); ++i) {
      const Elem v = sl[j][i];
      if (v == 0) continue;
      if (!idx.contains(i + a, j + c)) throw std::logic_error("johnson: generator exceeds the weighted-degree bound");
      Elem& dst = row[idx.at(i + a, j + c)];
      dst = negate ? F.sub(dst, v) : F.add(dst, v);
    }
  }
}

struct PointGenerators {
  BivarPoly P0;               // (Y - c)^r
  std::vector<BivarPoly> Pj;  // E^j (Y - c)^{r-j}, j = 1..r
};

inline PointGenerators point_generators(const Field& F, const Poly& E, const Poly& c, std::size_t r) {
  PointGenerators g;
  const BivarPoly yc = y_minus(F, c);
  std::vector<BivarPoly> ycp(r + 1);
  ycp[0] = BivarPoly(std::vector<Poly>{Poly::constant(1)});
  for (std::size_t j = 1; j <= r; ++j) ycp[j] = mul(F, ycp[j - 1], yc);
  g.P0 = ycp[r];
  Poly Ej = Poly::constant(1);
  for (std::size_t j = 1; j <= r; ++j) {
    Ej = mul(F, Ej, E);
    g.Pj.push_back(mul(F, from_x(Ej), ycp[r - j]));
  }
  return g;
}

inline BivarPoly q_from_vector(const Field& F, const MonomialIndex& qi, std::span<const Elem> v) {
  BivarPoly Q;
  std::vector<Poly> slices;
  for (std::size_t j = 0; j < qi.y_blocks(); ++j)
    slices.emplace_back(std::vector<Elem>(v.begin() + qi.offset[j], v.begin() + qi.offset[j + 1]));
  (void)F;
  return BivarPoly(std::move(slices));
}

}  // namespace detail

/// Interpolation with B_i and A_{i,j} eliminated point by point: Q must lie in the span V_i of
/// {(Y - c_i)^r X^a Y^b} and {E_i^j (Y - c_i)^{r-j} X^a}, i.e. be annihilated by V_i's annihilator.
inline BivarPoly interpolate_johnson_Q(const Field& F, const std::vector<Poly>& moduli, const Codeword& y, std::size_t s,
                                       std::size_t k, const JohnsonParams& P) {
  const std::size_t n = moduli.size();
  const auto acc = johnson_accounting(n, s, k, P);
  if (acc.unknowns <= acc.constraints) throw ValidationError("johnson: parameter accounting violated");
  const std::int64_t low = static_cast<std::int64_t>(P.D_prime) - static_cast<std::int64_t>(P.r * s);
  const detail::MonomialIndex W(s, static_cast<std::int64_t>(P.D_prime));
  const detail::MonomialIndex L(s, low);
  const detail::MonomialIndex Qi(k - 1, static_cast<std::int64_t>(P.D));
  std::vector<std::vector<Elem>> rows;
  for (std::size_t t = 0; t < n; ++t) {
    const auto g = detail::point_generators(F, moduli[t], y[t], P.r);
    const std::size_t ngen = L.size() + P.r * static_cast<std::size_t>(low + 1);
    Matrix G(ngen, W.size());
    std::size_t row = 0;
    for (std::size_t b = 0; b < L.y_blocks(); ++b)
      for (std::size_t a = 0; a < L.x_len(b); ++a) detail::scatter(F, g.P0, a, b, W, G.row(row++), false);
    for (std::size_t j = 0; j < P.r; ++j)
      for (std::size_t a = 0; a <= static_cast<std::size_t>(low); ++a) detail::scatter(F, g.Pj[j], a, 0, W, G.row(row++), false);
    for (auto& lam : kernel_basis(F, G)) {
      std::vector<Elem> q(Qi.size());
      for (std::size_t j = 0; j < Qi.y_blocks(); ++j)
        for (std::size_t i = 0; i < Qi.x_len(j); ++i) q[Qi.at(i, j)] = lam[W.at(i, j)];
      rows.push_back(std::move(q));
    }
  }
  Matrix A(rows.size(), Qi.size());
  for (std::size_t i = 0; i < rows.size(); ++i) std::copy(rows[i].begin(), rows[i].end(), A.row(i).begin());
  auto ker = kernel_basis(F, A, 1);
  if (ker.empty()) throw GuaranteeViolation("johnson: interpolation kernel is empty");
  BivarPoly Q = detail::q_from_vector(F, Qi, ker[0]);
  if (Q.is_zero()) throw GuaranteeViolation("johnson: zero interpolant");
  return Q;
}

inline BivarPoly interpolate_johnson_Q(const PolyIdealCode& code, const Codeword& y, const JohnsonParams& P) {
  check_received(code, y);
  return interpolate_johnson_Q(code.F, code.moduli, y, code.s(), code.k(), P);
}

struct JohnsonWitness {
  BivarPoly Q;
  std::vector<BivarPoly> B;               // per point
  std::vector<std::vector<Poly>> A;       // per point, j = 1..r
  std::vector<std::vector<Elem>> kernel;  // full kernel of the monolithic system
};

/// The monolithic system over (Q, all B_i, all A_{i,j}); used to cross-check the blockwise solve.
inline JohnsonWitness interpolate_johnson_monolithic(const Field& F, const std::vector<Poly>& moduli, const Codeword& y,
                                                     std::size_t s, std::size_t k, const JohnsonParams& P) {
  const std::size_t n = moduli.size();
  const std::int64_t low = static_cast<std::int64_t>(P.D_prime) - static_cast<std::int64_t>(P.r * s);
  if (low < 0) throw ValidationError("johnson: D' < r*s");
  const detail::MonomialIndex W(s, static_cast<std::int64_t>(P.D_prime));
  const detail::MonomialIndex L(s, low);
  const detail::MonomialIndex Qi(k - 1, static_cast<std::int64_t>(P.D));
  const std::size_t per = L.size() + P.r * static_cast<std::size_t>(low + 1);
  const std::size_t cols = Qi.size() + n * per;
  Matrix A(n * W.size(), cols);
  for (std::size_t t = 0; t < n; ++t) {
    const auto g = detail::point_generators(F, moduli[t], y[t], P.r);
    const std::size_t r0 = t * W.size();
    for (std::size_t j = 0; j < Qi.y_blocks(); ++j)
      for (std::size_t i = 0; i < Qi.x_len(j); ++i) A(r0 + W.at(i, j), Qi.at(i, j)) = 1;
    std::size_t col = Qi.size() + t * per;
    std::vector<Elem> tmp(W.size());
    auto put = [&](const BivarPoly& Pp, std::size_t a, std::size_t b, bool negate) {
      std::fill(tmp.begin(), tmp.end(), 0);
      detail::scatter(F, Pp, a, b, W, tmp, negate);
      for (std::size_t x = 0; x < W.size(); ++x) A(r0 + x, col) = tmp[x];
      ++col;
    };
    for (std::size_t b = 0; b < L.y_blocks(); ++b)
      for (std::size_t a = 0; a < L.x_len(b); ++a) put(g.P0, a, b, true);
    for (std::size_t j = 0; j < P.r; ++j)
      for (std::size_t a = 0; a <= static_cast<std::size_t>(low); ++a) put(g.Pj[j], a, 0, false);
  }
  JohnsonWitness w;
  w.kernel = kernel_basis(F, A);
  if (w.kernel.empty()) throw GuaranteeViolation("johnson: monolithic kernel is empty");
  const auto& v = w.kernel[0];
  w.Q = detail::q_from_vector(F, Qi, std::span<const Elem>(v).subspan(0, Qi.size()));
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t off = Qi.size() + t * per;
    w.B.push_back(detail::q_from_vector(F, L, std::span<const Elem>(v).subspan(off, L.size())));
    off += L.size();
    std::vector<Poly> As;
    for (std::size_t j = 0; j < P.r; ++j, off += static_cast<std::size_t>(low + 1))
      As.emplace_back(std::vector<Elem>(v.begin() + off, v.begin() + off + low + 1));
    w.A.push_back(std::move(As));
  }
  return w;
}

namespace detail {

// Q(X, X Y + g)
inline BivarPoly shift_y(const Field& F, const BivarPoly& Q, Elem g) {
  const auto& sl = Q.y_slices();
  const std::size_t dy = sl.size();
  // binomials by Pascal's rule so any Y-degree works in small characteristic
  std::vector<std::vector<Elem>> C(dy, std::vector<Elem>(dy, 0));
  for (std::size_t j = 0; j < dy; ++j) {
    C[j][0] = 1;
    for (std::size_t t = 1; t <= j; ++t) C[j][t] = F.add(C[j - 1][t - 1], t < j ? C[j - 1][t] : 0);
  }
  std::vector<Poly> out(dy);
  for (std::size_t j = 0; j < dy; ++j) {
    if (sl[j].is_zero()) continue;
    Elem gp = 1;
    std::vector<Elem> gpow(j + 1);
    for (std::size_t t = 0; t <= j; ++t, gp = F.mul(gp, g)) gpow[t] = gp;
    for (std::size_t t = 0; t <= j; ++t) {
      // Q_j(X) binom(j,t) X^t Y^t g^{j-t}
      const Elem c = F.mul(C[j][t], gpow[j - t]);
      if (c == 0) continue;
      out[t] = add(F, out[t], shift(scale(F, sl[j], c), t));
    }
  }
  return BivarPoly(std::move(out));
}

inline BivarPoly strip_x(const BivarPoly& Q) {
  std::size_t v = static_cast<std::size_t>(-1);
  for (const auto& sl : Q.y_slices()) {
    if (sl.is_zero()) continue;
    std::size_t i = 0;
    while (sl[i] == 0) ++i;
    v = std::min(v, i);
  }
  if (v == 0 || v == static_cast<std::size_t>(-1)) return Q;
  std::vector<Poly> out;
  for (const auto& sl : Q.y_slices()) {
    if (sl.is_zero()) {
      out.emplace_back();
      continue;
    }
    out.emplace_back(std::vector<Elem>(sl.coeffs().begin() + v, sl.coeffs().end()));
  }
  return BivarPoly(std::move(out));
}

inline void peel(const Field& F, const BivarPoly& Q, std::size_t depth, std::size_t k, std::vector<Elem>& prefix,
                 std::vector<Poly>& out) {
  if (depth == k) {
    out.emplace_back(prefix);
    return;
  }
  const BivarPoly Qs = strip_x(Q);
  const Poly g = Qs.x_slice(0);
  if (g.is_zero()) return;  // cannot happen after stripping
  for (Elem root : roots(F, g)) {
    prefix[depth] = root;
    peel(F, shift_y(F, Qs, root), depth + 1, k, prefix, out);
  }
  prefix[depth] = 0;
}

}  // namespace detail

/// All f with deg f < k and Q(X, f(X)) = 0.
inline std::vector<Poly> y_roots(const Field& F, const BivarPoly& Q, std::size_t k) {
  if (Q.is_zero()) throw std::invalid_argument("y_roots: Q must be nonzero");
  std::vector<Poly> cand;
  std::vector<Elem> prefix(k, 0);
  detail::peel(F, Q, 0, k, prefix, cand);
  std::vector<Poly> out;
  for (auto& f : cand)
    if (Q.substitute_y(F, f).is_zero()) out.push_back(std::move(f));
  std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) { return list_order({a, 0}, {b, 0}); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct JohnsonResult {
  JohnsonParams params;
  BivarPoly Q;
  std::vector<ListEntry> list;
};

inline JohnsonResult list_decode_johnson(const PolyIdealCode& code, const Codeword& y, const JohnsonParams& P) {
  JohnsonResult res;
  res.params = P;
  res.Q = interpolate_johnson_Q(code, y, P);
  for (auto& f : y_roots(code.F, res.Q, code.k())) {
    const std::size_t agree = hamming_agreement(code, y, f);
    if (agree >= P.t_min) res.list.push_back({std::move(f), agree});
  }
  std::sort(res.list.begin(), res.list.end(), list_order);
  return res;
}

}  // namespace pic
