#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pic/bivar.hpp"
#include "pic/field.hpp"
#include "pic/ideal_codes.hpp"
#include "pic/linear_form.hpp"
#include "pic/matrix.hpp"
#include "pic/poly.hpp"
#include "pic/rng.hpp"

namespace pic {

/// f -> multiplier(X) * (D^order f)(scale * X + shift)
struct OpTerm {
  Poly multiplier = Poly::constant(1);
  std::uint32_t order = 0;
  Elem scale = 1;
  Elem shift = 0;
};

/// A linear map on F[X]. Either a sum of OpTerms, or a table of images of X^e for e < bound.
class Operator {
 public:
  Operator() = default;
  static Operator structured(std::vector<OpTerm> terms) {
    Operator op;
    op.terms_ = std::move(terms);
    return op;
  }
  static Operator single(OpTerm t) { return structured({std::move(t)}); }
  static Operator tabulated(std::vector<Poly> table) {
    Operator op;
    op.table_ = std::make_shared<const std::vector<Poly>>(std::move(table));
    return op;
  }

  bool is_tabulated() const { return table_ != nullptr; }
  const std::vector<OpTerm>& terms() const { return terms_; }
  std::size_t table_size() const { return table_ ? table_->size() : 0; }

  /// Image of X^e.
  Poly action(const Binomials& B, std::size_t e) const {
    const Field& F = B.field();
    if (table_) {
      if (e >= table_->size()) throw std::out_of_range("operator table bound exceeded");
      return (*table_)[e];
    }
    Poly out;
    for (const auto& t : terms_) {
      if (e < t.order) continue;
      const std::size_t w = e - t.order;
      const Elem c = B.falling(e, t.order);
      std::vector<Elem> v(w + 1, 0);
      if (t.shift == 0) {
        v[w] = F.mul(c, F.pow(t.scale, w));
      } else {
        // binom(w, j) scale^j shift^(w-j)
        std::vector<Elem> sh(w + 1);
        sh[0] = 1;
        for (std::size_t j = 1; j <= w; ++j) sh[j] = F.mul(sh[j - 1], t.shift);
        Elem sc = c;
        for (std::size_t j = 0; j <= w; ++j) {
          v[j] = F.mul(F.mul(sc, B.binom(w, j)), sh[w - j]);
          sc = F.mul(sc, t.scale);
        }
      }
      Poly img(std::move(v));
      if (t.multiplier.degree() != 0 || t.multiplier[0] != 1) img = mul(F, img, t.multiplier);
      out = add(F, out, img);
    }
    return out;
  }

  /// (L X^e)(a)
  Elem action_at(const Binomials& B, std::size_t e, Elem a) const {
    const Field& F = B.field();
    if (table_) return eval(F, action(B, e), a);
    Elem out = 0;
    for (const auto& t : terms_) {
      if (e < t.order) continue;
      const Elem x0 = F.add(F.mul(t.scale, a), t.shift);
      Elem v = F.mul(B.falling(e, t.order), F.pow(x0, e - t.order));
      out = F.add(out, F.mul(v, eval(F, t.multiplier, a)));
    }
    return out;
  }

  Poly apply(const Binomials& B, const Poly& f) const {
    const Field& F = B.field();
    if (table_) {
      Poly out;
      for (std::size_t e = 0; e < f.size(); ++e)
        if (f[e] != 0) out = add(F, out, scale(F, action(B, e), f[e]));
      return out;
    }
    Poly out;
    for (const auto& t : terms_) {
      Poly g = compose_linear(F, derivative(F, f, t.order), t.scale, t.shift);
      out = add(F, out, mul(F, g, t.multiplier));
    }
    return out;
  }

  /// (L f)(a)
  Elem apply_at(const Binomials& B, const Poly& f, Elem a) const {
    const Field& F = B.field();
    if (table_) return eval(F, apply(B, f), a);
    Elem out = 0;
    for (const auto& t : terms_) {
      const Elem x0 = F.add(F.mul(t.scale, a), t.shift);
      // sum_e f_e falling(e, d) x0^(e-d)
      Elem acc = 0, xp = 1;
      for (std::size_t e = t.order; e < f.size(); ++e) {
        acc = F.add(acc, F.mul(F.mul(f[e], B.falling(e, t.order)), xp));
        xp = F.mul(xp, x0);
      }
      out = F.add(out, F.mul(acc, eval(F, t.multiplier, a)));
    }
    return out;
  }

 private:
  std::vector<OpTerm> terms_;
  std::shared_ptr<const std::vector<Poly>> table_;
};

/// An ordered list of operators, usable on monomials X^e with e < bound.
class OperatorFamily {
 public:
  OperatorFamily() : F_(3), bound_(0) {}
  OperatorFamily(const Field& F, std::vector<Operator> ops, std::vector<std::string> names, std::size_t bound)
      : F_(F), B_(std::make_shared<Binomials>(F, bound + 64)), ops_(std::move(ops)), names_(std::move(names)),
        bound_(bound) {
    if (names_.size() != ops_.size()) throw std::invalid_argument("operator/name count mismatch");
  }

  const Field& field() const { return F_; }
  const Binomials& binomials() const { return *B_; }
  std::size_t size() const { return ops_.size(); }
  std::size_t bound() const { return bound_; }
  const Operator& op(std::size_t i) const { return ops_[i]; }
  const std::vector<Operator>& ops() const { return ops_; }
  const std::string& name(std::size_t i) const { return names_[i]; }

  Poly action(std::size_t i, std::size_t e) const {
    check_bound(e);
    return ops_[i].action(*B_, e);
  }

  /// (L_0(X^e)(a), ..., L_{s-1}(X^e)(a))
  std::vector<Elem> column(std::size_t e, Elem a) const {
    check_bound(e);
    std::vector<Elem> c(ops_.size());
    for (std::size_t i = 0; i < ops_.size(); ++i) c[i] = ops_[i].action_at(*B_, e, a);
    return c;
  }

  /// (L_0(f)(a), ..., L_{s-1}(f)(a))
  std::vector<Elem> encode_at(const Poly& f, Elem a) const {
    check_bound(f.size() ? f.size() - 1 : 0);
    std::vector<Elem> c(ops_.size());
    for (std::size_t i = 0; i < ops_.size(); ++i) c[i] = ops_[i].apply_at(*B_, f, a);
    return c;
  }

  OperatorFamily prefix(std::size_t r) const {
    if (r > ops_.size()) throw std::invalid_argument("prefix longer than family");
    return OperatorFamily(F_, {ops_.begin(), ops_.begin() + r}, {names_.begin(), names_.begin() + r}, bound_);
  }

  OperatorFamily with_bound(std::size_t bound) const {
    for (const auto& op : ops_)
      if (op.is_tabulated() && op.table_size() < bound) throw std::invalid_argument("table shorter than new bound");
    return OperatorFamily(F_, ops_, names_, bound);
  }

 private:
  void check_bound(std::size_t e) const {
    if (e >= bound_) throw std::out_of_range("operator family bound exceeded");
  }

  Field F_;
  std::shared_ptr<const Binomials> B_;
  std::vector<Operator> ops_;
  std::vector<std::string> names_;
  std::size_t bound_;
};

/// Operator family together with its extension matrix: L(X f) = M(X) L(f).
struct ExtendibleFamily {
  OperatorFamily ops;
  PolyMatrix M;
};

namespace detail {

inline std::string idx_name(const std::string& base, std::size_t i) { return base + "_" + std::to_string(i); }

// L_r = S_{r0} D_{r1}, r = r1 u + r0, S_c f = f(l^c(X)).
inline ExtendibleFamily affine_family(const Field& F, const LinearForm& l, std::size_t count, std::size_t bound) {
  const std::uint64_t u = l.alpha_order();
  std::vector<Operator> ops;
  std::vector<std::string> names;
  PolyMatrix M(count, count);
  for (std::size_t r = 0; r < count; ++r) {
    const std::uint64_t r1 = r / u, r0 = r % u;
    auto [a, b] = l.iterate(r0);
    ops.push_back(Operator::single({Poly::constant(1), static_cast<std::uint32_t>(r1), a, b}));
    names.push_back("S" + std::to_string(r0) + "D" + std::to_string(r1));
    M(r, r) = Poly(std::vector<Elem>{b, a});
    if (r1 > 0) M(r, r - u) = Poly::constant(F.from_uint(r1));
  }
  return {OperatorFamily(F, std::move(ops), std::move(names), bound), std::move(M)};
}

inline ExtendibleFamily derivative_family(const Field& F, std::size_t count, std::size_t bound) {
  std::vector<Operator> ops;
  std::vector<std::string> names;
  PolyMatrix M(count, count);
  for (std::size_t i = 0; i < count; ++i) {
    ops.push_back(Operator::single({Poly::constant(1), static_cast<std::uint32_t>(i), 1, 0}));
    names.push_back(idx_name("D", i));
    M(i, i) = Poly::monomial(1, 1);
    if (i > 0) M(i, i - 1) = Poly::constant(F.from_uint(i));
  }
  return {OperatorFamily(F, std::move(ops), std::move(names), bound), std::move(M)};
}

inline ExtendibleFamily shift_family(const Field& F, Elem beta, std::size_t count, std::size_t bound) {
  std::vector<Operator> ops;
  std::vector<std::string> names;
  PolyMatrix M(count, count);
  for (std::size_t i = 0; i < count; ++i) {
    const Elem sh = F.mul(F.from_uint(i), beta);
    ops.push_back(Operator::single({Poly::constant(1), 0, 1, sh}));
    names.push_back(idx_name("T", i));
    M(i, i) = Poly(std::vector<Elem>{sh, 1});
  }
  return {OperatorFamily(F, std::move(ops), std::move(names), bound), std::move(M)};
}

inline ExtendibleFamily scaling_family(const Field& F, Elem gamma, std::size_t count, std::size_t bound) {
  std::vector<Operator> ops;
  std::vector<std::string> names;
  PolyMatrix M(count, count);
  Elem g = 1;
  for (std::size_t i = 0; i < count; ++i, g = F.mul(g, gamma)) {
    ops.push_back(Operator::single({Poly::constant(1), 0, g, 0}));
    names.push_back(idx_name("G", i));
    M(i, i) = Poly::monomial(g, 1);
  }
  return {OperatorFamily(F, std::move(ops), std::move(names), bound), std::move(M)};
}

}  // namespace detail

/// The first `count` operators of the family's natural operator sequence (count = s gives the code itself).
inline ExtendibleFamily family_operators(const Field& F, const FamilySpec& spec, std::size_t count, std::size_t bound) {
  switch (spec.family) {
    case Family::rs:
    case Family::mult:
      return detail::derivative_family(F, count, bound);
    case Family::frs:
      return detail::scaling_family(F, spec.gamma, count, bound);
    case Family::additive_frs:
      return detail::shift_family(F, spec.beta, count, bound);
    case Family::affine_frs: {
      const LinearForm l(F, spec.alpha, spec.beta);
      if (l.alpha() == 1) {
        return l.beta() == 0 ? detail::derivative_family(F, count, bound)
                             : detail::shift_family(F, l.beta(), count, bound);
      }
      return detail::affine_family(F, l, count, bound);
    }
  }
  throw std::logic_error("unreachable");
}

/// The operator family (s operators) of a code family, valid on monomials below K.
inline ExtendibleFamily build_operator_family(const FamilySpec& spec, std::size_t K) {
  Field F(spec.p);
  validate_family(F, spec);
  return family_operators(F, spec, spec.s, K);
}

struct ExtendibilityFailure {
  std::size_t e;    // L(X^{e+1}) != M L(X^e)
  std::size_t row;
};

/// Check L(X^{e+1}) = M(X) L(X^e) for all e + 1 < K. Returns the first counterexample.
inline std::optional<ExtendibilityFailure> verify_linear_extendibility(const OperatorFamily& fam, const PolyMatrix& M,
                                                                       std::size_t K) {
  const Field& F = fam.field();
  const std::size_t s = fam.size();
  if (M.rows() != s || M.cols() != s) throw std::invalid_argument("extension matrix shape mismatch");
  if (K > fam.bound()) throw std::invalid_argument("K exceeds the family bound");
  // sparse rows of M
  std::vector<std::vector<std::pair<std::size_t, Poly>>> rows(s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      if (!M(i, j).is_zero()) rows[i].push_back({j, M(i, j)});
  std::vector<Poly> cur(s);
  for (std::size_t i = 0; i < s && K > 0; ++i) cur[i] = fam.action(i, 0);
  for (std::size_t e = 0; e + 1 < K; ++e) {
    std::vector<Poly> next(s);
    for (std::size_t i = 0; i < s; ++i) {
      next[i] = fam.action(i, e + 1);
      Poly rhs;
      for (const auto& [j, m] : rows[i]) rhs = add(F, rhs, mul(F, m, cur[j]));
      if (rhs != next[i]) return ExtendibilityFailure{e, i};
    }
    cur = std::move(next);
  }
  return std::nullopt;
}

/// Operator family read off a bivariate modulus E(X, Y) = X^s - sum_i H_i(Y) X^i:
/// L_i(p) is the X^i-coefficient of p mod E, with Y renamed to X.
inline ExtendibleFamily pic_to_lelo(const Field& F, const BivarPoly& E, std::size_t K) {
  const long dx = E.degree_x();
  if (dx < 1) throw ValidationError("pic_to_lelo: E must have positive X-degree");
  const std::size_t s = static_cast<std::size_t>(dx);
  if (E.x_slice(s) != Poly::constant(1)) throw ValidationError("pic_to_lelo: E must be monic in X");
  std::vector<Poly> H(s);
  for (std::size_t i = 0; i < s; ++i) H[i] = neg(F, E.x_slice(i));
  std::vector<std::vector<Poly>> tables(s, std::vector<Poly>(K));
  std::vector<Poly> R(s);
  R[0] = Poly::constant(1);
  for (std::size_t e = 0; e < K; ++e) {
    if (e > 0) {
      Poly top = R[s - 1];
      for (std::size_t i = s; i-- > 1;) R[i] = R[i - 1];
      R[0] = Poly{};
      if (!top.is_zero())
        for (std::size_t i = 0; i < s; ++i) R[i] = add(F, R[i], mul(F, top, H[i]));
    }
    for (std::size_t i = 0; i < s; ++i) tables[i][e] = R[i];
  }
  std::vector<Operator> ops;
  std::vector<std::string> names;
  PolyMatrix M(s, s);
  for (std::size_t i = 0; i < s; ++i) {
    ops.push_back(Operator::tabulated(std::move(tables[i])));
    names.push_back("R" + std::to_string(i));
    if (i > 0) M(i, i - 1) = Poly::constant(1);
    M(i, s - 1) = add(F, M(i, s - 1), H[i]);
  }
  return {OperatorFamily(F, std::move(ops), std::move(names), K), std::move(M)};
}

/// The natural bivariate modulus of a code family: E(X, a_i) = E_i(X).
inline BivarPoly family_bivariate(const Field& F, const FamilySpec& spec) {
  BivarPoly E(std::vector<Poly>{Poly::constant(1)});
  auto factor = [&](Elem cy, Elem c0) {
    // X - cy*Y - c0
    return BivarPoly(std::vector<Poly>{Poly(std::vector<Elem>{F.neg(c0), 1}), Poly::constant(F.neg(cy))});
  };
  switch (spec.family) {
    case Family::rs:
    case Family::mult:
      return pow(F, factor(1, 0), spec.s);
    case Family::frs: {
      Elem g = 1;
      for (std::size_t j = 0; j < spec.s; ++j, g = F.mul(g, spec.gamma)) E = mul(F, E, factor(g, 0));
      return E;
    }
    case Family::additive_frs:
      for (std::size_t j = 0; j < spec.s; ++j) E = mul(F, E, factor(1, F.mul(F.from_uint(j), spec.beta)));
      return E;
    case Family::affine_frs: {
      const LinearForm l(F, spec.alpha, spec.beta);
      for (std::size_t j = 0; j < spec.s; ++j) {
        auto [a, b] = l.iterate(j);
        E = mul(F, E, factor(a, b));
      }
      return E;
    }
  }
  throw std::logic_error("unreachable");
}

/// Minimal-degree monic polynomial E with L(E)(a) = 0 for every operator, from the images of X^e, e < K.
inline Poly ideal_generator(const OperatorFamily& fam, Elem a, std::size_t K) {
  const Field& F = fam.field();
  Matrix A(fam.size(), K);
  for (std::size_t e = 0; e < K; ++e) {
    auto c = fam.column(e, a);
    for (std::size_t i = 0; i < fam.size(); ++i) A(i, e) = c[i];
  }
  auto ker = kernel_basis(F, A, 1);
  if (ker.empty()) throw ValidationError("ideal_generator: no relation among X^e for e < K");
  Poly g(ker[0]);
  if (!g.is_monic()) throw std::logic_error("ideal_generator: kernel vector not monic");
  return g;
}

inline Poly ideal_generator(const OperatorFamily& fam, Elem a) { return ideal_generator(fam, a, fam.size() + 1); }

/// Operator-form codeword: for each point, (L_0(f)(a), ..., L_{s-1}(f)(a)).
inline std::vector<std::vector<Elem>> operator_encode(const OperatorFamily& fam, const Poly& f,
                                                      const std::vector<Elem>& points) {
  std::vector<std::vector<Elem>> out;
  out.reserve(points.size());
  for (Elem a : points) out.push_back(fam.encode_at(f, a));
  return out;
}

/// Diag(G)[i][e] = coefficient of X^e in G_i(X^e). Throws if some G_i raises degree.
inline Matrix diag_matrix(const OperatorFamily& G, std::size_t k) {
  Matrix D(G.size(), k);
  for (std::size_t i = 0; i < G.size(); ++i) {
    for (std::size_t e = 0; e < k; ++e) {
      Poly img = G.action(i, e);
      if (img.degree() > static_cast<long>(e)) {
        throw ValidationError("operator " + G.name(i) + " is not degree-preserving at X^" + std::to_string(e));
      }
      D(i, e) = img[e];
    }
  }
  return D;
}

/// Every m columns of an m x k matrix independent: checks random m-subsets and all consecutive blocks.
/// Returns the first failing column set, if any.
inline std::optional<std::vector<std::size_t>> verify_diag_mds(const Field& F, const Matrix& D, std::size_t trials,
                                                               SplitMix64& rng) {
  const std::size_t m = D.rows(), k = D.cols();
  if (m == 0 || m > k) throw std::invalid_argument("verify_diag_mds: need 0 < m <= k");
  auto check = [&](const std::vector<std::size_t>& cols) {
    Matrix S(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) S(i, j) = D(i, cols[j]);
    return rank(F, S) == m;
  };
  for (std::size_t start = 0; start < k; start += m) {
    std::vector<std::size_t> cols;
    const std::size_t s0 = std::min(start, k - m);
    for (std::size_t j = 0; j < m; ++j) cols.push_back(s0 + j);
    if (!check(cols)) return cols;
  }
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<std::size_t> cols;
    while (cols.size() < m) {
      std::size_t c = rng.below(k);
      if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
    }
    std::sort(cols.begin(), cols.end());
    if (!check(cols)) return cols;
  }
  return std::nullopt;
}

/// T(G(X^e))(a) for e < K, without materialising G(X^e) when both operators are structured.
inline std::vector<Elem> compose_images_at(const Binomials& B, const Operator& T, const Operator& G, Elem a,
                                           std::size_t K) {
  const Field& F = B.field();
  std::vector<Elem> out(K, 0);
  if (T.is_tabulated() || G.is_tabulated()) {
    for (std::size_t e = 0; e < K; ++e) out[e] = T.apply_at(B, G.action(B, e), a);
    return out;
  }
  for (const auto& t : T.terms()) {
    const Elem x0 = F.add(F.mul(t.scale, a), t.shift);
    const Elem ta = eval(F, t.multiplier, a);
    if (ta == 0) continue;
    for (const auto& g : G.terms()) {
      const Elem z = F.add(F.mul(g.scale, x0), g.shift);
      Elem lam_b = 1;
      for (std::uint32_t b = 0; b <= t.order; ++b, lam_b = F.mul(lam_b, g.scale)) {
        const std::uint32_t dd = t.order - b;
        const Elem pd = eval(F, derivative(F, g.multiplier, dd), x0);
        if (pd == 0) continue;
        const Elem kb = F.mul(F.mul(ta, B.binom(t.order, b)), F.mul(pd, lam_b));
        const std::size_t lo = g.order + b;
        Elem zp = 1;
        for (std::size_t e = lo; e < K; ++e) {
          out[e] = F.add(out[e], F.mul(kb, F.mul(B.falling(e, lo), zp)));
          zp = F.mul(zp, z);
        }
      }
    }
  }
  return out;
}

}  // namespace pic
