#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "pic/field.hpp"
#include "pic/ideal_codes.hpp"
#include "pic/linear_form.hpp"
#include "pic/linop.hpp"
#include "pic/matrix.hpp"
#include "pic/poly.hpp"
#include "pic/rng.hpp"

namespace pic {

enum class ConstraintStrategy {
  generic,            // symbolic M(X)^d, then evaluate at a
  diagonal,           // M diagonal: powers of the evaluated diagonal
  shifted_nilpotent,  // M = X I + N: v <- a v + N v
  evaluated,          // any M: v <- M(a) v
};

inline std::string strategy_name(ConstraintStrategy s) {
  switch (s) {
    case ConstraintStrategy::generic: return "generic";
    case ConstraintStrategy::diagonal: return "diagonal";
    case ConstraintStrategy::shifted_nilpotent: return "shifted_nilpotent";
    case ConstraintStrategy::evaluated: return "evaluated";
  }
  return "?";
}

struct CompositionScheme {
  std::string regime;
  std::size_t m = 0, r = 0, n = 0, s = 0, k = 0;
  OperatorFamily G;
  OperatorFamily T;
  PolyMatrix M_T;
  std::vector<Elem> points;
  std::vector<std::vector<Matrix>> h;  // h[point index][i], r x s, residue basis
  std::size_t t_ideal_degree = 0;
  ConstraintStrategy strategy = ConstraintStrategy::evaluated;

  std::size_t D() const { return n * r / m; }
  std::size_t t_min() const { return (D() + k - 1) / r + 1; }
};

struct SchemeChecks {
  bool extendibility = true;  // verify M_T up to D + k
  std::size_t mds_trials = 200;
  std::uint64_t seed = 0x6d6473;
};

namespace detail {

struct SchemeOps {
  std::string regime;
  std::vector<Operator> G;
  std::vector<std::string> G_names;
  ExtendibleFamily T;
};

// b_i = column i of B^{-1}, B[h][j] = pts[j]^h.
inline std::vector<std::vector<Elem>> inverse_vandermonde_columns(const Field& F, const std::vector<Elem>& pts) {
  const std::size_t m = pts.size();
  Matrix B(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    Elem x = 1;
    for (std::size_t h = 0; h < m; ++h, x = F.mul(x, pts[j])) B(h, j) = x;
  }
  std::vector<std::vector<Elem>> out;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Elem> e(m, 0);
    e[i] = 1;
    auto sol = solve_linear(F, B, e);
    if (!sol.particular || !sol.kernel.empty()) throw ValidationError("interpolation points for G are not distinct");
    out.push_back(*sol.particular);
  }
  return out;
}

// G_i = X^i / i! D^i
inline void hasse_like_G(const Field& F, const Binomials& B, std::size_t m, SchemeOps& ops) {
  for (std::size_t i = 0; i < m; ++i) {
    ops.G.push_back(Operator::single({Poly::monomial(B.inv_factorial(i), i), static_cast<std::uint32_t>(i), 1, 0}));
    ops.G_names.push_back("X^" + std::to_string(i) + "/" + std::to_string(i) + "! D^" + std::to_string(i));
  }
  (void)F;
}

// G_i = X^i sum_c b_i(c) S_c where S_c f = f(a_c X + b_c)
inline void twisted_G(const Field& F, const std::vector<Elem>& pts, const std::vector<std::pair<Elem, Elem>>& maps,
                      SchemeOps& ops) {
  const std::size_t m = pts.size();
  auto b = inverse_vandermonde_columns(F, pts);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<OpTerm> terms;
    for (std::size_t c = 0; c < m; ++c) {
      if (b[i][c] == 0) continue;
      terms.push_back({Poly::monomial(b[i][c], i), 0, maps[c].first, maps[c].second});
    }
    ops.G.push_back(Operator::structured(std::move(terms)));
    ops.G_names.push_back("X^" + std::to_string(i) + " sum_c b_" + std::to_string(i) + "(c) S_c");
  }
}

inline SchemeOps scheme_operators(const PolyIdealCode& code, std::size_t m) {
  const Field& F = code.F;
  const FamilySpec& sp = code.spec;
  const std::size_t s = sp.s, k = sp.k, n = sp.n;
  const std::uint64_t p = F.modulus();
  if (m < 1 || m >= s) throw ValidationError("capacity decoding needs 1 <= m < s");
  const Binomials B(F, std::max(k, s) + 1);
  auto bound_for = [&](std::size_t r) { return n * r / m + k + 1; };
  SchemeOps ops;
  auto take_prefix = [&](const ExtendibleFamily& fam, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      ops.G.push_back(fam.ops.op(i));
      ops.G_names.push_back(fam.ops.name(i));
    }
  };
  switch (sp.family) {
    case Family::rs:
      throw ValidationError("capacity decoding needs s > 1 (rs has s = 1)");
    case Family::frs: {
      if (F.order(sp.gamma) < k) throw ValidationError("frs scheme requires order(gamma) >= k");
      const std::size_t r = s - m + 1;
      ops.regime = "frs";
      take_prefix(family_operators(F, sp, m, k), m);
      ops.T = family_operators(F, sp, r, bound_for(r));
      return ops;
    }
    case Family::mult: {
      if (p < std::max(s, k)) throw ValidationError("mult scheme requires char >= max(s, k)");
      const std::size_t r = s - m + 1;
      ops.regime = "mult";
      hasse_like_G(F, B, m, ops);
      ops.T = family_operators(F, sp, r, bound_for(r));
      return ops;
    }
    case Family::additive_frs: {
      if (p < std::max(s, k)) throw ValidationError("additive_frs scheme requires char >= max(s, k)");
      const std::size_t r = s - m + 1;
      ops.regime = "additive_frs";
      std::vector<Elem> pts;
      std::vector<std::pair<Elem, Elem>> maps;
      for (std::size_t c = 0; c < m; ++c) {
        pts.push_back(F.from_uint(c));
        maps.push_back({1, F.mul(F.from_uint(c), sp.beta)});
      }
      twisted_G(F, pts, maps, ops);
      ops.T = family_operators(F, sp, r, bound_for(r));
      return ops;
    }
    case Family::affine_frs: {
      const LinearForm l(F, sp.alpha, sp.beta);
      const std::uint64_t ord = l.order();
      const std::uint64_t u = l.alpha_order();
      if (u == 1) {
        if (l.beta() == 0) throw ValidationError("affine_frs scheme requires beta != 0 when alpha = 1");
        if (p < std::max(s, k)) throw ValidationError("affine_frs (u=1) scheme requires char >= max(s, k)");
        const std::size_t r = s - m + 1;
        ops.regime = "affine_frs/u=1";
        std::vector<Elem> pts;
        std::vector<std::pair<Elem, Elem>> maps;
        for (std::size_t c = 0; c < m; ++c) {
          pts.push_back(F.from_uint(c));
          maps.push_back({1, F.mul(F.from_uint(c), l.beta())});
        }
        twisted_G(F, pts, maps, ops);
        ops.T = family_operators(F, sp, r, bound_for(r));
        return ops;
      }
      if (ord >= k) {
        const std::size_t r = s - m + 1;
        ops.regime = "affine_frs/ord>=k";
        take_prefix(family_operators(F, sp, m, k), m);
        ops.T = family_operators(F, sp, r, bound_for(r));
        return ops;
      }
      if (p <= k) throw ValidationError("affine_frs scheme requires char > k when ord(l) < k");
      if (l.beta() == 0) throw ValidationError("affine_frs scheme requires beta != 0 when ord(l) < k");
      const std::uint64_t v = s / u;
      if (v * v >= s) {
        if (v <= m) throw ValidationError("affine_frs (u>1, v>=sqrt(s)) scheme requires m < v");
        const std::size_t r = static_cast<std::size_t>((v - m) * u);
        ops.regime = "affine_frs/u>1,v>=sqrt(s)";
        hasse_like_G(F, B, m, ops);
        ops.T = family_operators(F, sp, r, bound_for(r));
        return ops;
      }
      if (u * u > s) {
        if (m >= u) throw ValidationError("affine_frs (u>sqrt(s)) scheme requires m < u");
        const std::size_t r = s - m + 1;
        ops.regime = "affine_frs/u>sqrt(s)";
        std::vector<Elem> pts;
        std::vector<std::pair<Elem, Elem>> maps;
        for (std::size_t c = 0; c < m; ++c) {
          auto [ac, bc] = l.iterate(c);
          const Elem aj = F.pow(l.alpha(), c);
          pts.push_back(F.div(F.mul(l.beta(), F.sub(aj, 1)), aj));
          maps.push_back({ac, bc});
        }
        twisted_G(F, pts, maps, ops);
        ops.T = family_operators(F, sp, r, bound_for(r));
        return ops;
      }
      throw ValidationError("affine_frs parameters fall in no supported regime (u > 1, v < sqrt(s), u <= sqrt(s))");
    }
  }
  throw std::logic_error("unreachable");
}

// Residue coordinates of X^e mod E for e < K, as a K x s matrix.
inline Matrix monomial_residues(const Field& F, const Poly& E, std::size_t K) {
  const std::size_t s = static_cast<std::size_t>(E.degree());
  Matrix R(K, s);
  std::vector<Elem> cur(s, 0);
  if (s > 0) cur[0] = 1;
  for (std::size_t e = 0; e < K; ++e) {
    if (e > 0) {
      const Elem top = cur[s - 1];
      for (std::size_t i = s; i-- > 1;) cur[i] = cur[i - 1];
      cur[0] = 0;
      if (top)
        for (std::size_t i = 0; i < s; ++i) cur[i] = F.sub(cur[i], F.mul(top, E[i]));
    }
    std::copy(cur.begin(), cur.end(), R.row(e).begin());
  }
  return R;
}

}  // namespace detail

/// h_{i,a} for every i (r x s each, residue basis), verified for all e < k.
inline std::vector<Matrix> derive_h(const OperatorFamily& G, const OperatorFamily& T, const Poly& E_a, Elem a,
                                    std::size_t k) {
  const Field& F = G.field();
  const std::size_t s = static_cast<std::size_t>(E_a.degree());
  const std::size_t r = T.size();
  const Matrix RES = detail::monomial_residues(F, E_a, k);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < G.size(); ++i) {
    std::vector<std::vector<Elem>> img(r);
    for (std::size_t j = 0; j < r; ++j) img[j] = compose_images_at(G.binomials(), T.op(j), G.op(i), a, k);
    Matrix H(r, s);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t e = 0; e < std::min(s, k); ++e) H(j, e) = img[j][e];
    for (std::size_t e = s; e < k; ++e) {
      for (std::size_t j = 0; j < r; ++j) {
        if (F.dot(H.row(j), RES.row(e)) != img[j][e]) {
          throw ValidationError("scheme does not list-compose at a=" + std::to_string(a) + ", exponent " +
                                std::to_string(e) + " (G_" + std::to_string(i) + ", T_" + std::to_string(j) + ")");
        }
      }
    }
    out.push_back(std::move(H));
  }
  return out;
}

/// Build G, T and h for a code and verify every hypothesis the decoder relies on.
inline CompositionScheme build_scheme(const PolyIdealCode& code, std::size_t m, const SchemeChecks& checks = {}) {
  const Field& F = code.F;
  detail::SchemeOps ops = detail::scheme_operators(code, m);
  const std::size_t r = ops.T.ops.size();
  if (r < 1) throw ValidationError("scheme has no T operators");
  CompositionScheme sc{ops.regime,
                       m,
                       r,
                       code.n(),
                       code.s(),
                       code.k(),
                       OperatorFamily(F, ops.G, ops.G_names, code.k()),
                       ops.T.ops,
                       ops.T.M,
                       code.points,
                       {},
                       0,
                       ConstraintStrategy::evaluated};
  const std::size_t K = sc.D() + sc.k;
  if (sc.T.bound() < K) sc.T = sc.T.with_bound(K);

  // Diag(G): degree preservation and MDS
  const Matrix Dg = diag_matrix(sc.G, sc.k);
  SplitMix64 rng(checks.seed);
  if (auto bad = verify_diag_mds(F, Dg, checks.mds_trials, rng)) {
    throw ValidationError("Diag(G) is not MDS: columns starting at " + std::to_string(bad->front()) +
                          " are dependent");
  }

  // T: linear extendibility and ideal generators of degree r, pairwise coprime
  if (checks.extendibility) {
    if (auto bad = verify_linear_extendibility(sc.T, sc.M_T, K)) {
      throw ValidationError("T is not linearly extendible at exponent " + std::to_string(bad->e));
    }
  }
  std::vector<Poly> gens;
  for (Elem a : code.points) {
    Poly g = ideal_generator(sc.T, a, r + 1);
    if (g.degree() != static_cast<long>(r)) {
      throw ValidationError("T ideal at a=" + std::to_string(a) + " has degree " + std::to_string(g.degree()) +
                            ", expected " + std::to_string(r));
    }
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (gcd(F, gens[j], g).degree() != 0) throw ValidationError("T ideal generators are not pairwise coprime");
    }
    gens.push_back(std::move(g));
  }
  sc.t_ideal_degree = r;

  for (std::size_t t = 0; t < code.n(); ++t) sc.h.push_back(derive_h(sc.G, sc.T, code.moduli[t], code.points[t], sc.k));

  if (sc.M_T.is_diagonal()) sc.strategy = ConstraintStrategy::diagonal;
  else if (sc.M_T.is_shifted_constant()) sc.strategy = ConstraintStrategy::shifted_nilpotent;
  else sc.strategy = ConstraintStrategy::evaluated;
  return sc;
}

/// n*r constraint rows in m(D+1) unknowns q_{i,d} (column i*(D+1)+d).
inline Matrix capacity_constraints(const CompositionScheme& sc, const PolyIdealCode& code, const Codeword& y,
                                   ConstraintStrategy strategy) {
  const Field& F = code.F;
  check_received(code, y);
  const std::size_t D = sc.D(), r = sc.r, m = sc.m;
  Matrix A(sc.n * r, m * (D + 1));
  std::vector<PolyMatrix> powers;
  if (strategy == ConstraintStrategy::generic) {
    powers.push_back(PolyMatrix::identity(r));
    for (std::size_t d = 1; d <= D; ++d) powers.push_back(mul(F, sc.M_T, powers.back()));
  }
  for (std::size_t t = 0; t < sc.n; ++t) {
    const Elem a = sc.points[t];
    const std::vector<Elem> c = y[t].padded(sc.s);
    const Matrix Ma = sc.M_T.eval(F, a);
    std::vector<std::vector<std::pair<std::size_t, Elem>>> sparse(r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        if (Ma(i, j) != 0) sparse[i].push_back({j, Ma(i, j)});
    std::vector<std::vector<std::pair<std::size_t, Elem>>> off(r);  // N part for shifted_nilpotent
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        if (i != j && Ma(i, j) != 0) off[i].push_back({j, Ma(i, j)});
    std::vector<Matrix> evaluated_powers;
    if (strategy == ConstraintStrategy::generic)
      for (const auto& P : powers) evaluated_powers.push_back(P.eval(F, a));
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<Elem> v = mul(F, sc.h[t][i], c);
      const std::vector<Elem> y0 = v;
      for (std::size_t d = 0; d <= D; ++d) {
        const std::size_t col = i * (D + 1) + d;
        if (strategy == ConstraintStrategy::generic) v = mul(F, evaluated_powers[d], y0);
        for (std::size_t j = 0; j < r; ++j) A(t * r + j, col) = v[j];
        if (d == D || strategy == ConstraintStrategy::generic) continue;
        std::vector<Elem> nv(r, 0);
        switch (strategy) {
          case ConstraintStrategy::diagonal:
            for (std::size_t j = 0; j < r; ++j) nv[j] = F.mul(Ma(j, j), v[j]);
            break;
          case ConstraintStrategy::shifted_nilpotent:
            for (std::size_t j = 0; j < r; ++j) {
              Elem acc = F.mul(a, v[j]);
              for (const auto& [q, x] : off[j]) acc = F.add(acc, F.mul(x, v[q]));
              nv[j] = acc;
            }
            break;
          default:
            for (std::size_t j = 0; j < r; ++j) {
              Elem acc = 0;
              for (const auto& [q, x] : sparse[j]) acc = F.add(acc, F.mul(x, v[q]));
              nv[j] = acc;
            }
            break;
        }
        v = std::move(nv);
      }
    }
  }
  return A;
}

/// Nonzero (Q_0, ..., Q_{m-1}) with deg Q_i <= D satisfying every constraint.
inline std::vector<Poly> interpolate_linear_Q(const CompositionScheme& sc, const PolyIdealCode& code, const Codeword& y,
                                              std::optional<ConstraintStrategy> strategy = std::nullopt) {
  const Matrix A = capacity_constraints(sc, code, y, strategy.value_or(sc.strategy));
  auto ker = kernel_basis(code.F, A, 1);
  if (ker.empty()) throw GuaranteeViolation("interpolation system has a trivial kernel");
  const std::size_t D = sc.D();
  std::vector<Poly> Q;
  for (std::size_t i = 0; i < sc.m; ++i)
    Q.emplace_back(std::vector<Elem>(ker[0].begin() + i * (D + 1), ker[0].begin() + (i + 1) * (D + 1)));
  return Q;
}

/// R(f) = sum_i Q_i G_i(f)
inline Poly residual(const CompositionScheme& sc, const std::vector<Poly>& Q, const Poly& f) {
  const Field& F = sc.G.field();
  Poly R;
  for (std::size_t i = 0; i < sc.m; ++i) R = add(F, R, mul(F, Q[i], sc.G.op(i).apply(sc.G.binomials(), f)));
  return R;
}

enum class ReconstructionPath { automatic, evaluation, coefficients };

/// Matrix of f -> sum_i Q_i G_i(f) on f of degree < k, either as values at D + k points or as coefficients.
inline Matrix reconstruction_matrix(const CompositionScheme& sc, const std::vector<Poly>& Q,
                                    ReconstructionPath path = ReconstructionPath::automatic) {
  const Field& F = sc.G.field();
  const Binomials& B = sc.G.binomials();
  const std::size_t k = sc.k;
  std::size_t N = 0;
  for (const auto& q : Q) N = std::max(N, q.size());
  N = N + k - 1;  // deg R <= max deg Q + k - 1
  if (N == 0) N = 1;
  bool structured = true;
  for (const auto& op : sc.G.ops()) structured = structured && !op.is_tabulated();
  if (path == ReconstructionPath::automatic) {
    path = structured && F.modulus() >= N ? ReconstructionPath::evaluation : ReconstructionPath::coefficients;
  }
  Matrix A(N, k);
  if (path == ReconstructionPath::coefficients) {
    for (std::size_t e = 0; e < k; ++e) {
      Poly col;
      for (std::size_t i = 0; i < sc.m; ++i) col = add(F, col, mul(F, Q[i], sc.G.action(i, e)));
      if (col.size() > N) throw GuaranteeViolation("G is not degree-preserving");
      for (std::size_t t = 0; t < col.size(); ++t) A(t, e) = col[t];
    }
    return A;
  }
  if (!structured || F.modulus() < N) throw std::invalid_argument("evaluation path needs structured G and p >= D + k");
  // group terms by (order, scale, shift): weight(x) = sum_i Q_i(x) sum_terms multiplier(x)
  using Key = std::tuple<std::uint32_t, Elem, Elem>;
  std::map<Key, std::vector<std::pair<std::size_t, Poly>>> groups;
  for (std::size_t i = 0; i < sc.m; ++i)
    for (const auto& t : sc.G.op(i).terms()) groups[{t.order, t.scale, t.shift}].push_back({i, t.multiplier});
  for (std::size_t row = 0; row < N; ++row) {
    const Elem x = F.from_uint(row);
    std::vector<Elem> qx(sc.m);
    for (std::size_t i = 0; i < sc.m; ++i) qx[i] = eval(F, Q[i], x);
    auto out = A.row(row);
    for (const auto& [key, members] : groups) {
      const auto [d, lam, mu] = key;
      Elem w = 0;
      for (const auto& [i, P] : members) w = F.add(w, F.mul(qx[i], eval(F, P, x)));
      if (w == 0) continue;
      const Elem z = F.add(F.mul(lam, x), mu);
      Elem zp = 1;
      for (std::size_t e = d; e < k; ++e) {
        out[e] = F.add(out[e], F.mul(w, F.mul(B.falling(e, d), zp)));
        zp = F.mul(zp, z);
      }
    }
  }
  return A;
}

struct DecodeResult {
  Poly particular;  // the system is homogeneous, so this is always zero
  std::vector<Poly> kernel_basis;
  std::optional<std::vector<ListEntry>> enumerated;
  std::vector<Poly> Q;
  std::size_t t_min = 0;
  std::size_t D = 0;
  std::size_t dim() const { return kernel_basis.size(); }
};

/// Kernel of f -> sum_i Q_i G_i(f) on F_{<k}[X]; its dimension is at most m - 1.
inline DecodeResult reconstruct_space(const CompositionScheme& sc, const std::vector<Poly>& Q,
                                      ReconstructionPath path = ReconstructionPath::automatic) {
  bool nonzero = false;
  for (const auto& q : Q) nonzero = nonzero || !q.is_zero();
  if (!nonzero) throw GuaranteeViolation("reconstruction needs a nonzero Q");
  const Matrix A = reconstruction_matrix(sc, Q, path);
  DecodeResult res;
  for (auto& v : kernel_basis(sc.G.field(), A)) res.kernel_basis.emplace_back(std::move(v));
  if (res.kernel_basis.size() > sc.m - 1) {
    throw GuaranteeViolation("Diag distance hypothesis violated: kernel dimension " +
                             std::to_string(res.kernel_basis.size()) + " > m - 1 = " + std::to_string(sc.m - 1));
  }
  res.Q = Q;
  res.t_min = sc.t_min();
  res.D = sc.D();
  return res;
}

/// Is f in the span of the basis?
inline bool in_span(const Field& F, const std::vector<Poly>& basis, const Poly& f, std::size_t k) {
  if (f.is_zero()) return true;
  if (basis.empty()) return false;
  Matrix A(k, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t e = 0; e < k; ++e) A(e, j) = basis[j][e];
  return solve_linear(F, A, f.padded(k)).particular.has_value();
}

inline DecodeResult list_decode_capacity(const PolyIdealCode& code, const CompositionScheme& sc, const Codeword& y,
                                         std::uint64_t enumeration_cap = 1000000) {
  const Field& F = code.F;
  DecodeResult res = reconstruct_space(sc, interpolate_linear_Q(sc, code, y));
  const double count = std::pow(static_cast<double>(F.modulus()), static_cast<double>(res.dim()));
  if (count <= static_cast<double>(enumeration_cap)) {
    std::vector<ListEntry> list;
    const std::size_t dim = res.dim(), n = code.n(), sdim = code.s();
    // encoding is linear: combine the basis codewords instead of re-encoding
    std::vector<std::vector<Elem>> enc(dim);
    for (std::size_t j = 0; j < dim; ++j)
      for (const auto& sym : encode(code, res.kernel_basis[j])) {
        auto v = sym.padded(sdim);
        enc[j].insert(enc[j].end(), v.begin(), v.end());
      }
    std::vector<Elem> recv;
    for (const auto& sym : y) {
      auto v = sym.padded(sdim);
      recv.insert(recv.end(), v.begin(), v.end());
    }
    std::vector<Elem> coef(dim, 0), word(n * sdim, 0);
    const std::uint64_t total = static_cast<std::uint64_t>(count + 0.5);
    for (std::uint64_t it = 0; it < total; ++it) {
      std::size_t agree = 0;
      for (std::size_t t = 0; t < n; ++t)
        agree += std::equal(word.begin() + t * sdim, word.begin() + (t + 1) * sdim, recv.begin() + t * sdim);
      if (agree >= res.t_min) {
        Poly f;
        for (std::size_t j = 0; j < dim; ++j)
          if (coef[j]) f = add(F, f, scale(F, res.kernel_basis[j], coef[j]));
        list.push_back({f, agree});
      }
      // odometer step; word tracks sum_j coef[j] enc[j]
      for (std::size_t j = 0; j < dim; ++j) {
        const bool wrap = coef[j] + 1 == F.modulus();
        coef[j] = wrap ? 0 : coef[j] + 1;
        // p * enc[j] = 0, so the wrap also just adds
        for (std::size_t q = 0; q < word.size(); ++q) word[q] = F.add(word[q], enc[j][q]);
        if (!wrap) break;
      }
    }
    std::sort(list.begin(), list.end(), list_order);
    res.enumerated = std::move(list);
  }
  return res;
}

}  // namespace pic
