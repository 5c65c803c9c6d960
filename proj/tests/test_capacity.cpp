#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace pic;
using support::P;
using support::spec;

namespace {

using oracle::md;
using oracle::pw;

// h in the L-basis times the map residue -> L-values gives h in the residue basis
std::vector<std::vector<std::int64_t>> to_residue_basis(const std::vector<std::vector<std::int64_t>>& hL,
                                                        const std::vector<std::vector<std::int64_t>>& V, std::int64_t p) {
  std::vector<std::vector<std::int64_t>> out(hL.size(), std::vector<std::int64_t>(V[0].size(), 0));
  for (std::size_t j = 0; j < hL.size(); ++j)
    for (std::size_t c = 0; c < V.size(); ++c)
      for (std::size_t e = 0; e < V[0].size(); ++e) out[j][e] = md(out[j][e] + hL[j][c] * V[c][e], p);
  return out;
}

std::vector<std::vector<std::int64_t>> as_rows(const Matrix& M) {
  std::vector<std::vector<std::int64_t>> out(M.rows(), std::vector<std::int64_t>(M.cols()));
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) out[i][j] = static_cast<std::int64_t>(M(i, j));
  return out;
}

std::int64_t fact(std::int64_t n, std::int64_t p) {
  std::int64_t f = 1;
  for (std::int64_t i = 2; i <= n; ++i) f = md(f * i, p);
  return f;
}

bool in_list(const std::vector<ListEntry>& L, const Poly& f) {
  for (const auto& e : L)
    if (e.message == f) return true;
  return false;
}

}  // namespace

TEST(SchemeShape, FrsAcceptanceNumbers) {
  // only the parameter arithmetic; the full build runs in the acceptance binary
  CompositionScheme sc;
  sc.n = 50, sc.s = 64, sc.k = 1600, sc.m = 8, sc.r = 64 - 8 + 1;
  EXPECT_EQ(sc.r, 57u);
  EXPECT_EQ(sc.D(), 356u);
  EXPECT_EQ(sc.t_min(), 35u);
}

TEST(SchemeShape, TinyFrs) {
  auto code = build_code(spec(Family::frs, 29, 4, 6, 4, 12));
  auto sc = build_scheme(code, 2);
  EXPECT_EQ(sc.r, 3u);
  EXPECT_EQ(sc.t_ideal_degree, 3u);
  EXPECT_EQ(sc.D(), 9u);
  EXPECT_EQ(sc.t_min(), 5u);
  EXPECT_EQ(sc.strategy, ConstraintStrategy::diagonal);
  EXPECT_EQ(sc.regime, "frs");
}

TEST(SchemeShape, Preconditions) {
  auto frs = build_code(spec(Family::frs, 29, 4, 6, 4, 12));
  EXPECT_THROW(build_scheme(frs, 0), ValidationError);
  EXPECT_THROW(build_scheme(frs, 4), ValidationError);
  EXPECT_THROW(build_scheme(build_code(spec(Family::rs, 29, 4, 16, 1)), 1), ValidationError);
  // gamma = 12 has order 4 < k = 6
  EXPECT_THROW(build_scheme(build_code(spec(Family::frs, 29, 6, 1, 4, 12)), 2), ValidationError);
  // alpha = 1, beta = 0 is the derivative family, which has no capacity scheme here
  EXPECT_THROW(build_scheme(build_code(spec(Family::affine_frs, 29, 4, 6, 4, 0, 1, 0)), 2), ValidationError);
}

TEST(DeriveH, FrsSelectionPattern) {
  const std::int64_t p = 29, g = 2;
  auto code = build_code(spec(Family::frs, 29, 8, 5, 4, 2));
  auto sc = build_scheme(code, 2);
  ASSERT_EQ(sc.r, 3u);
  for (std::size_t t = 0; t < code.n(); ++t) {
    const std::int64_t a = code.points[t];
    std::vector<std::vector<std::int64_t>> V(4, std::vector<std::int64_t>(4));
    for (int c = 0; c < 4; ++c)
      for (int e = 0; e < 4; ++e) V[c][e] = pw(md(pw(g, c, p) * a, p), e, p);
    for (std::size_t i = 0; i < 2; ++i) {
      std::vector<std::vector<std::int64_t>> hL(3, std::vector<std::int64_t>(4, 0));
      for (std::size_t j = 0; j < 3; ++j) hL[j][i + j] = 1;
      EXPECT_EQ(as_rows(sc.h[t][i]), to_residue_basis(hL, V, p)) << "a=" << a << " i=" << i;
    }
  }
}

TEST(DeriveH, MultLeibnizForm) {
  // G_i = X^i/i! D^i, T_j = D^j: T_j(G_i f)(a) = sum_t binom(j,t) a^{i-t}/(i-t)! (D^{i+j-t} f)(a)
  const std::int64_t p = 29;
  auto code = build_code(spec(Family::mult, 29, 8, 6, 4));
  auto sc = build_scheme(code, 2);
  ASSERT_EQ(sc.r, 3u);
  for (std::size_t t = 0; t < code.n(); ++t) {
    const std::int64_t a = code.points[t];
    std::vector<std::vector<std::int64_t>> V(4, std::vector<std::int64_t>(4, 0));
    for (int c = 0; c < 4; ++c)
      for (int e = c; e < 4; ++e) V[c][e] = md(fact(e, p) * oracle::inv(fact(e - c, p), p) % p * pw(a, e - c, p), p);
    for (int i = 0; i < 2; ++i) {
      std::vector<std::vector<std::int64_t>> hL(3, std::vector<std::int64_t>(4, 0));
      for (int j = 0; j < 3; ++j)
        for (int b = 0; b <= std::min(i, j); ++b)
          hL[j][i + j - b] = md(hL[j][i + j - b] + oracle::binom(j, b) * pw(a, i - b, p) % p *
                                                       oracle::inv(fact(i - b, p), p),
                                p);
      EXPECT_EQ(as_rows(sc.h[t][i]), to_residue_basis(hL, V, p)) << "a=" << a << " i=" << i;
    }
  }
}

TEST(DeriveH, AffineUnitAlphaIsAdditive) {
  auto a = build_code(spec(Family::affine_frs, 29, 4, 6, 4, 0, 1, 1));
  auto b = build_code(spec(Family::additive_frs, 29, 4, 6, 4, 0, 1, 1));
  auto sa = build_scheme(a, 2), sb = build_scheme(b, 2);
  EXPECT_EQ(sa.r, sb.r);
  EXPECT_EQ(sa.M_T, sb.M_T);
  EXPECT_EQ(sa.h, sb.h);
  EXPECT_EQ(diag_matrix(sa.G, 4), diag_matrix(sb.G, 4));
  EXPECT_EQ(sa.strategy, sb.strategy);
}

TEST(DeriveH, DetectsBrokenComposition) {
  // a T family that is not the code's own operators cannot list-compose
  auto code = build_code(spec(Family::frs, 29, 8, 5, 4, 2));
  auto sc = build_scheme(code, 2);
  auto wrong = family_operators(code.F, spec(Family::frs, 29, 8, 6, 4, 3), 3, 20).ops;
  EXPECT_THROW(derive_h(sc.G, wrong, code.moduli[0], code.points[0], code.k()), ValidationError);
}

namespace {

std::vector<FamilySpec> tiny_schemes() {
  return {spec(Family::frs, 29, 4, 6, 4, 12), spec(Family::mult, 29, 4, 6, 4),
          spec(Family::additive_frs, 29, 4, 6, 4, 0, 1, 1), spec(Family::affine_frs, 29, 4, 6, 4, 0, 1, 1),
          spec(Family::affine_frs, 29, 4, 6, 4, 0, 12, 3)};
}

}  // namespace

TEST(Constraints, StrategiesAgreeWithGeneric) {
  SplitMix64 rng(21);
  for (const auto& sp : tiny_schemes()) {
    auto code = build_code(sp);
    for (std::size_t m : {1u, 2u, 3u}) {
      auto sc = build_scheme(code, m);
      for (int t = 0; t < 3; ++t) {
        auto y = support::random_word(code, rng);
        const Matrix G = capacity_constraints(sc, code, y, ConstraintStrategy::generic);
        EXPECT_EQ(capacity_constraints(sc, code, y, ConstraintStrategy::evaluated), G) << family_name(sp.family);
        EXPECT_EQ(capacity_constraints(sc, code, y, sc.strategy), G) << family_name(sp.family);
      }
    }
  }
}

TEST(Constraints, FrsDiagonalRowsClosedForm) {
  // row j at a: sum_i Q_i(gamma^j a) c_a[i+j] in the L-value basis
  auto code = build_code(spec(Family::frs, 29, 4, 6, 4, 12));
  const Field& F = code.F;
  auto sc = build_scheme(code, 2);
  SplitMix64 rng(22);
  auto y = support::random_word(code, rng);
  auto Q = interpolate_linear_Q(sc, code, y);
  for (std::size_t t = 0; t < code.n(); ++t) {
    const Elem a = code.points[t];
    for (std::size_t j = 0; j < sc.r; ++j) {
      Elem acc = 0;
      for (std::size_t i = 0; i < sc.m; ++i) {
        const Elem pt = F.mul(F.pow(12, i + j), a);
        acc = F.add(acc, F.mul(eval(F, Q[i], F.mul(F.pow(12, j), a)), eval(F, y[t], pt)));
      }
      EXPECT_EQ(acc, 0u) << "a=" << a << " j=" << j;
    }
  }
}

TEST(Interpolation, NonzeroDegreeBounded) {
  SplitMix64 rng(23);
  for (const auto& sp : tiny_schemes()) {
    auto code = build_code(sp);
    auto sc = build_scheme(code, 2);
    auto Q = interpolate_linear_Q(sc, code, support::random_word(code, rng));
    ASSERT_EQ(Q.size(), 2u);
    bool nonzero = false;
    for (const auto& q : Q) {
      EXPECT_LE(q.degree(), static_cast<long>(sc.D()));
      nonzero = nonzero || !q.is_zero();
    }
    EXPECT_TRUE(nonzero);
  }
}

TEST(Interpolation, PlantedResidualVanishes) {
  SplitMix64 rng(24);
  for (const auto& sp : tiny_schemes()) {
    auto code = build_code(sp);
    auto sc = build_scheme(code, 2);
    for (int t = 0; t < 5; ++t) {
      Poly f = random_message(code.F, sp.k, rng);
      auto Q = interpolate_linear_Q(sc, code, encode(code, f));
      Poly R = residual(sc, Q, f);
      for (Elem a : code.points)
        for (std::size_t j = 0; j < sc.r; ++j) EXPECT_EQ(sc.T.op(j).apply_at(sc.T.binomials(), R, a), 0u);
      // deg R <= D + k - 1 < r n, so R vanishes outright
      EXPECT_TRUE(R.is_zero());
    }
  }
}

TEST(Reconstruction, IdentityQForcesZero) {
  auto code = build_code(spec(Family::frs, 29, 4, 6, 4, 12));
  auto sc = build_scheme(code, 2);
  auto res = reconstruct_space(sc, {P({1}), Poly{}});
  EXPECT_EQ(res.dim(), 0u);
  EXPECT_THROW(reconstruct_space(sc, {Poly{}, Poly{}}), GuaranteeViolation);
}

TEST(Reconstruction, PathsAgree) {
  SplitMix64 rng(25);
  for (const auto& sp : tiny_schemes()) {
    auto code = build_code(sp);
    auto sc = build_scheme(code, 3);
    auto Q = interpolate_linear_Q(sc, code, support::random_word(code, rng));
    auto a = reconstruct_space(sc, Q, ReconstructionPath::coefficients);
    auto b = reconstruct_space(sc, Q, ReconstructionPath::evaluation);
    EXPECT_EQ(a.kernel_basis, b.kernel_basis) << family_name(sp.family);
  }
}

TEST(Reconstruction, BasisResidualsVanishAndDimBounded) {
  SplitMix64 rng(26);
  for (const auto& sp : tiny_schemes()) {
    auto code = build_code(sp);
    for (std::size_t m : {1u, 2u, 3u}) {
      auto sc = build_scheme(code, m);
      for (int t = 0; t < 10; ++t) {
        auto y = support::random_word(code, rng);
        auto Q = interpolate_linear_Q(sc, code, y);
        auto res = reconstruct_space(sc, Q);
        EXPECT_LE(res.dim(), m - 1);
        for (const auto& b : res.kernel_basis) EXPECT_TRUE(residual(sc, Q, b).is_zero());
      }
    }
  }
}

TEST(CapacityDecode, ContainmentAtThreshold) {
  SplitMix64 rng(27);
  for (const auto& sp : tiny_schemes()) {
    auto code = build_code(sp);
    auto sc = build_scheme(code, 2);
    const std::size_t e = code.n() - sc.t_min();
    for (int t = 0; t < 10; ++t) {
      Poly f = random_message(code.F, sp.k, rng);
      auto y = corrupt(code, encode(code, f), ChannelModel{ChannelKind::random_symbol, e, 0}, rng);
      auto res = list_decode_capacity(code, sc, y);
      EXPECT_TRUE(in_span(code.F, res.kernel_basis, f, sp.k));
      ASSERT_TRUE(res.enumerated.has_value());
      EXPECT_TRUE(in_list(*res.enumerated, f));
    }
  }
}

TEST(CapacityDecode, EnumerationCapRespected) {
  auto code = build_code(spec(Family::frs, 29, 4, 6, 4, 12));
  auto sc = build_scheme(code, 3);
  SplitMix64 rng(28);
  for (int t = 0; t < 20; ++t) {
    auto res = list_decode_capacity(code, sc, support::random_word(code, rng), 1);
    EXPECT_EQ(res.enumerated.has_value(), res.dim() == 0);
  }
}

TEST(CapacityDecode, OracleEquivalenceTiny) {
  SplitMix64 rng(29);
  for (const auto& sp : tiny_schemes()) {
    auto code = build_code(sp);
    auto sc = build_scheme(code, 2);
    for (int t = 0; t < 4; ++t) {
      Codeword y;
      if (t % 2) {
        y = support::random_word(code, rng);
      } else {
        Poly f = random_message(code.F, sp.k, rng);
        y = corrupt(code, encode(code, f), ChannelModel{ChannelKind::random_symbol, 1, 0}, rng);
      }
      auto res = list_decode_capacity(code, sc, y);
      ASSERT_TRUE(res.enumerated.has_value());
      EXPECT_EQ(*res.enumerated, brute_force_list(code, y, sc.t_min())) << family_name(sp.family);
    }
  }
}
