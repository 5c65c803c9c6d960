#include <gtest/gtest.h>

#include "support.hpp"

using namespace pic;
using support::P;
using support::spec;
using json = nlohmann::json;

TEST(Json, SpecRoundtrip) {
  auto j = json::parse(R"({"family":"frs","p":29,"k":4,"n":8,"s":2,"gamma":2})");
  auto sp = parse_spec(j);
  EXPECT_EQ(sp.family, Family::frs);
  EXPECT_EQ(sp.gamma, 2u);
  auto again = parse_spec(spec_to_json(sp));
  EXPECT_EQ(build_code(again).moduli, build_code(sp).moduli);
}

TEST(Json, SpecErrorsNameTheField) {
  try {
    parse_spec(json::parse(R"({"family":"frs","p":29,"n":8,"s":2,"gamma":2})"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("'k'"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_spec(json::parse(R"({"family":"nope","p":29,"k":4,"n":8,"s":2})")), ValidationError);
  EXPECT_THROW(parse_spec(json::parse(R"({"family":"frs","p":-3,"k":4,"n":8,"s":2})")), ParseError);
}

TEST(Json, MessageAndCodeword) {
  auto code = build_code(spec(Family::frs, 29, 4, 8, 2, 2));
  Poly f = parse_message(json::parse("[3,1,4,1]"), code);
  EXPECT_EQ(f, P({3, 1, 4, 1}));
  EXPECT_EQ(message_to_json(P({3, 1}), 4), json::parse("[3,1,0,0]"));
  EXPECT_THROW(parse_message(json::parse("[3,1,4]"), code), ValidationError);
  EXPECT_THROW(parse_message(json::parse("[3,1,4,29]"), code), ValidationError);
  EXPECT_THROW(parse_message(json::parse(R"([3,1,"a",1])"), code), ParseError);
  auto c = encode(code, f);
  EXPECT_EQ(parse_codeword(codeword_to_json(c, 2), code), c);
  auto bad = codeword_to_json(c, 2);
  bad[0].push_back(0);
  EXPECT_THROW(parse_codeword(bad, code), ValidationError);
}

TEST(Channel, ExactlyErrorCountDistinctPositions) {
  auto code = build_code(spec(Family::frs, 29, 4, 8, 2, 2));
  SplitMix64 rng(1);
  for (auto kind : {ChannelKind::random_symbol, ChannelKind::burst}) {
    for (std::size_t e = 0; e <= code.n(); ++e) {
      auto c = encode(code, random_message(code.F, 4, rng));
      auto y = corrupt(code, c, ChannelModel{kind, e, 0}, rng);
      EXPECT_EQ(hamming_agreement(c, y), code.n() - e);
    }
  }
  EXPECT_THROW(corrupt(code, encode(code, Poly{}), ChannelModel{ChannelKind::random_symbol, 9, 0}, rng),
               ValidationError);
}

TEST(Channel, BurstIsContiguousCyclic) {
  auto code = build_code(spec(Family::rs, 29, 4, 16, 1));
  auto c = encode(code, P({1, 2, 3, 4}));
  auto y = corrupt(code, c, ChannelModel{ChannelKind::burst, 5, 11});
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != y[i]) bad.push_back(i);
  ASSERT_EQ(bad.size(), 5u);
  std::size_t runs = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != y[i] && c[(i + c.size() - 1) % c.size()] == y[(i + c.size() - 1) % c.size()]) ++runs;
  EXPECT_EQ(runs, 1u);
}

TEST(Channel, SeededDeterminism) {
  auto code = build_code(spec(Family::frs, 29, 4, 8, 2, 2));
  auto c = encode(code, P({3, 1, 4, 1}));
  const ChannelModel ch{ChannelKind::random_symbol, 3, 7};
  EXPECT_EQ(corrupt(code, c, ch), corrupt(code, c, ch));
  EXPECT_NE(corrupt(code, c, ch), corrupt(code, c, ChannelModel{ChannelKind::random_symbol, 3, 8}));
}

TEST(Channel, AdversarialPattern) {
  auto code = build_code(spec(Family::frs, 29, 4, 8, 2, 2));
  auto c = encode(code, P({3, 1, 4, 1}));
  auto sym = c[2].padded(2);
  sym[0] = (sym[0] + 1) % 29;
  json pat = json::array({json{{"index", 2}, {"symbol", sym}}});
  auto y = apply_pattern(code, c, pat);
  EXPECT_EQ(hamming_agreement(c, y), code.n() - 1);
  EXPECT_EQ(y[2], Poly(std::vector<Elem>(sym.begin(), sym.end())));
  json dup = json::array({pat[0], pat[0]});
  EXPECT_THROW(apply_pattern(code, c, dup), ValidationError);
  json same = json::array({json{{"index", 2}, {"symbol", c[2].padded(2)}}});
  EXPECT_THROW(apply_pattern(code, c, same), ValidationError);
  EXPECT_THROW(corrupt(code, c, ChannelModel{ChannelKind::adversarial_file, 1, 0}), ValidationError);
}

TEST(Decoder, ZeroErrorsExactMatch) {
  for (auto alg : {Algorithm::johnson, Algorithm::capacity}) {
    // s = 4 leaves room for m = 3 with t_min <= n; s = 2 forces m = 1, where t_min > n
    auto code = build_code(alg == Algorithm::capacity ? spec(Family::frs, 29, 4, 6, 4, 12) : spec(Family::frs, 29, 4, 8, 2, 2));
    DecodeOptions opt;
    opt.algorithm = alg;
    opt.timing = false;
    Decoder dec(code, opt);
    Poly f = P({3, 1, 4, 1});
    auto o = dec.decode(encode(code, f));
    EXPECT_TRUE(dec.recovered(o, f));
    auto j = outcome_to_json(dec, o, opt, f);
    EXPECT_TRUE(j["exact_match"].get<bool>());
    EXPECT_EQ(j["millis"], 0);
    for (const char* key : {"algorithm", "t_min", "candidates", "kernel_basis", "dims", "agreements", "millis"})
      EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(Decoder, TotalCorruptionDoesNotCrash) {
  for (auto alg : {Algorithm::johnson, Algorithm::capacity}) {
    auto code = build_code(spec(Family::frs, 29, 4, 8, 2, 2));
    DecodeOptions opt;
    opt.algorithm = alg;
    Decoder dec(code, opt);
    Poly f = P({3, 1, 4, 1});
    auto y = corrupt(code, encode(code, f), ChannelModel{ChannelKind::random_symbol, code.n(), 5});
    auto o = dec.decode(y);
    for (const auto& c : o.candidates) EXPECT_GE(c.agreement, o.t_min);
  }
}

TEST(Decoder, OptionsSelectParameters) {
  auto code = build_code(spec(Family::frs, 29, 4, 8, 2, 2));
  DecodeOptions opt;
  opt.algorithm = Algorithm::johnson;
  EXPECT_EQ(Decoder(code, opt).johnson()->r, 2u);
  opt.r = 3;
  EXPECT_EQ(Decoder(code, opt).johnson()->r, 3u);
  opt.r.reset();
  opt.epsilon = 100.0;
  EXPECT_EQ(Decoder(code, opt).johnson()->r, 1u);
  opt.algorithm = Algorithm::capacity;
  EXPECT_EQ(Decoder(code, opt).scheme()->m, 1u);  // default min(8, s-1)
  EXPECT_EQ(Decoder(build_code(spec(Family::frs, 29, 4, 6, 4, 12)), opt).scheme()->m, 3u);
}

TEST(Verify, ValidFrsPasses) {
  for (const auto& c : verify_spec(spec(Family::frs, 29, 4, 8, 2, 2), std::nullopt))
    EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

TEST(Verify, ShortGammaOrbitFails) {
  auto res = verify_spec(spec(Family::frs, 29, 4, 4, 4, 28), std::nullopt);
  ASSERT_FALSE(res.empty());
  EXPECT_FALSE(res[0].passed);
}

TEST(Verify, SmallCharacteristicMultFails) {
  auto res = verify_spec(spec(Family::mult, 3, 2, 1, 4), std::nullopt);
  ASSERT_FALSE(res.empty());
  EXPECT_FALSE(res[0].passed);
}

TEST(Verify, UnsupportedSchemeIsItemised) {
  // alpha = 1, beta = 0: the code is fine, the capacity scheme is not
  auto res = verify_spec(spec(Family::affine_frs, 29, 4, 6, 4, 0, 1, 0), 2);
  std::size_t failed = 0;
  for (const auto& c : res) failed += !c.passed;
  EXPECT_EQ(failed, 1u);
  EXPECT_TRUE(res[0].passed);
}

TEST(Sweep, CsvShapeAndZeroErrors) {
  auto code = build_code(spec(Family::frs, 29, 4, 8, 2, 2));
  DecodeOptions opt;
  opt.algorithm = Algorithm::johnson;
  opt.timing = false;
  auto rows = sweep(code, opt, 0, 3, 5, 42);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].successes, 5u);
  for (const auto& r : rows) EXPECT_LE(r.successes, r.trials);
  EXPECT_EQ(sweep_csv_header(), "family,p,n,s,k,m_or_r,algorithm,errors,trials,successes,mean_kernel_dim,mean_millis\n");
  EXPECT_EQ(sweep_csv_row(rows[0]), "frs,29,8,2,4,2,johnson,0,5,5,1.000,0.0\n");
}

TEST(Sweep, Deterministic) {
  auto code = build_code(spec(Family::mult, 29, 4, 6, 4));
  DecodeOptions opt;
  opt.m = 2;
  opt.timing = false;
  std::string a, b;
  sweep(code, opt, 0, 4, 4, 9, [&](const SweepRow& r) { a += sweep_csv_row(r); });
  sweep(code, opt, 0, 4, 4, 9, [&](const SweepRow& r) { b += sweep_csv_row(r); });
  EXPECT_EQ(a, b);
}

TEST(Sweep, RangeParsing) {
  EXPECT_EQ(parse_range("3..7"), (std::pair<std::size_t, std::size_t>{3, 7}));
  EXPECT_EQ(parse_range("4"), (std::pair<std::size_t, std::size_t>{4, 4}));
  EXPECT_THROW(parse_range("7..3"), ValidationError);
  EXPECT_THROW(parse_range("a..3"), ValidationError);
  auto code = build_code(spec(Family::frs, 29, 4, 8, 2, 2));
  EXPECT_THROW(sweep(code, DecodeOptions{}, 0, 9, 1, 0), ValidationError);
}
