#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pic/capacity.hpp"
#include "pic/ideal_codes.hpp"
#include "pic/johnson.hpp"
#include "pic/linop.hpp"
#include "pic/rng.hpp"

namespace pic {

using json = nlohmann::json;

/// Malformed input file (exit status 1 in the CLI).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

namespace detail {

inline std::uint64_t get_uint(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw ParseError(ctx + ": missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0 && !v.is_number_unsigned())) {
    throw ParseError(ctx + ": field '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline std::vector<Elem> int_array(const json& j, const std::string& ctx, std::uint64_t p) {
  if (!j.is_array()) throw ParseError(ctx + ": expected an array of integers");
  std::vector<Elem> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& v = j[i];
    if (!v.is_number_integer()) throw ParseError(ctx + "[" + std::to_string(i) + "]: expected an integer");
    const std::int64_t x = v.get<std::int64_t>();
    if (x < 0 || static_cast<std::uint64_t>(x) >= p) {
      throw ValidationError(ctx + "[" + std::to_string(i) + "]: value " + std::to_string(x) + " is not in [0, p)");
    }
    out.push_back(static_cast<Elem>(x));
  }
  return out;
}

}  // namespace detail

inline FamilySpec parse_spec(const json& j) {
  if (!j.is_object()) throw ParseError("spec: expected a JSON object");
  FamilySpec sp;
  if (!j.contains("family") || !j["family"].is_string()) throw ParseError("spec: missing string field 'family'");
  sp.family = parse_family(j["family"].get<std::string>());
  sp.p = detail::get_uint(j, "p", "spec");
  sp.k = detail::get_uint(j, "k", "spec");
  sp.n = detail::get_uint(j, "n", "spec");
  sp.s = j.contains("s") ? detail::get_uint(j, "s", "spec") : 1;
  if (j.contains("gamma")) sp.gamma = detail::get_uint(j, "gamma", "spec");
  if (j.contains("alpha")) sp.alpha = detail::get_uint(j, "alpha", "spec");
  if (j.contains("beta")) sp.beta = detail::get_uint(j, "beta", "spec");
  if (j.contains("points")) sp.points = detail::int_array(j["points"], "spec.points", sp.p);
  return sp;
}

inline json spec_to_json(const FamilySpec& sp) {
  json j{{"family", family_name(sp.family)}, {"p", sp.p}, {"k", sp.k}, {"n", sp.n}, {"s", sp.s}};
  if (sp.family == Family::frs) j["gamma"] = sp.gamma;
  if (sp.family == Family::affine_frs) j["alpha"] = sp.alpha;
  if (sp.family == Family::additive_frs || sp.family == Family::affine_frs) j["beta"] = sp.beta;
  if (sp.points) j["points"] = *sp.points;
  return j;
}

inline Poly parse_message(const json& j, const PolyIdealCode& code) {
  auto v = detail::int_array(j, "message", code.F.modulus());
  if (v.size() != code.k()) throw ValidationError("message must have exactly k = " + std::to_string(code.k()) + " entries");
  return Poly(std::move(v));
}

inline json message_to_json(const Poly& f, std::size_t k) { return f.padded(k); }

inline Codeword parse_codeword(const json& j, const PolyIdealCode& code) {
  if (!j.is_array()) throw ParseError("codeword: expected an array of symbols");
  if (j.size() != code.n()) throw ValidationError("codeword must have n = " + std::to_string(code.n()) + " symbols");
  Codeword c;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto v = detail::int_array(j[i], "codeword[" + std::to_string(i) + "]", code.F.modulus());
    if (v.size() != code.s()) throw ValidationError("codeword symbol " + std::to_string(i) + " must have s entries");
    c.emplace_back(std::move(v));
  }
  return c;
}

inline json codeword_to_json(const Codeword& c, std::size_t s) {
  json j = json::array();
  for (const auto& sym : c) j.push_back(sym.padded(s));
  return j;
}

enum class ChannelKind { random_symbol, burst, adversarial_file };

struct ChannelModel {
  ChannelKind kind = ChannelKind::random_symbol;
  std::size_t error_count = 0;
  std::uint64_t seed = 0;
};

inline ChannelKind parse_channel(const std::string& s) {
  if (s == "random_symbol") return ChannelKind::random_symbol;
  if (s == "burst") return ChannelKind::burst;
  if (s == "adversarial_file") return ChannelKind::adversarial_file;
  throw ValidationError("unknown channel '" + s + "'");
}

/// A symbol drawn uniformly among those different from `old`.
inline Poly different_symbol(const Field& F, std::size_t s, const Poly& old, SplitMix64& rng) {
  for (;;) {
    std::vector<Elem> v(s);
    for (auto& x : v) x = rng.below(F.modulus());
    Poly c(std::move(v));
    if (c != old) return c;
  }
}

/// Replace exactly error_count symbols (random positions, or a cyclic burst) with different symbols.
inline Codeword corrupt(const PolyIdealCode& code, const Codeword& c, const ChannelModel& ch, SplitMix64& rng) {
  const std::size_t n = c.size();
  if (ch.error_count > n) throw ValidationError("error count exceeds block length");
  std::vector<std::size_t> pos;
  if (ch.kind == ChannelKind::random_symbol) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = 0; i < ch.error_count; ++i) {
      std::size_t j = i + rng.below(n - i);
      std::swap(perm[i], perm[j]);
      pos.push_back(perm[i]);
    }
  } else if (ch.kind == ChannelKind::burst) {
    const std::size_t start = n ? rng.below(n) : 0;
    for (std::size_t i = 0; i < ch.error_count; ++i) pos.push_back((start + i) % n);
  } else {
    throw ValidationError("adversarial_file channel needs an explicit pattern");
  }
  Codeword out = c;
  for (std::size_t i : pos) out[i] = different_symbol(code.F, code.s(), c[i], rng);
  return out;
}

inline Codeword corrupt(const PolyIdealCode& code, const Codeword& c, const ChannelModel& ch) {
  SplitMix64 rng(ch.seed);
  return corrupt(code, c, ch, rng);
}

/// Pattern file: [{"index": i, "symbol": [s ints]}, ...]; each listed symbol must differ from the original.
inline Codeword apply_pattern(const PolyIdealCode& code, const Codeword& c, const json& pattern) {
  if (!pattern.is_array()) throw ParseError("pattern: expected an array");
  Codeword out = c;
  std::vector<char> seen(c.size(), 0);
  for (std::size_t t = 0; t < pattern.size(); ++t) {
    const auto& e = pattern[t];
    const std::string ctx = "pattern[" + std::to_string(t) + "]";
    const std::size_t i = detail::get_uint(e, "index", ctx);
    if (i >= c.size()) throw ValidationError(ctx + ": index out of range");
    if (seen[i]) throw ValidationError(ctx + ": repeated index");
    seen[i] = 1;
    if (!e.contains("symbol")) throw ParseError(ctx + ": missing field 'symbol'");
    auto v = detail::int_array(e["symbol"], ctx + ".symbol", code.F.modulus());
    if (v.size() != code.s()) throw ValidationError(ctx + ": symbol must have s entries");
    Poly sym(std::move(v));
    if (sym == c[i]) throw ValidationError(ctx + ": symbol equals the original");
    out[i] = std::move(sym);
  }
  return out;
}

enum class Algorithm { johnson, capacity };

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "johnson") return Algorithm::johnson;
  if (s == "capacity") return Algorithm::capacity;
  throw ValidationError("unknown algorithm '" + s + "'");
}

struct DecodeOptions {
  Algorithm algorithm = Algorithm::capacity;
  std::optional<std::size_t> m;
  std::optional<std::size_t> r;
  std::optional<double> epsilon;
  std::uint64_t enum_cap = 1000000;
  bool timing = true;
};

inline std::size_t default_m(const PolyIdealCode& code) { return std::max<std::size_t>(1, std::min<std::size_t>(8, code.s() - 1)); }

inline JohnsonParams johnson_params_for(const PolyIdealCode& code, const DecodeOptions& opt) {
  if (opt.r) return johnson_params(code, *opt.r);
  if (opt.epsilon) return johnson_params_epsilon(code, *opt.epsilon);
  return johnson_params(code, 2);
}

/// A prepared decoder: scheme construction (capacity) happens once.
class Decoder {
 public:
  Decoder(const PolyIdealCode& code, const DecodeOptions& opt) : code_(code), opt_(opt) {
    if (opt.algorithm == Algorithm::capacity) {
      scheme_ = build_scheme(code, opt.m.value_or(default_m(code)));
    } else {
      jp_ = johnson_params_for(code, opt);
    }
  }

  const PolyIdealCode& code() const { return code_; }
  const std::optional<CompositionScheme>& scheme() const { return scheme_; }
  const std::optional<JohnsonParams>& johnson() const { return jp_; }

  struct Outcome {
    std::size_t t_min = 0;
    std::vector<ListEntry> candidates;
    std::vector<Poly> kernel_basis;
    std::size_t dims = 0;
    bool enumerated = false;
    double millis = 0;
  };

  Outcome decode(const Codeword& y) const {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    if (scheme_) {
      DecodeResult r = list_decode_capacity(code_, *scheme_, y, opt_.enum_cap);
      o.t_min = r.t_min;
      o.kernel_basis = r.kernel_basis;
      o.dims = r.dim();
      if (r.enumerated) {
        o.enumerated = true;
        o.candidates = *r.enumerated;
      }
    } else {
      JohnsonResult r = list_decode_johnson(code_, y, *jp_);
      o.t_min = jp_->t_min;
      o.candidates = r.list;
      o.dims = r.list.size();
      o.enumerated = true;
    }
    o.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return o;
  }

  /// Did the decode recover f (in the list, or in the kernel span)?
  bool recovered(const Outcome& o, const Poly& f) const {
    if (scheme_) return in_span(code_.F, o.kernel_basis, f, code_.k());
    for (const auto& c : o.candidates)
      if (c.message == f) return true;
    return false;
  }

 private:
  PolyIdealCode code_;
  DecodeOptions opt_;
  std::optional<CompositionScheme> scheme_;
  std::optional<JohnsonParams> jp_;
};

inline json outcome_to_json(const Decoder& dec, const Decoder::Outcome& o, const DecodeOptions& opt,
                            const std::optional<Poly>& reference) {
  const std::size_t k = dec.code().k();
  json j;
  j["algorithm"] = dec.scheme() ? "capacity" : "johnson";
  j["t_min"] = o.t_min;
  json cands = json::array(), agrees = json::array(), basis = json::array();
  for (const auto& c : o.candidates) {
    cands.push_back(c.message.padded(k));
    agrees.push_back(c.agreement);
  }
  for (const auto& b : o.kernel_basis) basis.push_back(b.padded(k));
  j["candidates"] = cands;
  j["kernel_basis"] = basis;
  j["dims"] = o.dims;
  j["agreements"] = agrees;
  j["millis"] = opt.timing ? std::llround(o.millis) : 0;
  if (dec.scheme()) {
    j["m"] = dec.scheme()->m;
    j["r"] = dec.scheme()->r;
    j["D"] = dec.scheme()->D();
    j["regime"] = dec.scheme()->regime;
    j["enumerated"] = o.enumerated;
  } else {
    j["r"] = dec.johnson()->r;
    j["D"] = dec.johnson()->D;
  }
  if (reference) j["exact_match"] = dec.recovered(o, *reference);
  return j;
}

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Every structural check the decoders depend on, itemised.
inline std::vector<CheckResult> verify_spec(const FamilySpec& spec, std::optional<std::size_t> m,
                                            std::uint64_t seed = 1) {
  std::vector<CheckResult> out;
  auto run = [&](const std::string& name, auto&& fn) -> bool {
    try {
      std::string detail = fn();
      out.push_back({name, true, detail});
      return true;
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
      return false;
    }
  };
  std::optional<PolyIdealCode> code;
  if (!run("code: monic degree-s pairwise-coprime moduli", [&] {
        code = build_code(spec);
        return std::to_string(code->n()) + " moduli of degree " + std::to_string(code->s());
      })) {
    return out;
  }
  const Field& F = code->F;
  run("operator family: linear extendibility", [&] {
    const std::size_t K = code->k() + code->s() + 1;
    auto fam = build_operator_family(spec, K);
    if (auto bad = verify_linear_extendibility(fam.ops, fam.M, K)) {
      throw ValidationError("L(X^" + std::to_string(bad->e + 1) + ") != M L(X^" + std::to_string(bad->e) + ") in row " +
                            std::to_string(bad->row));
    }
    return "verified to K = " + std::to_string(K);
  });
  run("operator family: ideal generators equal the moduli", [&] {
    auto fam = build_operator_family(spec, code->s() + 2);
    for (std::size_t i = 0; i < code->n(); ++i) {
      if (ideal_generator(fam.ops, code->points[i], code->s() + 1) != code->moduli[i]) {
        throw ValidationError("generator at point index " + std::to_string(i) + " differs from E_i");
      }
    }
    return std::string("all ") + std::to_string(code->n()) + " points";
  });
  run("bivariate modulus: PIC -> LELO -> PIC roundtrip", [&] {
    const BivarPoly E = family_bivariate(F, spec);
    auto fam = pic_to_lelo(F, E, code->s() + 2);
    if (auto bad = verify_linear_extendibility(fam.ops, fam.M, code->s() + 2)) {
      throw ValidationError("pic_to_lelo family not extendible at e = " + std::to_string(bad->e));
    }
    for (std::size_t i = 0; i < code->n(); ++i) {
      if (ideal_generator(fam.ops, code->points[i], code->s() + 1) != code->moduli[i]) {
        throw ValidationError("roundtrip generator differs at point index " + std::to_string(i));
      }
    }
    return std::string("exact at every point");
  });
  run("CRT roundtrip", [&] {
    SplitMix64 rng(seed);
    const Poly f = random_message(F, code->k(), rng);
    if (crt(F, encode(*code, f), code->moduli) != f) throw ValidationError("CRT did not return the message");
    return std::string("random message recovered");
  });
  if (code->s() > 1) {
    const std::size_t mm = m.value_or(default_m(*code));
    run("capacity scheme (m = " + std::to_string(mm) + "): Diag MDS, T ideals, extendibility, list-composition",
        [&] {
          auto sc = build_scheme(*code, mm);
          return sc.regime + ", r = " + std::to_string(sc.r) + ", D = " + std::to_string(sc.D()) +
                 ", t_min = " + std::to_string(sc.t_min());
        });
  }
  if (code->s() + 1 < code->k()) {
    run("johnson parameters (r = 2)", [&] {
      auto P = johnson_params(*code, 2);
      auto a = johnson_accounting(code->n(), code->s(), code->k(), P);
      if (a.unknowns <= a.constraints) throw ValidationError("unknowns do not exceed constraints");
      return "D = " + std::to_string(P.D) + ", t_min = " + std::to_string(P.t_min);
    });
  }
  return out;
}

struct SweepRow {
  FamilySpec spec;
  std::size_t m_or_r = 0;
  Algorithm algorithm = Algorithm::capacity;
  std::size_t errors = 0, trials = 0, successes = 0;
  double mean_kernel_dim = 0, mean_millis = 0;
  std::vector<std::string> notes;
};

inline std::string sweep_csv_header() {
  return "family,p,n,s,k,m_or_r,algorithm,errors,trials,successes,mean_kernel_dim,mean_millis\n";
}

inline std::string sweep_csv_row(const SweepRow& r) {
  std::ostringstream o;
  o << family_name(r.spec.family) << ',' << r.spec.p << ',' << r.spec.n << ',' << r.spec.s << ',' << r.spec.k << ','
    << r.m_or_r << ',' << (r.algorithm == Algorithm::capacity ? "capacity" : "johnson") << ',' << r.errors << ','
    << r.trials << ',' << r.successes << ',' << std::fixed << std::setprecision(3) << r.mean_kernel_dim << ','
    << std::setprecision(1) << r.mean_millis << '\n';
  return o.str();
}

/// One plant-corrupt-decode experiment per (error count, trial); trial seed = seed + trial index.
template <class RowCallback>
inline std::vector<SweepRow> sweep(const PolyIdealCode& code, const DecodeOptions& opt, std::size_t e_lo,
                                   std::size_t e_hi, std::size_t trials, std::uint64_t seed, RowCallback&& on_row) {
  if (e_lo > e_hi) throw ValidationError("error range is empty");
  if (e_hi > code.n()) throw ValidationError("error range exceeds n");
  const Decoder dec(code, opt);
  std::vector<SweepRow> rows;
  std::uint64_t trial_index = 0;
  for (std::size_t e = e_lo; e <= e_hi; ++e) {
    SweepRow row;
    row.spec = code.spec;
    row.spec.points.reset();
    row.algorithm = opt.algorithm;
    row.m_or_r = dec.scheme() ? dec.scheme()->m : dec.johnson()->r;
    row.errors = e;
    row.trials = trials;
    double dims = 0, ms = 0;
    for (std::size_t t = 0; t < trials; ++t, ++trial_index) {
      SplitMix64 rng(seed + trial_index);
      const Poly f = random_message(code.F, code.k(), rng);
      const Codeword y = corrupt(code, encode(code, f), ChannelModel{ChannelKind::random_symbol, e, 0}, rng);
      try {
        auto o = dec.decode(y);
        dims += static_cast<double>(o.dims);
        ms += o.millis;
        if (dec.recovered(o, f)) ++row.successes;
      } catch (const std::exception& ex) {
        row.notes.push_back("trial " + std::to_string(trial_index) + ": " + ex.what());
      }
    }
    row.mean_kernel_dim = trials ? dims / static_cast<double>(trials) : 0;
    row.mean_millis = opt.timing && trials ? ms / static_cast<double>(trials) : 0;
    on_row(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<SweepRow> sweep(const PolyIdealCode& code, const DecodeOptions& opt, std::size_t e_lo,
                                   std::size_t e_hi, std::size_t trials, std::uint64_t seed) {
  return sweep(code, opt, e_lo, e_hi, trials, seed, [](const SweepRow&) {});
}

/// "A..B" or "A"
inline std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
  auto bad = [&] { return ValidationError("error range must look like A..B, got '" + s + "'"); };
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      std::size_t pos = 0;
      const auto v = std::stoull(s, &pos);
      if (pos != s.size()) throw bad();
      return {v, v};
    }
    std::size_t p1 = 0, p2 = 0;
    const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    const auto lo = std::stoull(a, &p1), hi = std::stoull(b, &p2);
    if (p1 != a.size() || p2 != b.size()) throw bad();
    if (lo > hi) throw ValidationError("error range '" + s + "' is empty");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw bad();
  }
}

}  // namespace pic
