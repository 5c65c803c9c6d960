#pragma once

#include <vector>

#include "oracles.hpp"
#include "pic/pic.hpp"

namespace support {

inline oracle::V to_v(const pic::Poly& f) { return oracle::V(f.coeffs().begin(), f.coeffs().end()); }

inline pic::Poly from_v(const oracle::V& v) { return pic::Poly(std::vector<pic::Elem>(v.begin(), v.end())); }

inline pic::Poly P(std::initializer_list<pic::Elem> c) { return pic::Poly(std::vector<pic::Elem>(c)); }

inline std::vector<oracle::V> to_v(const pic::Codeword& c, std::size_t s) {
  std::vector<oracle::V> out;
  for (const auto& sym : c) {
    auto v = sym.padded(s);
    out.emplace_back(v.begin(), v.end());
  }
  return out;
}

inline std::vector<oracle::V> to_v(const std::vector<pic::Poly>& moduli) {
  std::vector<oracle::V> out;
  for (const auto& m : moduli) out.push_back(to_v(m));
  return out;
}

inline pic::Codeword random_word(const pic::PolyIdealCode& code, pic::SplitMix64& rng) {
  pic::Codeword y;
  for (std::size_t i = 0; i < code.n(); ++i) y.push_back(pic::random_message(code.F, code.s(), rng));
  return y;
}

inline pic::FamilySpec spec(pic::Family f, std::uint64_t p, std::size_t k, std::size_t n, std::size_t s,
                            pic::Elem gamma = 0, pic::Elem alpha = 1, pic::Elem beta = 0) {
  pic::FamilySpec sp;
  sp.family = f;
  sp.p = p;
  sp.k = k;
  sp.n = n;
  sp.s = s;
  sp.gamma = gamma;
  sp.alpha = alpha;
  sp.beta = beta;
  return sp;
}

}  // namespace support
