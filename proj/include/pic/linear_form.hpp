#pragma once

#include <cstdint>
#include <utility>

#include "pic/field.hpp"

namespace pic {

/// l(X) = alpha X + beta with alpha != 0.
class LinearForm {
 public:
  LinearForm(const Field& F, Elem alpha, Elem beta) : F_(F), alpha_(alpha % F.modulus()), beta_(beta % F.modulus()) {
    if (alpha_ == 0) throw ValidationError("linear form needs alpha != 0");
  }

  Elem alpha() const { return alpha_; }
  Elem beta() const { return beta_; }

  Elem apply(Elem x) const { return F_.add(F_.mul(alpha_, x), beta_); }

  /// Coefficients (alpha^i, beta * sum_{t<i} alpha^t) of the i-fold iterate.
  std::pair<Elem, Elem> iterate(std::uint64_t i) const {
    Elem a = 1, b = 0;
    Elem pa = alpha_, pb = beta_;  // current power of l as (pa, pb)
    while (i) {
      if (i & 1) {
        // compose (a,b) after (pa,pb): x -> a(pa x + pb) + b
        b = F_.add(F_.mul(a, pb), b);
        a = F_.mul(a, pa);
      }
      pb = F_.add(F_.mul(pa, pb), pb);
      pa = F_.mul(pa, pa);
      i >>= 1;
    }
    return {a, b};
  }

  Elem apply_iterate(std::uint64_t i, Elem x) const {
    auto [a, b] = iterate(i);
    return F_.add(F_.mul(a, x), b);
  }

  /// Multiplicative order of alpha.
  std::uint64_t alpha_order() const { return F_.order(alpha_); }

  /// Order of l under composition.
  std::uint64_t order() const {
    if (alpha_ != 1) return alpha_order();
    return beta_ == 0 ? 1 : F_.modulus();
  }

  /// Order found by composing l with itself until the identity appears, or 0 past the limit.
  std::uint64_t order_by_iteration(std::uint64_t limit) const {
    Elem a = alpha_, b = beta_;
    for (std::uint64_t t = 1; t <= limit; ++t) {
      if (a == 1 && b == 0) return t;
      b = F_.add(F_.mul(alpha_, b), beta_);
      a = F_.mul(alpha_, a);
    }
    return 0;
  }

  const Field& field() const { return F_; }

 private:
  Field F_;
  Elem alpha_, beta_;
};

}  // namespace pic
