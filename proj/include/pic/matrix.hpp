#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pic/field.hpp"
#include "pic/poly.hpp"

namespace pic {

/// Dense row-major matrix of field elements.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Elem& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  Elem operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::span<Elem> row(std::size_t i) { return {a_.data() + i * cols_, cols_}; }
  std::span<const Elem> row(std::size_t i) const { return {a_.data() + i * cols_, cols_}; }
  std::vector<Elem> column(std::size_t j) const {
    std::vector<Elem> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Elem> a_;
};

inline Matrix mul(const Field& F, const Matrix& A, const Matrix& B) {
  if (A.cols() != B.rows()) throw std::invalid_argument("matrix shape mismatch");
  Matrix C(A.rows(), B.cols());
  std::vector<Elem> col(B.rows());
  for (std::size_t j = 0; j < B.cols(); ++j) {
    for (std::size_t t = 0; t < B.rows(); ++t) col[t] = B(t, j);
    for (std::size_t i = 0; i < A.rows(); ++i) C(i, j) = F.dot(A.row(i), col);
  }
  return C;
}

inline std::vector<Elem> mul(const Field& F, const Matrix& A, std::span<const Elem> x) {
  if (A.cols() != x.size()) throw std::invalid_argument("matrix/vector shape mismatch");
  std::vector<Elem> y(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) y[i] = F.dot(A.row(i), x);
  return y;
}

struct LinearSolution {
  std::optional<std::vector<Elem>> particular;
  std::vector<std::vector<Elem>> kernel;
  std::size_t rank = 0;
};

namespace detail {

struct U64Lanes {
  using T = std::uint64_t;
  std::uint64_t p, budget;
  explicit U64Lanes(const Field& F) : p(F.modulus()), budget(F.lazy_budget()) {}
  T reduce(T x) const { return x % p; }
};

/// Exact while every partial sum stays below 2^53.
struct F64Lanes {
  using T = double;
  double p, invp;
  std::uint64_t budget;
  explicit F64Lanes(const Field& F)
      : p(static_cast<double>(F.modulus())), invp(1.0 / static_cast<double>(F.modulus())) {
    const double sq = (p - 1) * (p - 1);
    budget = sq > 0 ? static_cast<std::uint64_t>((9007199254740992.0 - p) / sq) : ~0ULL;
  }
  static bool fits(const Field& F) { return F.modulus() < (1ULL << 20); }
  T reduce(T x) const {
    T r = x - std::floor(x * invp) * p;
    if (r < 0) r += p;
    if (r >= p) r -= p;
    return r;
  }
};

/// Same contract as echelon(). Factors a panel of W columns, then applies the delayed updates to the
/// trailing columns in one pass. Needs room for more than W unreduced products per entry.
template <class Lanes>
inline std::vector<std::size_t> echelon_blocked(const Field& F, Matrix& M, std::size_t pivot_cols) {
  using T = typename Lanes::T;
  constexpr std::size_t W = 64, TILE = 512;
  const Lanes L(F);
  if (L.budget <= W + 1) throw std::logic_error("echelon_blocked: field too large for lazy panel updates");
  const std::size_t R = M.rows(), C = M.cols();
  const T p = static_cast<T>(F.modulus());
  std::vector<T> buf(R * C);
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) buf[i * C + j] = static_cast<T>(M(i, j) % F.modulus());
  auto row = [&](std::size_t i) { return buf.data() + i * C; };
  auto elem = [&](T x) { return static_cast<Elem>(L.reduce(x)); };
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  std::uint64_t pending = 0;
  std::vector<Elem> invs;
  std::vector<T> negf;
  std::vector<std::size_t> idx;
  for (std::size_t c0 = 0; c0 < pivot_cols && rank < R; c0 += W) {
    // each panel adds at most W products to any entry of a non-pivot row
    if (pending + W + 1 > L.budget) {
      for (std::size_t i = rank; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) row(i)[j] = L.reduce(row(i)[j]);
      pending = 0;
    }
    pending += W;
    const std::size_t c1 = std::min(c0 + W, pivot_cols);
    const std::size_t r0 = rank;
    std::vector<std::size_t> pcs;
    invs.clear();
    for (std::size_t col = c0; col < c1 && rank < R; ++col) {
      std::size_t piv = R;
      for (std::size_t i = rank; i < R; ++i) {
        T& v = row(i)[col];
        v = L.reduce(v);
        if (v != 0) {
          piv = i;
          break;
        }
      }
      if (piv == R) continue;
      if (piv != rank) std::swap_ranges(row(piv), row(piv) + C, row(rank));
      T* pr = row(rank);
      const Elem inv = F.inv(elem(pr[col]));
      invs.push_back(inv);
      for (std::size_t j = col; j < c1; ++j) pr[j] = static_cast<T>(F.mul(elem(pr[j]), inv));
      // panel columns only; the multiplier stays in place until the trailing update
      for (std::size_t i = rank + 1; i < R; ++i) {
        T* __restrict dst = row(i);
        const T f = (dst[col] = L.reduce(dst[col]));
        if (f == 0) continue;
        const T m = p - f;
        const T* __restrict src = pr;
        for (std::size_t j = col + 1; j < c1; ++j) dst[j] += m * src[j];
      }
      pcs.push_back(col);
      pivots.push_back(col);
      ++rank;
    }
    const std::size_t q = rank - r0;
    if (q == 0) continue;
    // pivot rows: U_j = (T_j - sum_{j'<j} f_{j,j'} U_j') * inv_j
    for (std::size_t j = 0; j < q; ++j) {
      T* __restrict dst = row(r0 + j);
      for (std::size_t jj = 0; jj < j; ++jj) {
        const T f = dst[pcs[jj]];
        if (f == 0) continue;
        const T m = p - f;
        const T* __restrict src = row(r0 + jj);
        for (std::size_t c = c1; c < C; ++c) dst[c] += m * src[c];
      }
      for (std::size_t c = c1; c < C; ++c) dst[c] = static_cast<T>(F.mul(elem(dst[c]), invs[j]));
    }
    // rows below: T_i -= sum_j f_{i,j} U_j, left unreduced; column tiles outermost so U stays cached
    const std::size_t below = R - (r0 + q);
    negf.resize(below * W);
    idx.resize(below * W);
    std::vector<std::size_t> nzs(below, 0);
    for (std::size_t i = 0; i < below; ++i) {
      const T* r = row(r0 + q + i);
      for (std::size_t j = 0; j < q; ++j) {
        const T f = r[pcs[j]];
        if (f == 0) continue;
        negf[i * W + nzs[i]] = p - f;
        idx[i * W + nzs[i]++] = j;
      }
    }
    for (std::size_t t0 = c1; t0 < C; t0 += TILE) {
      const std::size_t t1 = std::min(t0 + TILE, C);
      for (std::size_t i = 0; i < below; ++i) {
        T* __restrict dst = row(r0 + q + i);
        const T* mf = negf.data() + i * W;
        const std::size_t* ix = idx.data() + i * W;
        const std::size_t nz = nzs[i];
        std::size_t u = 0;
        for (; u + 4 <= nz; u += 4) {
          const T m0 = mf[u], m1 = mf[u + 1], m2 = mf[u + 2], m3 = mf[u + 3];
          const T* __restrict s0 = row(r0 + ix[u]);
          const T* __restrict s1 = row(r0 + ix[u + 1]);
          const T* __restrict s2 = row(r0 + ix[u + 2]);
          const T* __restrict s3 = row(r0 + ix[u + 3]);
          for (std::size_t c = t0; c < t1; ++c) dst[c] += m0 * s0[c] + m1 * s1[c] + m2 * s2[c] + m3 * s3[c];
        }
        for (; u < nz; ++u) {
          const T m = mf[u];
          const T* __restrict src = row(r0 + ix[u]);
          for (std::size_t c = t0; c < t1; ++c) dst[c] += m * src[c];
        }
      }
    }
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t i = r0 + j + 1; i < R; ++i) row(i)[pcs[j]] = 0;
  }
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) M(i, j) = elem(row(i)[j]);
  return pivots;
}

/// In-place row echelon form over the first `pivot_cols` columns; pivot rows normalised to a leading 1.
/// Pivot choice: columns left to right, first row (lowest index) with a nonzero entry.
/// Returns the pivot column of each of the first rank rows.
inline std::vector<std::size_t> echelon_rowwise(const Field& F, Matrix& A, std::size_t pivot_cols) {
  const std::size_t R = A.rows(), C = A.cols();
  const std::uint64_t p = F.modulus();
  const std::uint64_t budget = F.lazy_budget();
  // entries of non-pivot rows stay below `bound` between full reductions
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  std::uint64_t pending = 0;  // lazy updates since the last full reduction
  std::vector<Elem> prow(C);
  for (std::size_t col = 0; col < pivot_cols && rank < R; ++col) {
    std::size_t piv = R;
    for (std::size_t i = rank; i < R; ++i) {
      Elem& v = A(i, col);
      if (budget) v %= p;
      if (v != 0) {
        piv = i;
        break;
      }
    }
    if (piv == R) continue;
    if (piv != rank) {
      auto a = A.row(piv), b = A.row(rank);
      std::swap_ranges(a.begin() + col, a.end(), b.begin() + col);
    }
    auto pr = A.row(rank);
    if (budget) {
      for (std::size_t j = col; j < C; ++j) pr[j] %= p;
    }
    const Elem inv = F.inv(pr[col]);
    for (std::size_t j = col; j < C; ++j) pr[j] = F.mul(pr[j], inv);
    for (std::size_t j = col; j < C; ++j) prow[j] = pr[j];
    if (budget) {
      // entries grow by < (p-1)^2 per step; reduce everything once the budget is about to run out
      if (pending + 1 >= budget) {
        for (std::size_t i = rank + 1; i < R; ++i) {
          auto r = A.row(i);
          for (std::size_t j = col; j < C; ++j) r[j] %= p;
        }
        pending = 0;
      }
      for (std::size_t i = rank + 1; i < R; ++i) {
        auto r = A.row(i);
        const std::uint64_t f = r[col] % p;
        if (f == 0) {
          r[col] = 0;
          continue;
        }
        const std::uint64_t m = p - f;
        std::uint64_t* __restrict dst = r.data();
        const std::uint64_t* __restrict src = prow.data();
        for (std::size_t j = col; j < C; ++j) dst[j] += m * src[j];
        r[col] = 0;
      }
      ++pending;
    } else {
      for (std::size_t i = rank + 1; i < R; ++i) {
        auto r = A.row(i);
        const Elem f = r[col];
        if (f == 0) continue;
        for (std::size_t j = col; j < C; ++j) r[j] = F.sub(r[j], F.mul(f, prow[j]));
      }
    }
    pivots.push_back(col);
    ++rank;
  }
  if (budget) {
    for (std::size_t i = rank; i < R; ++i) {
      auto r = A.row(i);
      for (auto& v : r) v %= p;
    }
  }
  return pivots;
}

inline std::vector<std::size_t> echelon(const Field& F, Matrix& A, std::size_t pivot_cols) {
  if (F64Lanes::fits(F) && F64Lanes(F).budget > 80) return echelon_blocked<F64Lanes>(F, A, pivot_cols);
  if (F.lazy_budget() > 80) return echelon_blocked<U64Lanes>(F, A, pivot_cols);
  return echelon_rowwise(F, A, pivot_cols);
}

/// Back substitution on an echelon matrix: x[free] given, returns full x over the first n columns.
inline void back_substitute(const Field& F, const Matrix& A, const std::vector<std::size_t>& pivots, std::size_t n,
                            std::vector<Elem>& x, const std::vector<Elem>* rhs) {
  for (std::size_t i = pivots.size(); i-- > 0;) {
    const std::size_t pc = pivots[i];
    auto r = A.row(i);
    Elem s = F.dot(r.subspan(pc + 1, n - pc - 1), std::span<const Elem>(x).subspan(pc + 1, n - pc - 1));
    Elem v = rhs ? (*rhs)[i] : 0;
    x[pc] = F.sub(v, s);
  }
}

}  // namespace detail

/// Solve A x = b. Returns one particular solution (free variables zero) or none, and a kernel basis
/// with one vector per non-pivot column, ordered by that column.
/// `max_kernel` caps how many kernel vectors are produced.
inline LinearSolution solve_linear(const Field& F, const Matrix& A, std::span<const Elem> b,
                                   std::size_t max_kernel = static_cast<std::size_t>(-1)) {
  if (b.size() != A.rows()) throw std::invalid_argument("solve_linear: rhs length mismatch");
  const std::size_t n = A.cols();
  Matrix W(A.rows(), n + 1);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    auto src = A.row(i);
    auto dst = W.row(i);
    for (std::size_t j = 0; j < n; ++j) dst[j] = F.from_uint(src[j]);
    dst[n] = F.from_uint(b[i]);
  }
  const auto pivots = detail::echelon(F, W, n);
  LinearSolution out;
  out.rank = pivots.size();
  bool consistent = true;
  for (std::size_t i = out.rank; i < W.rows(); ++i) {
    if (W(i, n) != 0) consistent = false;
  }
  std::vector<Elem> rhs(out.rank);
  for (std::size_t i = 0; i < out.rank; ++i) rhs[i] = W(i, n);
  if (consistent) {
    std::vector<Elem> x(n, 0);
    detail::back_substitute(F, W, pivots, n, x, &rhs);
    out.particular = std::move(x);
  }
  std::vector<char> is_pivot(n, 0);
  for (auto c : pivots) is_pivot[c] = 1;
  for (std::size_t c = 0; c < n && out.kernel.size() < max_kernel; ++c) {
    if (is_pivot[c]) continue;
    std::vector<Elem> x(n, 0);
    x[c] = 1;
    detail::back_substitute(F, W, pivots, n, x, nullptr);
    out.kernel.push_back(std::move(x));
  }
  return out;
}

inline std::vector<std::vector<Elem>> kernel_basis(const Field& F, const Matrix& A,
                                                   std::size_t max_kernel = static_cast<std::size_t>(-1)) {
  std::vector<Elem> zero(A.rows(), 0);
  return solve_linear(F, A, zero, max_kernel).kernel;
}

inline std::size_t rank(const Field& F, Matrix A) { return detail::echelon(F, A, A.cols()).size(); }

/// Matrix of polynomials.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static PolyMatrix identity(std::size_t n) {
    PolyMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Poly::constant(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Poly& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Poly& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix eval(const Field& F, Elem x) const {
    Matrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = pic::eval(F, (*this)(i, j), x);
    return m;
  }

  bool is_diagonal() const {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (i != j && !(*this)(i, j).is_zero()) return false;
    return true;
  }

  /// True when the matrix is X*I + N with N constant.
  bool is_shifted_constant() const {
    if (rows_ != cols_) return false;
    const Poly x = Poly::monomial(1, 1);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        const Poly& e = (*this)(i, j);
        if (i == j ? (e.degree() != 1 || e[1] != 1) : e.degree() > 0) return false;
      }
    }
    return true;
  }

  bool operator==(const PolyMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Poly> a_;
};

inline PolyMatrix mul(const Field& F, const PolyMatrix& A, const PolyMatrix& B) {
  if (A.cols() != B.rows()) throw std::invalid_argument("poly matrix shape mismatch");
  PolyMatrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t t = 0; t < A.cols(); ++t) {
      if (A(i, t).is_zero()) continue;
      for (std::size_t j = 0; j < B.cols(); ++j) {
        if (B(t, j).is_zero()) continue;
        C(i, j) = add(F, C(i, j), mul(F, A(i, t), B(t, j)));
      }
    }
  return C;
}

/// M^d with fast paths for diagonal M and M = X I + N (N constant).
inline PolyMatrix matrix_poly_power(const Field& F, const PolyMatrix& M, std::uint64_t d) {
  if (M.rows() != M.cols()) throw std::invalid_argument("matrix_poly_power: square matrix required");
  const std::size_t n = M.rows();
  if (M.is_diagonal()) {
    PolyMatrix R(n, n);
    for (std::size_t i = 0; i < n; ++i) R(i, i) = pow(F, M(i, i), d);
    return R;
  }
  if (M.is_shifted_constant()) {
    // sum_b binom(d, b) X^{d-b} N^b
    Matrix N(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) N(i, j) = M(i, j)[0];
    const Binomials B(F, d);
    PolyMatrix R(n, n);
    Matrix Nb = Matrix::identity(n);
    for (std::uint64_t b = 0; b <= d; ++b) {
      bool zero = true;
      const Elem c = B.binom(d, b);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (Nb(i, j) == 0) continue;
          zero = false;
          R(i, j) = add(F, R(i, j), Poly::monomial(F.mul(c, Nb(i, j)), d - b));
        }
      if (zero) break;
      Nb = mul(F, Nb, N);
    }
    return R;
  }
  PolyMatrix R = PolyMatrix::identity(n);
  PolyMatrix base = M;
  while (d) {
    if (d & 1) R = mul(F, R, base);
    d >>= 1;
    if (d) base = mul(F, base, base);
  }
  return R;
}

/// Plain repeated multiplication; the reference the fast paths are checked against.
inline PolyMatrix matrix_poly_power_naive(const Field& F, const PolyMatrix& M, std::uint64_t d) {
  PolyMatrix R = PolyMatrix::identity(M.rows());
  for (std::uint64_t i = 0; i < d; ++i) R = mul(F, R, M);
  return R;
}

}  // namespace pic
