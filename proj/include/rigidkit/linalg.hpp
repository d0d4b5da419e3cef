#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rigidkit {

using Scalar = mpq_class;
using Vec = std::vector<Scalar>;
using Mat = std::vector<Vec>;

// Seeded source of small random rationals. Uses raw engine output rather than
// std distributions so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(eng_() % span);
  }

  // numerator in [-2^16, 2^16], denominator in [1, 2^16]
  Scalar rational() {
    Scalar q(mpz_class(static_cast<long>(integer(-65536, 65536))),
             mpz_class(static_cast<long>(integer(1, 65536))));
    q.canonicalize();
    return q;
  }

  Scalar nonzero_rational() {
    for (;;) {
      Scalar q = rational();
      if (q != 0) return q;
    }
  }

  Vec vector(int n) {
    Vec v(n);
    for (auto& x : v) x = rational();
    return v;
  }

  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

inline Scalar dot(const Vec& a, const Vec& b) {
  Scalar s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline Vec scaled(const Vec& v, const Scalar& s) {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * s;
  return r;
}

inline Vec added(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec subtracted(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// Rank by fraction-free (Bareiss) elimination. Rows are cleared of
// denominators first; pivots are the first nonzero entry in column order.
inline int rank(const Mat& A) {
  if (A.empty()) return 0;
  const std::size_t rows = A.size();
  const std::size_t cols = A[0].size();
  std::vector<std::vector<mpz_class>> M(rows, std::vector<mpz_class>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    mpz_class l = 1;
    for (const auto& x : A[i])
      if (x != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    for (std::size_t j = 0; j < cols; ++j)
      M[i][j] = A[i][j].get_num() * (l / A[i][j].get_den());
  }
  std::size_t r = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && M[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        M[i][j] = M[r][c] * M[i][j] - M[i][c] * M[r][j];
        mpz_divexact(M[i][j].get_mpz_t(), M[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      M[i][c] = 0;
    }
    prev = M[r][c];
    ++r;
  }
  return static_cast<int>(r);
}

inline Scalar determinant(Mat A) {
  const std::size_t n = A.size();
  Scalar det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && A[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(A[p], A[c]);
      det = -det;
    }
    det *= A[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (A[i][c] == 0) continue;
      const Scalar f = A[i][c] / A[c][c];
      for (std::size_t j = c; j < n; ++j) A[i][j] -= f * A[c][j];
    }
  }
  return det;
}

struct Rref {
  Mat R;
  std::vector<int> pivots;
};

// Pivot columns are searched among the first `cols`; row operations span the
// full row so augmented blocks follow along.
inline Rref rref(Mat A, std::size_t cols) {
  const std::size_t rows = A.size();
  std::vector<int> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && A[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[r]);
    const std::size_t width = A[r].size();
    const Scalar inv = 1 / A[r][c];
    for (std::size_t j = c; j < width; ++j) A[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      const Scalar f = A[i][c];
      for (std::size_t j = c; j < width; ++j) A[i][j] -= f * A[r][j];
    }
    piv.push_back(static_cast<int>(c));
    ++r;
  }
  A.resize(r);
  return {std::move(A), std::move(piv)};
}

// Null space basis {x : A x = 0}; one vector per free column, with that
// free coordinate set to 1.
inline Mat nullspace(const Mat& A, std::size_t cols) {
  Rref f = rref(A, cols);
  std::vector<int> is_pivot(cols, -1);
  for (std::size_t i = 0; i < f.pivots.size(); ++i) is_pivot[f.pivots[i]] = static_cast<int>(i);
  Mat basis;
  for (std::size_t c = 0; c < cols; ++c) {
    if (is_pivot[c] >= 0) continue;
    Vec x(cols);
    x[c] = 1;
    for (std::size_t i = 0; i < f.pivots.size(); ++i) x[f.pivots[i]] = -f.R[i][c];
    basis.push_back(std::move(x));
  }
  return basis;
}

inline Mat transpose(const Mat& A, std::size_t cols) {
  Mat T(cols, Vec(A.size()));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) T[j][i] = A[i][j];
  return T;
}

inline std::optional<Vec> solve(const Mat& A, const Vec& b) {
  if (A.empty()) return std::nullopt;
  const std::size_t cols = A[0].size();
  Mat aug = A;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  Rref f = rref(aug, cols + 1);
  if (!f.pivots.empty() && f.pivots.back() == static_cast<int>(cols)) return std::nullopt;
  Vec x(cols);
  for (std::size_t i = 0; i < f.pivots.size(); ++i) x[f.pivots[i]] = f.R[i][cols];
  return x;
}

inline std::optional<Mat> inverse(const Mat& A) {
  const std::size_t n = A.size();
  Mat aug = A;
  for (std::size_t i = 0; i < n; ++i) {
    aug[i].resize(2 * n);
    aug[i][n + i] = 1;
  }
  Rref f = rref(aug, n);
  if (f.pivots.size() != n) return std::nullopt;
  Mat inv(n, Vec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = f.R[i][n + j];
  return inv;
}

inline Vec mat_vec(const Mat& A, const Vec& x) {
  Vec y(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) y[i] = dot(A[i], x);
  return y;
}

inline std::string to_string(const Scalar& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace rigidkit
