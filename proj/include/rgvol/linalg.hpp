#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "rgvol/rational.hpp"

namespace rgvol {

// Dense exact matrices, row-major. Sizes here are tiny (dimensions bounded by
// dart counts), so plain Gaussian elimination over the rationals is enough.
using QVec = std::vector<rational>;
using QMat = std::vector<QVec>;

inline QMat rref(QMat m, std::vector<int>* pivot_cols = nullptr) {
  const size_t rows = m.size();
  const size_t cols = rows ? m[0].size() : 0;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    rational inv = 1 / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      rational f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    if (pivot_cols) pivot_cols->push_back(static_cast<int>(c));
    ++r;
  }
  return m;
}

inline int rank(const QMat& m) {
  std::vector<int> piv;
  rref(m, &piv);
  return static_cast<int>(piv.size());
}

// Basis of {x : m x = 0}, scaled to integer vectors with content 1.
inline std::vector<QVec> nullspace(const QMat& m) {
  if (m.empty()) return {};
  const size_t cols = m[0].size();
  std::vector<int> piv;
  QMat r = rref(m, &piv);
  std::vector<bool> is_pivot(cols, false);
  for (int c : piv) is_pivot[c] = true;
  std::vector<QVec> basis;
  for (size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    QVec v(cols, rational(0));
    v[fc] = 1;
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r[i][fc];
    bigint den = 1;
    for (const auto& x : v) den = boost::multiprecision::lcm(den, denominator(x));
    bigint g = 0;
    for (auto& x : v) {
      x *= den;
      g = boost::multiprecision::gcd(g, numerator(x));
    }
    if (g > 1)
      for (auto& x : v) x /= g;
    basis.push_back(std::move(v));
  }
  return basis;
}

// One solution of m x = b, if any.
inline std::optional<QVec> solve(const QMat& m, const QVec& b) {
  const size_t rows = m.size();
  const size_t cols = rows ? m[0].size() : 0;
  QMat aug(rows, QVec(cols + 1));
  for (size_t i = 0; i < rows; ++i) {
    std::copy(m[i].begin(), m[i].end(), aug[i].begin());
    aug[i][cols] = b[i];
  }
  std::vector<int> piv;
  QMat r = rref(aug, &piv);
  for (size_t i = 0; i < rows; ++i) {
    bool allzero = true;
    for (size_t j = 0; j < cols; ++j)
      if (r[i][j] != 0) { allzero = false; break; }
    if (allzero && r[i][cols] != 0) return std::nullopt;
  }
  QVec x(cols, rational(0));
  for (size_t i = 0; i < piv.size(); ++i)
    if (piv[i] < static_cast<int>(cols)) x[piv[i]] = r[i][cols];
  return x;
}

inline rational dot(const QVec& a, const QVec& b) {
  rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Is v in the span of the rows of m?
inline bool in_row_span(const QMat& m, const QVec& v) {
  QMat with = m;
  with.push_back(v);
  return rank(m) == rank(with);
}

// Lagrange interpolation through (xs[i], ys[i]); returns coefficients
// c[0] + c[1] t + ... of the unique polynomial of degree < xs.size().
inline QVec interpolate(const QVec& xs, const QVec& ys) {
  const size_t n = xs.size();
  QVec coeff(n, rational(0));
  for (size_t i = 0; i < n; ++i) {
    // numerator polynomial prod_{j!=i} (t - xs[j]), built incrementally
    QVec num(1, rational(1));
    rational den = 1;
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      den *= xs[i] - xs[j];
      QVec next(num.size() + 1, rational(0));
      for (size_t k = 0; k < num.size(); ++k) {
        next[k + 1] += num[k];
        next[k] -= num[k] * xs[j];
      }
      num = std::move(next);
    }
    rational w = ys[i] / den;
    for (size_t k = 0; k < num.size(); ++k) coeff[k] += w * num[k];
  }
  return coeff;
}

inline rational eval_poly(const QVec& coeff, const rational& t) {
  rational s = 0;
  for (size_t k = coeff.size(); k-- > 0;) s = s * t + coeff[k];
  return s;
}

}  // namespace rgvol
