#pragma once

// Small direct solvers: fixed-size dense LU for the boundary-condition system
// and a banded LU for the finite-difference oracle. Both use partial pivoting.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace rmshell {

template <std::floating_point T, std::size_t N>
using Matrix = std::array<std::array<T, N>, N>;

template <std::floating_point T, std::size_t N>
using Vector = std::array<T, N>;

/// PA = LU with row pivoting. Empty when a pivot is exactly zero or not finite.
template <std::floating_point T, std::size_t N>
class DenseLu {
 public:
  static std::optional<DenseLu> factor(Matrix<T, N> a) {
    DenseLu lu;
    for (std::size_t i = 0; i < N; ++i) lu.perm_[i] = i;
    for (std::size_t k = 0; k < N; ++k) {
      std::size_t pivot = k;
      for (std::size_t i = k + 1; i < N; ++i)
        if (std::abs(a[i][k]) > std::abs(a[pivot][k])) pivot = i;
      if (!(std::abs(a[pivot][k]) > T(0)) || !std::isfinite(a[pivot][k])) return std::nullopt;
      std::swap(a[k], a[pivot]);
      std::swap(lu.perm_[k], lu.perm_[pivot]);
      for (std::size_t i = k + 1; i < N; ++i) {
        const T factor = a[i][k] / a[k][k];
        a[i][k] = factor;
        for (std::size_t j = k + 1; j < N; ++j) a[i][j] -= factor * a[k][j];
      }
    }
    lu.lu_ = a;
    return lu;
  }

  Vector<T, N> solve(const Vector<T, N>& b) const {
    Vector<T, N> x{};
    for (std::size_t i = 0; i < N; ++i) {
      T sum = b[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) sum -= lu_[i][j] * x[j];
      x[i] = sum;
    }
    for (std::size_t i = N; i-- > 0;) {
      T sum = x[i];
      for (std::size_t j = i + 1; j < N; ++j) sum -= lu_[i][j] * x[j];
      x[i] = sum / lu_[i][i];
    }
    return x;
  }

  /// Solves A^T x = b with the same factors.
  Vector<T, N> solve_transposed(const Vector<T, N>& b) const {
    Vector<T, N> y{};
    for (std::size_t i = 0; i < N; ++i) {
      T sum = b[i];
      for (std::size_t j = 0; j < i; ++j) sum -= lu_[j][i] * y[j];
      y[i] = sum / lu_[i][i];
    }
    for (std::size_t i = N; i-- > 0;) {
      T sum = y[i];
      for (std::size_t j = i + 1; j < N; ++j) sum -= lu_[j][i] * y[j];
      y[i] = sum;
    }
    Vector<T, N> x{};
    for (std::size_t i = 0; i < N; ++i) x[perm_[i]] = y[i];
    return x;
  }

 private:
  Matrix<T, N> lu_{};
  std::array<std::size_t, N> perm_{};
};

template <std::floating_point T, std::size_t N>
Vector<T, N> multiply(const Matrix<T, N>& a, const Vector<T, N>& x) {
  Vector<T, N> y{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) y[i] += a[i][j] * x[j];
  return y;
}

template <std::floating_point T, std::size_t N>
Vector<T, N> multiply_transposed(const Matrix<T, N>& a, const Vector<T, N>& x) {
  Vector<T, N> y{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) y[j] += a[i][j] * x[i];
  return y;
}

template <std::floating_point T, std::size_t N>
T norm2(const Vector<T, N>& v) {
  T s = 0;
  for (T x : v) s += x * x;
  return std::sqrt(s);
}

/// sigma_max / sigma_min by power iteration on A^T A and on (A^T A)^-1.
template <std::floating_point T, std::size_t N>
T condition_estimate(const Matrix<T, N>& a, const DenseLu<T, N>& lu, int iterations = 60) {
  Vector<T, N> start{};
  for (std::size_t i = 0; i < N; ++i) start[i] = T(1) + T(i) / T(N);

  auto normalize = [](Vector<T, N>& v) {
    const T n = norm2(v);
    for (T& x : v) x /= n;
    return n;
  };

  Vector<T, N> v = start;
  normalize(v);
  T sigma_max_sq = 0;
  for (int it = 0; it < iterations; ++it) {
    v = multiply_transposed(a, multiply(a, v));
    sigma_max_sq = normalize(v);
  }

  Vector<T, N> w = start;
  normalize(w);
  T inv_sigma_min_sq = 0;
  for (int it = 0; it < iterations; ++it) {
    w = lu.solve(lu.solve_transposed(w));
    inv_sigma_min_sq = normalize(w);
  }
  return std::sqrt(sigma_max_sq * inv_sigma_min_sq);
}

/// Band matrix with kl sub- and ku super-diagonals, factored in place.
///
/// Row i stores columns [i - kl, i + ku + kl]; the extra kl upper diagonals
/// absorb fill-in from row interchanges.
template <std::floating_point T>
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
      : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), data_(n * width_, T(0)) {}

  std::size_t size() const { return n_; }

  T& at(std::size_t i, std::size_t j) { return data_[i * width_ + (j + kl_ - i)]; }
  T at(std::size_t i, std::size_t j) const { return data_[i * width_ + (j + kl_ - i)]; }

  bool in_band(std::size_t i, std::size_t j) const { return j + kl_ >= i && j <= i + ku_; }

  void add(std::size_t i, std::size_t j, T value) { at(i, j) += value; }

  struct Factorization {
    bool singular = false;
    /// max |u_ii| / min |u_ii|, a cheap lower bound on the condition number.
    T pivot_ratio = T(0);
  };

  /// Gaussian elimination with partial pivoting; overwrites the matrix and b.
  Factorization solve_in_place(std::span<T> b) {
    Factorization out;
    const std::size_t upper = ku_ + kl_;
    T max_pivot = 0;
    T min_pivot = std::numeric_limits<T>::infinity();
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t last_row = std::min(n_ - 1, k + kl_);
      std::size_t pivot = k;
      for (std::size_t i = k + 1; i <= last_row; ++i)
        if (std::abs(at(i, k)) > std::abs(at(pivot, k))) pivot = i;
      const T p = at(pivot, k);
      if (!(std::abs(p) > T(0)) || !std::isfinite(p)) {
        out.singular = true;
        out.pivot_ratio = std::numeric_limits<T>::infinity();
        return out;
      }
      const std::size_t last_col = std::min(n_ - 1, k + upper);
      if (pivot != k) {
        for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(pivot, j));
        std::swap(b[k], b[pivot]);
      }
      max_pivot = std::max(max_pivot, std::abs(p));
      min_pivot = std::min(min_pivot, std::abs(p));
      for (std::size_t i = k + 1; i <= last_row; ++i) {
        const T factor = at(i, k) / at(k, k);
        if (factor == T(0)) continue;
        for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= factor * at(k, j);
        at(i, k) = T(0);
        b[i] -= factor * b[k];
      }
    }
    for (std::size_t i = n_; i-- > 0;) {
      T sum = b[i];
      const std::size_t last_col = std::min(n_ - 1, i + upper);
      for (std::size_t j = i + 1; j <= last_col; ++j) sum -= at(i, j) * b[j];
      b[i] = sum / at(i, i);
    }
    out.pivot_ratio = max_pivot / min_pivot;
    return out;
  }

 private:
  std::size_t n_;
  std::size_t kl_;
  std::size_t ku_;
  std::size_t width_;
  std::vector<T> data_;
};

}  // namespace rmshell
