#pragma once

// Modified Bessel functions of the first and second kind, orders 0 and 1.
//
// I0, I1: power series up to kISeam, Hankel asymptotic expansion of
//         exp(-x) I(x) above it. All series terms are positive, so the small
//         branch has no cancellation; at x = 25 the asymptotic remainder is
//         below 1e-21.
// K0, K1: logarithmic power series up to kKSeam, Steed's continued fraction
//         (Temme's CF2) for exp(x) K(x) above it.
//
// Relative error is a few ulp of T on (0, 700]. Unscaled I overflows past
// x ~ 709 for double; the scaled forms stay finite up to 1e6 and beyond.

#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>

#include "rmshell/errors.hpp"

namespace rmshell {

/// Switchover between the power series and the asymptotic expansion for I.
inline constexpr double kISeam = 25.0;
/// Switchover between the power series and the continued fraction for K.
inline constexpr double kKSeam = 2.0;

namespace detail {

inline constexpr int kMaxBesselTerms = 10000;

template <std::floating_point T>
void require_nonnegative(T x, const char* name) {
  if (!(x >= T(0))) throw DomainError(std::string(name) + ": argument must be >= 0");
}

template <std::floating_point T>
void require_positive(T x, const char* name) {
  if (!(x > T(0))) throw DomainError(std::string(name) + ": argument must be > 0");
}

/// I_nu(x) for nu in {0, 1} by the power series (x/2)^nu sum t^k / (k! (k+nu)!).
template <std::floating_point T>
T bessel_i_series(int order, T x) {
  const T t = x * x / T(4);
  const T eps = std::numeric_limits<T>::epsilon();
  T term = T(1);
  T sum = T(1);
  for (int k = 1; k < kMaxBesselTerms; ++k) {
    term *= t / (T(k) * T(k + order));
    sum += term;
    if (term <= eps * sum) break;
  }
  return order == 0 ? sum : sum * x / T(2);
}

/// exp(-x) I_nu(x) by the Hankel expansion; valid for x well above kISeam.
template <std::floating_point T>
T bessel_i_asymptotic_scaled(int order, T x) {
  const T mu = T(4 * order * order);
  const T eps = std::numeric_limits<T>::epsilon();
  T term = T(1);
  T sum = T(1);
  T previous = std::numeric_limits<T>::infinity();
  for (int k = 1; k < kMaxBesselTerms; ++k) {
    const T odd = T(2 * k - 1);
    term *= -(mu - odd * odd) / (T(8 * k) * x);
    const T magnitude = std::abs(term);
    // The series is divergent; stop at its smallest term.
    if (magnitude >= previous) break;
    sum += term;
    if (magnitude <= eps * std::abs(sum)) break;
    previous = magnitude;
  }
  return sum / std::sqrt(T(2) * std::numbers::pi_v<T> * x);
}

template <std::floating_point T>
T bessel_k0_series(T x) {
  const T t = x * x / T(4);
  const T eps = std::numeric_limits<T>::epsilon();
  T power = T(1);  // t^k / (k!)^2
  T harmonic = T(0);
  T i0 = T(1);
  T correction = T(0);
  for (int k = 1; k < kMaxBesselTerms; ++k) {
    power *= t / (T(k) * T(k));
    harmonic += T(1) / T(k);
    i0 += power;
    correction += harmonic * power;
    if (harmonic * power <= eps * correction && power <= eps * i0) break;
  }
  return -(std::log(x / T(2)) + std::numbers::egamma_v<T>) * i0 + correction;
}

template <std::floating_point T>
T bessel_k1_series(T x) {
  const T t = x * x / T(4);
  const T eps = std::numeric_limits<T>::epsilon();
  const T gamma = std::numbers::egamma_v<T>;
  // psi(k+1) + psi(k+2) = -2 gamma + H_k + H_{k+1}
  T power = T(1);  // t^k / (k! (k+1)!)
  T harmonic = T(0);
  T digamma_sum = -T(2) * gamma + T(1);
  T i1_sum = T(1);
  T correction = digamma_sum;
  for (int k = 1; k < kMaxBesselTerms; ++k) {
    power *= t / (T(k) * T(k + 1));
    harmonic += T(1) / T(k);
    digamma_sum = -T(2) * gamma + T(2) * harmonic + T(1) / T(k + 1);
    i1_sum += power;
    const T step = digamma_sum * power;
    correction += step;
    if (std::abs(step) <= eps * std::abs(correction) && power <= eps * i1_sum) break;
  }
  const T i1 = i1_sum * x / T(2);
  return T(1) / x + std::log(x / T(2)) * i1 - x / T(4) * correction;
}

template <std::floating_point T>
struct ScaledK01 {
  T k0;
  T k1;
};

/// exp(x) K0(x) and exp(x) K1(x) by Steed's algorithm for CF2 (order 0).
template <std::floating_point T>
ScaledK01<T> bessel_k01_continued_fraction_scaled(T x) {
  const T eps = std::numeric_limits<T>::epsilon();
  const T a1 = T(0.25);
  T b = T(2) * (T(1) + x);
  T d = T(1) / b;
  T h = d;
  T delh = d;
  T q1 = T(0);
  T q2 = T(1);
  T q = a1;
  T c = a1;
  T a = -a1;
  T s = T(1) + q * delh;
  for (int i = 2; i <= kMaxBesselTerms; ++i) {
    a -= T(2 * (i - 1));
    c = -a * c / T(i);
    const T qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += T(2);
    d = T(1) / (b + a * d);
    delh = (b * d - T(1)) * delh;
    h += delh;
    const T dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps) break;
  }
  h = a1 * h;
  const T k0 = std::sqrt(std::numbers::pi_v<T> / (T(2) * x)) / s;
  const T k1 = k0 * (x + T(0.5) - h) / x;
  return {k0, k1};
}

template <std::floating_point T>
T bessel_i_scaled(int order, T x) {
  if (x <= T(kISeam)) return bessel_i_series(order, x) * std::exp(-x);
  return bessel_i_asymptotic_scaled(order, x);
}

template <std::floating_point T>
T bessel_i(int order, T x) {
  if (x <= T(kISeam)) return bessel_i_series(order, x);
  return bessel_i_asymptotic_scaled(order, x) * std::exp(x);
}

}  // namespace detail

template <std::floating_point T>
T bessel_i0(T x) {
  detail::require_nonnegative(x, "bessel_i0");
  return detail::bessel_i(0, x);
}

template <std::floating_point T>
T bessel_i1(T x) {
  detail::require_nonnegative(x, "bessel_i1");
  return detail::bessel_i(1, x);
}

/// exp(-x) I0(x)
template <std::floating_point T>
T bessel_i0_scaled(T x) {
  detail::require_nonnegative(x, "bessel_i0_scaled");
  return detail::bessel_i_scaled(0, x);
}

/// exp(-x) I1(x)
template <std::floating_point T>
T bessel_i1_scaled(T x) {
  detail::require_nonnegative(x, "bessel_i1_scaled");
  return detail::bessel_i_scaled(1, x);
}

/// exp(x) K0(x)
template <std::floating_point T>
T bessel_k0_scaled(T x) {
  detail::require_positive(x, "bessel_k0_scaled");
  if (x <= T(kKSeam)) return detail::bessel_k0_series(x) * std::exp(x);
  return detail::bessel_k01_continued_fraction_scaled(x).k0;
}

/// exp(x) K1(x)
template <std::floating_point T>
T bessel_k1_scaled(T x) {
  detail::require_positive(x, "bessel_k1_scaled");
  if (x <= T(kKSeam)) return detail::bessel_k1_series(x) * std::exp(x);
  return detail::bessel_k01_continued_fraction_scaled(x).k1;
}

template <std::floating_point T>
T bessel_k0(T x) {
  detail::require_positive(x, "bessel_k0");
  if (x <= T(kKSeam)) return detail::bessel_k0_series(x);
  return detail::bessel_k01_continued_fraction_scaled(x).k0 * std::exp(-x);
}

template <std::floating_point T>
T bessel_k1(T x) {
  detail::require_positive(x, "bessel_k1");
  if (x <= T(kKSeam)) return detail::bessel_k1_series(x);
  return detail::bessel_k01_continued_fraction_scaled(x).k1 * std::exp(-x);
}

/// All four scaled kernels at one argument; the solver needs them together.
template <std::floating_point T>
struct ScaledBesselSet {
  T i0;  // exp(-x) I0(x)
  T i1;  // exp(-x) I1(x)
  T k0;  // exp(x) K0(x)
  T k1;  // exp(x) K1(x)
};

template <std::floating_point T>
ScaledBesselSet<T> scaled_bessel_set(T x) {
  detail::require_positive(x, "scaled_bessel_set");
  ScaledBesselSet<T> out{};
  out.i0 = detail::bessel_i_scaled(0, x);
  out.i1 = detail::bessel_i_scaled(1, x);
  if (x <= T(kKSeam)) {
    const T grow = std::exp(x);
    out.k0 = detail::bessel_k0_series(x) * grow;
    out.k1 = detail::bessel_k1_series(x) * grow;
  } else {
    const auto k = detail::bessel_k01_continued_fraction_scaled(x);
    out.k0 = k.k0;
    out.k1 = k.k1;
  }
  return out;
}

}  // namespace rmshell
