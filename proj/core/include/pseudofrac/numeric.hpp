#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace pseudofrac {

/// Neumaier-compensated accumulator: error bound independent of term count.
class CompensatedSum {
 public:
  void add(double term) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      carry_ += (sum_ - t) + term;
    } else {
      carry_ += (term - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Evaluates |a|^e for a fixed exponent, with a multiply-only path when e is
/// a small non-negative integer (the common case p = 2, 3, 4, 8, ...).
class PowerLaw {
 public:
  explicit PowerLaw(double exponent)
      : exponent_(exponent),
        integer_(exponent >= 0.0 && exponent <= 4096.0 && exponent == std::floor(exponent)),
        n_(integer_ ? static_cast<std::uint32_t>(exponent) : 0u) {}

  double exponent() const { return exponent_; }

  double abs_pow(double a) const {
    a = std::abs(a);
    if (!integer_) return std::pow(a, exponent_);
    switch (n_) {
      case 0: return 1.0;
      case 1: return a;
      case 2: return a * a;
      case 3: return a * a * a;
      default: break;
    }
    double result = 1.0;
    std::uint32_t n = n_;
    while (n != 0) {
      if (n & 1u) result *= a;
      a *= a;
      n >>= 1;
    }
    return result;
  }

  /// (a)^{e} with the sign of a, i.e. |a|^{e-1} a when e = p - 1.
  double signed_pow(double a) const { return std::copysign(abs_pow(a), a); }

 private:
  double exponent_;
  bool integer_;
  std::uint32_t n_;
};

/// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// Area-weighted inner product sum_i a_i b_i * w.
inline double weighted_dot(std::span<const double> a, std::span<const double> b, double w) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.value() * w;
}

}  // namespace pseudofrac
