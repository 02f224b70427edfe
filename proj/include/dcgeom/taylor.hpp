// Copyright 2026 The dcgeom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace dcgeom {

/// Truncated univariate Taylor series f(t0 + s) = sum_j c_j s^j.
///
/// Coefficient j is f^(j)(t0) / j!. Used to carry pulse amplitudes and their
/// time derivatives through the nested-commutator expansions without finite
/// differences.
class Jet {
 public:
  static constexpr std::size_t kSize = 8;

  constexpr Jet() = default;
  constexpr Jet(double value) { c_[0] = value; }  // NOLINT(google-explicit-constructor)

  /// The series of the identity map t0 + s.
  static Jet variable(double t0) {
    Jet j(t0);
    j.c_[1] = 1.0;
    return j;
  }

  double& operator[](std::size_t i) { return c_[i]; }
  double operator[](std::size_t i) const { return c_[i]; }

  double value() const { return c_[0]; }

  /// n-th derivative at the expansion point.
  double derivative(std::size_t n) const {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return c_[n] * f;
  }

  /// Series of d/ds; the top coefficient is lost.
  Jet differentiate() const {
    Jet d;
    for (std::size_t j = 0; j + 1 < kSize; ++j) d.c_[j] = static_cast<double>(j + 1) * c_[j + 1];
    return d;
  }

  /// Evaluates the truncated polynomial at offset s.
  double evaluate(double s) const {
    double acc = 0.0;
    for (std::size_t j = kSize; j-- > 0;) acc = acc * s + c_[j];
    return acc;
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t j = 0; j < kSize; ++j) c_[j] += o.c_[j];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t j = 0; j < kSize; ++j) c_[j] -= o.c_[j];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t i = 0; i < kSize; ++i) {
      if (a.c_[i] == 0.0) continue;
      for (std::size_t j = 0; i + j < kSize; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }

  friend Jet reciprocal(const Jet& a) {
    if (a.c_[0] == 0.0) throw std::domain_error("Jet reciprocal of a series with zero constant term");
    Jet r;
    r.c_[0] = 1.0 / a.c_[0];
    for (std::size_t n = 1; n < kSize; ++n) {
      double acc = 0.0;
      for (std::size_t k = 1; k <= n; ++k) acc += a.c_[k] * r.c_[n - k];
      r.c_[n] = -acc * r.c_[0];
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  friend Jet sqrt(const Jet& a) {
    if (a.c_[0] <= 0.0) throw std::domain_error("Jet sqrt needs a positive constant term");
    Jet r;
    r.c_[0] = std::sqrt(a.c_[0]);
    for (std::size_t n = 1; n < kSize; ++n) {
      double acc = a.c_[n];
      for (std::size_t k = 1; k < n; ++k) acc -= r.c_[k] * r.c_[n - k];
      r.c_[n] = acc / (2.0 * r.c_[0]);
    }
    return r;
  }

  /// sin and cos of a series, via the coupled recurrences s' = c u', c' = -s u'.
  friend void sincos(const Jet& u, Jet& s, Jet& c) {
    s = Jet();
    c = Jet();
    s.c_[0] = std::sin(u.c_[0]);
    c.c_[0] = std::cos(u.c_[0]);
    for (std::size_t n = 1; n < kSize; ++n) {
      double as = 0.0;
      double ac = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double w = static_cast<double>(k) * u.c_[k];
        as += w * c.c_[n - k];
        ac += w * s.c_[n - k];
      }
      s.c_[n] = as / static_cast<double>(n);
      c.c_[n] = -ac / static_cast<double>(n);
    }
  }

 private:
  std::array<double, kSize> c_{};
};

}  // namespace dcgeom
