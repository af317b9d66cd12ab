// Copyright 2026 The chirpdd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace chirpdd::qmath {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Largest rotation angle |h|*dt accepted for one propagation step.
inline constexpr double kMaxPhasePerStep = 1.0e3;

/// Coefficients of H = h0*I + hx*sx + hy*sy + hz*sz, in rad/s.
struct HermitianCoeffs {
  double h0 = 0.0;
  double hx = 0.0;
  double hy = 0.0;
  double hz = 0.0;

  double vector_norm() const { return std::sqrt(hx * hx + hy * hy + hz * hz); }
  bool finite() const {
    return std::isfinite(h0) && std::isfinite(hx) && std::isfinite(hy) &&
           std::isfinite(hz);
  }
};

/// Dense 2x2 complex matrix, row-major: [[e[0], e[1]], [e[2], e[3]]].
struct Matrix2 {
  std::array<Complex, 4> e{};

  Complex operator()(int row, int col) const { return e[2 * row + col]; }
  Complex& operator()(int row, int col) { return e[2 * row + col]; }

  static Matrix2 identity() { return {{Complex{1.0}, {}, {}, Complex{1.0}}}; }
  Matrix2 adjoint() const {
    return {{std::conj(e[0]), std::conj(e[2]), std::conj(e[1]), std::conj(e[3])}};
  }
  Complex trace() const { return e[0] + e[3]; }
  Complex det() const { return e[0] * e[3] - e[1] * e[2]; }
};

inline Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  return {{a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
           a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]}};
}
inline Matrix2 operator*(Complex s, const Matrix2& a) {
  return {{s * a.e[0], s * a.e[1], s * a.e[2], s * a.e[3]}};
}
inline Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
  return {{a.e[0] + b.e[0], a.e[1] + b.e[1], a.e[2] + b.e[2], a.e[3] + b.e[3]}};
}
inline Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
  return {{a.e[0] - b.e[0], a.e[1] - b.e[1], a.e[2] - b.e[2], a.e[3] - b.e[3]}};
}

// Largest entry modulus.
double max_abs(const Matrix2& m);

namespace pauli {
inline const Matrix2 kI = Matrix2::identity();
inline const Matrix2 kX{{Complex{}, Complex{1.0}, Complex{1.0}, Complex{}}};
inline const Matrix2 kY{{Complex{}, Complex{0.0, -1.0}, Complex{0.0, 1.0}, Complex{}}};
inline const Matrix2 kZ{{Complex{1.0}, Complex{}, Complex{}, Complex{-1.0}}};
}  // namespace pauli

class Unitary2 {
 public:
  Unitary2() : m_(Matrix2::identity()) {}
  // No check is made here; use unitarity_error() to validate.
  explicit Unitary2(const Matrix2& m) : m_(m) {}

  static Unitary2 identity() { return Unitary2{}; }

  const Matrix2& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  Unitary2 adjoint() const { return Unitary2{m_.adjoint()}; }
  Complex det() const { return m_.det(); }

  /// max |(U^dagger U - I)_ij|
  double unitarity_error() const;

  Unitary2& operator*=(const Unitary2& rhs) {
    m_ = m_ * rhs.m_;
    return *this;
  }
  friend Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
    return Unitary2{a.m_ * b.m_};
  }

 private:
  Matrix2 m_;
};

class Density2 {
 public:
  Density2() : m_{{Complex{1.0}, {}, {}, {}}} {}
  explicit Density2(const Matrix2& m) : m_(m) {}

  /// |psi><psi| for psi = c1|1> + c2|2>, normalised internally.
  static Density2 pure(Complex c1, Complex c2);
  /// (I + x*sx + y*sy + z*sz) / 2
  static Density2 from_bloch(double x, double y, double z);

  const Matrix2& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  double population1() const { return m_.e[0].real(); }
  double population2() const { return m_.e[3].real(); }
  Complex coherence21() const { return m_.e[2]; }

  double trace_error() const { return std::abs(m_.trace() - Complex{1.0}); }
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  Matrix2 m_;
};

namespace detail {

inline double sinc(double x) {
  if (std::abs(x) < 1.0e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// Closed-form exp(-i H dt) without argument checks.
inline Unitary2 su2_exponential_unchecked(const HermitianCoeffs& h, double dt) {
  const double theta = h.vector_norm() * dt;
  const double c = std::cos(theta);
  const double s = dt * sinc(theta);
  const Complex minus_i_s{0.0, -s};
  Matrix2 m{{Complex{c, -s * h.hz}, minus_i_s * Complex{h.hx, -h.hy},
             minus_i_s * Complex{h.hx, h.hy}, Complex{c, s * h.hz}}};
  if (h.h0 != 0.0) m = std::polar(1.0, -h.h0 * dt) * m;
  return Unitary2{m};
}

}  // namespace detail

/// exp(-i H dt) from the Pauli decomposition of H.
/// Throws std::invalid_argument for non-finite input, dt < 0, or a step that
/// rotates by more than kMaxPhasePerStep.
Unitary2 su2_exponential(const HermitianCoeffs& h, double dt);

/// Principal branch of log Gamma(z), analytic off the negative real axis.
/// Throws std::domain_error at the poles z = 0, -1, -2, ...
Complex complex_log_gamma(Complex z);

/// U rho U^dagger
Density2 density_evolve(const Density2& rho, const Unitary2& u);

}  // namespace chirpdd::qmath
