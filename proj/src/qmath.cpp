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

#include "chirpdd/qmath.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace chirpdd::qmath {

double max_abs(const Matrix2& m) {
  double r = 0.0;
  for (const auto& x : m.e) r = std::max(r, std::abs(x));
  return r;
}

double Unitary2::unitarity_error() const {
  return max_abs(m_.adjoint() * m_ - Matrix2::identity());
}

Density2 Density2::pure(Complex c1, Complex c2) {
  const double norm2 = std::norm(c1) + std::norm(c2);
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw std::invalid_argument("Density2::pure: state vector must be non-zero and finite");
  }
  const double s = 1.0 / std::sqrt(norm2);
  c1 *= s;
  c2 *= s;
  return Density2{Matrix2{{c1 * std::conj(c1), c1 * std::conj(c2), c2 * std::conj(c1),
                           c2 * std::conj(c2)}}};
}

Density2 Density2::from_bloch(double x, double y, double z) {
  return Density2{Matrix2{{Complex{0.5 * (1.0 + z)}, Complex{0.5 * x, -0.5 * y},
                           Complex{0.5 * x, 0.5 * y}, Complex{0.5 * (1.0 - z)}}}};
}

double Density2::hermiticity_error() const { return max_abs(m_ - m_.adjoint()); }

double Density2::min_eigenvalue() const {
  // Hermitian part only; eigenvalues are (tr -+ sqrt(tr^2 - 4 det)) / 2.
  const double a = m_.e[0].real();
  const double d = m_.e[3].real();
  const Complex b = 0.5 * (m_.e[1] + std::conj(m_.e[2]));
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  return 0.5 * (a + d) - half_gap;
}

Unitary2 su2_exponential(const HermitianCoeffs& h, double dt) {
  if (!h.finite() || !std::isfinite(dt)) {
    throw std::invalid_argument("su2_exponential: non-finite Hamiltonian or time step");
  }
  if (dt < 0.0) throw std::invalid_argument("su2_exponential: negative time step");
  const double phase = h.vector_norm() * dt;
  if (phase > kMaxPhasePerStep || std::abs(h.h0) * dt > kMaxPhasePerStep) {
    std::ostringstream msg;
    msg << "su2_exponential: step rotates by " << phase << " rad, above the guard of "
        << kMaxPhasePerStep;
    throw std::invalid_argument(msg.str());
  }
  return detail::su2_exponential_unchecked(h, dt);
}

namespace {

// Lanczos approximation, g = 7, nine terms.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

Complex log_gamma_right(Complex z) {
  // Valid for Re(z) >= 1/2.
  z -= 1.0;
  Complex series{kLanczos[0]};
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    series += kLanczos[i] / (z + static_cast<double>(i));
  }
  const Complex t = z + kLanczosG + 0.5;
  constexpr double kHalfLogTwoPi = 0.91893853320467274178;
  return kHalfLogTwoPi + (z + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace

Complex complex_log_gamma(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::invalid_argument("complex_log_gamma: non-finite argument");
  }
  if (z.imag() == 0.0 && z.real() <= 0.0 && std::nearbyint(z.real()) == z.real()) {
    std::ostringstream msg;
    msg << "complex_log_gamma: pole at z = " << z.real();
    throw std::domain_error(msg.str());
  }
  if (z.real() >= 0.5) return log_gamma_right(z);
  // Upward recurrence keeps the branch continuous in each half plane.
  const int shift = static_cast<int>(std::ceil(0.5 - z.real()));
  Complex sum_logs{};
  for (int k = 0; k < shift; ++k) sum_logs += std::log(z + static_cast<double>(k));
  return log_gamma_right(z + static_cast<double>(shift)) - sum_logs;
}

Density2 density_evolve(const Density2& rho, const Unitary2& u) {
  return Density2{u.matrix() * rho.matrix() * u.matrix().adjoint()};
}

}  // namespace chirpdd::qmath
