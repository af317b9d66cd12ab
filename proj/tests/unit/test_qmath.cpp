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

#include <doctest.h>

#include <random>

#include "chirpdd/qmath.hpp"
#include "oracle_values.hpp"

using namespace chirpdd::qmath;

namespace {

HermitianCoeffs random_h(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng), n(rng), n(rng)};
}

// exp(-i H dt) by diagonalising H: eigenvalues h0 +- |h|, projectors (I +- n.sigma)/2.
Matrix2 eig_exponential(const HermitianCoeffs& h, double dt) {
  const double r = h.vector_norm();
  using namespace pauli;
  const Matrix2 ns = Complex{h.hx / r} * kX + Complex{h.hy / r} * kY + Complex{h.hz / r} * kZ;
  const Matrix2 plus = Complex{0.5} * (kI + ns);
  const Matrix2 minus = Complex{0.5} * (kI - ns);
  return std::polar(1.0, -(h.h0 + r) * dt) * plus + std::polar(1.0, -(h.h0 - r) * dt) * minus;
}

}  // namespace

TEST_CASE("su2_exponential: zero Hamiltonian is the identity") {
  const auto u = su2_exponential({}, 3.7);
  CHECK(max_abs(u.matrix() - Matrix2::identity()) == 0.0);
}

TEST_CASE("su2_exponential: resonant pi rotation about x") {
  const double omega = kTwoPi * 10e6;
  const auto u = su2_exponential({0.0, 0.5 * omega, 0.0, 0.0}, kPi / omega);
  const Matrix2 expected = Complex{0.0, -1.0} * pauli::kX;
  CHECK(max_abs(u.matrix() - expected) < 1e-15);
}

TEST_CASE("su2_exponential matches eigendecomposition and stays unitary") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> udt(0.0, 1e-9);
  double worst_unitarity = 0.0;
  double worst_diff = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto h = random_h(rng, kTwoPi * 50e6);
    const double dt = udt(rng);
    const auto u = su2_exponential(h, dt);
    worst_unitarity = std::max(worst_unitarity, u.unitarity_error());
    worst_diff = std::max(worst_diff, max_abs(u.matrix() - eig_exponential(h, dt)));
  }
  CHECK(worst_unitarity < 1e-12);
  CHECK(worst_diff < 1e-12);
}

TEST_CASE("su2_exponential composes for constant h") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto h = random_h(rng, kTwoPi * 20e6);
    const double a = 0.37e-9 * (i % 7 + 1);
    const double b = 0.91e-9 * (i % 3 + 1);
    const auto lhs = su2_exponential(h, a + b);
    const auto rhs = su2_exponential(h, a) * su2_exponential(h, b);
    CHECK(max_abs(lhs.matrix() - rhs.matrix()) < 1e-12);
  }
}

TEST_CASE("su2_exponential small-angle branch agrees with the direct formula") {
  // |h| dt straddling the series threshold of sinc.
  for (double theta : {0.9e-4, 1.0e-4, 1.1e-4, 1e-7}) {
    const HermitianCoeffs h{0.0, 0.3, -0.4, 0.5 * std::sqrt(3.0)};
    const double dt = theta / h.vector_norm();
    CHECK(max_abs(su2_exponential(h, dt).matrix() - eig_exponential(h, dt)) < 1e-15);
  }
}

TEST_CASE("su2_exponential rejects bad input") {
  CHECK_THROWS_AS(su2_exponential({0, 1, 0, 0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(su2_exponential({0, std::nan(""), 0, 0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(su2_exponential({0, 1e9, 0, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("complex_log_gamma special values") {
  CHECK(std::abs(complex_log_gamma(1.0)) < 1e-14);
  CHECK(std::abs(complex_log_gamma(2.0)) < 1e-14);
  CHECK(std::abs(complex_log_gamma(0.5) - Complex{0.5 * std::log(kPi)}) < 1e-14);
  CHECK_THROWS_AS(complex_log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(complex_log_gamma(-3.0), std::domain_error);
}

TEST_CASE("complex_log_gamma against mpmath") {
  struct Point {
    double re, im, vre, vim;
  };
  using namespace oracle;
  const Point pts[] = {
      {kLogGamma_a_re, kLogGamma_a_im, kLogGamma_a_value_re, kLogGamma_a_value_im},
      {kLogGamma_b_re, kLogGamma_b_im, kLogGamma_b_value_re, kLogGamma_b_value_im},
      {kLogGamma_c_re, kLogGamma_c_im, kLogGamma_c_value_re, kLogGamma_c_value_im},
      {kLogGamma_d_re, kLogGamma_d_im, kLogGamma_d_value_re, kLogGamma_d_value_im},
      {kLogGamma_e_re, kLogGamma_e_im, kLogGamma_e_value_re, kLogGamma_e_value_im},
      {kLogGamma_f_re, kLogGamma_f_im, kLogGamma_f_value_re, kLogGamma_f_value_im},
  };
  for (const auto& p : pts) {
    const Complex v = complex_log_gamma({p.re, p.im});
    INFO("z = " << p.re << " + " << p.im << "i");
    CHECK(v.real() == doctest::Approx(p.vre).epsilon(1e-12));
    CHECK(std::abs(v.imag() - p.vim) < 1e-10);
  }
}

TEST_CASE("|Gamma(1/2 + iy)|^2 = pi / cosh(pi y)") {
  for (double y : {0.5, 1.0, 3.0, 10.0}) {
    const double lhs = std::exp(2.0 * complex_log_gamma({0.5, y}).real());
    const double rhs = kPi / std::cosh(kPi * y);
    CHECK(std::abs(lhs / rhs - 1.0) < 1e-10);
  }
}

TEST_CASE("log-Gamma recurrence on the right half plane") {
  for (double x = 0.05; x < 8.0; x += 0.37) {
    for (double y = -12.0; y <= 12.0; y += 1.3) {
      const Complex z{x, y};
      const Complex d = complex_log_gamma(z + 1.0) - complex_log_gamma(z) - std::log(z);
      // Equal up to a multiple of 2 pi i.
      const double k = std::round(d.imag() / kTwoPi);
      CHECK(std::abs(d - Complex{0.0, k * kTwoPi}) < 1e-10);
    }
  }
}

TEST_CASE("density_evolve basic cases") {
  const Density2 one;
  CHECK(max_abs(density_evolve(one, Unitary2::identity()).matrix() - one.matrix()) == 0.0);
  const Unitary2 flip{Complex{0.0, -1.0} * pauli::kX};
  const auto r = density_evolve(one, flip);
  CHECK(r.population2() == doctest::Approx(1.0));
  CHECK(r.population1() == doctest::Approx(0.0));
}

TEST_CASE("Density2 constructors") {
  const auto y = Density2::from_bloch(0, 1, 0);
  CHECK(0.5 + y.coherence21().imag() == doctest::Approx(1.0));
  const auto p = Density2::pure({1.0, 0.0}, {0.0, 1.0});
  CHECK(max_abs(p.matrix() - y.matrix()) < 1e-15);
  CHECK(p.trace_error() < 1e-15);
  CHECK(p.min_eigenvalue() == doctest::Approx(0.0).epsilon(1e-12));
}
