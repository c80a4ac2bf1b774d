#include <doctest.h>

#include <cmath>
#include <random>

#include "starkres/scaled_complex.hpp"

using namespace starkres;

static bool close(Complex a, Complex b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

TEST_CASE("exp of a complex exponent") {
  CHECK(ScaledComplex::exp({0.0, 0.0}).to_complex() == Complex(1.0, 0.0));

  ScaledComplex euler = ScaledComplex::exp({0.0, M_PI});
  CHECK(std::abs(euler.to_complex() - Complex(-1.0, 0.0)) < 1e-15);

  ScaledComplex big = ScaledComplex::exp({1000.0, 1.0});
  CHECK(big.log_scale == doctest::Approx(1000.0));
  CHECK(big.mantissa.real() == doctest::Approx(std::cos(1.0)));
  CHECK(big.mantissa.imag() == doctest::Approx(std::sin(1.0)));
}

TEST_CASE("normalization keeps |mantissa| = 1") {
  ScaledComplex v(Complex(3.0, 4.0), 2.0);
  CHECK(std::abs(v.mantissa) == doctest::Approx(1.0));
  CHECK(v.abs_log() == doctest::Approx(2.0 + std::log(5.0)));
}

TEST_CASE("mul/add/div agree with plain complex arithmetic") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    Complex a(u(rng), u(rng)), b(u(rng), u(rng));
    ScaledComplex sa = ScaledComplex::from(a), sb = ScaledComplex::from(b);
    CHECK(close(scaled_mul(sa, sb).to_complex(), a * b, 1e-15));
    CHECK(close(scaled_add(sa, sb).to_complex(), a + b, 1e-15));
    if (std::abs(b) > 1e-6)
      CHECK(close(scaled_div(sa, sb).to_complex(), a / b, 1e-15));
  }
}

TEST_CASE("exp is a homomorphism in the exponent") {
  std::mt19937 rng(999);
  std::uniform_real_distribution<double> u(-500.0, 500.0);
  for (int i = 0; i < 500; ++i) {
    Complex w1(u(rng), u(rng)), w2(u(rng), u(rng));
    ScaledComplex prod =
        scaled_mul(ScaledComplex::exp(w1), ScaledComplex::exp(w2));
    ScaledComplex direct = ScaledComplex::exp(w1 + w2);
    CHECK(prod.abs_log() == doctest::Approx(direct.abs_log()).epsilon(1e-12));
    CHECK(std::abs(prod.mantissa - direct.mantissa) < 1e-9);
  }
}

TEST_CASE("huge magnitudes survive where double overflows") {
  ScaledComplex v = ScaledComplex::exp({5000.0, 0.3});
  ScaledComplex w = scaled_mul(v, v);
  CHECK(w.abs_log() == doctest::Approx(10000.0));
  CHECK(!w.shadowed);
}

TEST_CASE("addition shadows hopeless small terms and flags it") {
  ScaledComplex hi = ScaledComplex::exp({0.0, 0.0});
  ScaledComplex lo = ScaledComplex::exp({-900.0, 0.0});
  ScaledComplex sum = scaled_add(hi, lo);
  CHECK(sum.shadowed);
  CHECK(sum.abs_log() == doctest::Approx(0.0));
  // within threshold: no flag
  ScaledComplex ok = scaled_add(hi, ScaledComplex::exp({-700.0, 0.0}));
  CHECK(!ok.shadowed);
}

TEST_CASE("zero handling, negation, conjugation") {
  ScaledComplex z = ScaledComplex::zero();
  CHECK(z.is_zero());
  CHECK(std::isinf(z.abs_log()));
  ScaledComplex v(Complex(1.0, 2.0), 3.0);
  CHECK(scaled_add(v, -v).to_complex() == Complex(0.0, 0.0));
  CHECK(v.conj().to_complex() == std::conj(v.to_complex()));
}
