#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "starkres/special.hpp"

using namespace starkres;

static double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

TEST_CASE("principal square root branch") {
  CHECK(principal_sqrt({4.0, 0.0}) == Complex(2.0, 0.0));
  CHECK(std::abs(principal_sqrt({0.0, 2.0}) - Complex(1.0, 1.0)) < 1e-15);
  CHECK(std::abs(principal_sqrt({0.0, -2.0}) - Complex(1.0, -1.0)) < 1e-15);
  // on the cut: limit from above
  CHECK(std::abs(principal_sqrt({-4.0, 0.0}) - Complex(0.0, 2.0)) < 1e-15);
}

TEST_CASE("principal square root conjugate symmetry off the cut") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    Complex z(u(rng), u(rng));
    if (z.imag() == 0.0) continue;
    Complex a = principal_sqrt(std::conj(z));
    Complex b = std::conj(principal_sqrt(z));
    CHECK(std::abs(a - b) < 1e-14 * std::abs(a));
  }
}

// Fixed-point references computed once with 30-digit arithmetic and frozen.
TEST_CASE("erf at pinned reference points") {
  struct Ref {
    Complex z, v;
  };
  const Ref refs[] = {
      {{0.5, 0.25}, {0.548689360553762184, 0.221990954288373348}},
      {{2.0, 2.0}, {1.15131086639806902, 0.127291629463140791}},
      {{3.5, -1.0}, {0.999998907191266897, -1.62172133452288741e-6}},
      {{1.0, 7.5}, {5.54776483731848815e22, -4.94375546466098426e22}},
      {{6.0, 2.0}, {0.999999999999999235, -8.16444869943385355e-16}},
      {{-4.0, 3.0}, {-0.999910661785391682, -4.97202605449660365e-5}},
      {{0.1, -5.0}, {6817477771.51383651, -4581362884.05235081}},
      {{7.0, 0.5}, {1.0, 3.79467121591127575e-23}},
      {{0.3, 0.7}, {0.521161004860149687, 0.830910976368351623}},
  };
  for (const Ref& r : refs) {
    Complex got = erf_complex(r.z);
    CHECK(std::abs(got.real() - r.v.real()) <=
          1e-13 * std::max(1.0, std::abs(r.v.real())));
    CHECK(std::abs(got.imag() - r.v.imag()) <=
          1e-13 * std::max(std::abs(r.v.real()), std::abs(r.v.imag())));
  }
  CHECK(std::abs(erf_complex({0.0, 1.0}) - Complex(0.0, 1.650425758797543)) <
        1e-13);
}

TEST_CASE("erf basics: odd, zero at zero, real on the real line") {
  CHECK(erf_complex({0.0, 0.0}) == Complex(0.0, 0.0));
  Complex z(0.3, 0.7);
  CHECK(std::abs(erf_complex(-z) + erf_complex(z)) < 1e-15);
  CHECK(erf_complex({1.3, 0.0}).imag() == 0.0);
  CHECK(erf_complex({1.0, 0.0}).real() == doctest::Approx(std::erf(1.0)));
}

TEST_CASE("erf conjugate symmetry randomized") {
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 10000; ++i) {
    Complex z(u(rng), u(rng));
    if (std::abs(z) > 6.0) continue;
    Complex a = erf_complex(std::conj(z));
    Complex b = std::conj(erf_complex(z));
    CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(b)));
  }
}

// Independent slow oracle: the Maclaurin series in long double, usable while
// the terms stay well-conditioned.
static Complex erf_taylor(Complex z) {
  std::complex<long double> zz(z.real(), z.imag());
  std::complex<long double> term = zz, sum = zz;
  for (int n = 1; n < 200; ++n) {
    term *= -zz * zz / (long double)n;
    sum += term / (long double)(2 * n + 1);
    if (std::abs(term) < 1e-25L * std::abs(sum)) break;
  }
  sum *= 2.0L / std::sqrt((long double)M_PI);
  return {(double)sum.real(), (double)sum.imag()};
}

TEST_CASE("erf matches an independent series oracle on a disk") {
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int i = 0; i < 2000; ++i) {
    Complex z(u(rng), u(rng));
    CHECK(rel_err(erf_complex(z), erf_taylor(z)) < 1e-12);
  }
}

TEST_CASE("scaled erf agrees with the plain one when representable") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 2000; ++i) {
    Complex z(u(rng), u(rng));
    Complex plain = erf_complex(z);
    Complex scaled = erf_complex_scaled(z).to_complex();
    CHECK(rel_err(scaled, plain) < 1e-12);
  }
}

TEST_CASE("scaled erf survives exponents beyond double range") {
  // |erf(iy)| ~ e^{y^2}/(y sqrt(pi)) for large y; y = 30 gives e^900.
  ScaledComplex v = erf_complex_scaled({0.0, 30.0});
  double expect = 900.0 - std::log(30.0 * std::sqrt(M_PI));
  CHECK(v.abs_log() == doctest::Approx(expect).epsilon(1e-3));
  CHECK(std::abs(v.mantissa.real()) < 1e-12);  // imaginary on the axis
}
