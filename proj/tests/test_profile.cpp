#include <doctest.h>

#include <cmath>
#include <random>

#include "starkres/profile.hpp"
#include "starkres/quadrature.hpp"

using namespace starkres;

namespace {

double line_integral(const std::function<double(double)>& g, double T) {
  ContourPath p;
  p.append(segment({-T, 0.0}, {0.0, 0.0}));
  p.append(segment({0.0, 0.0}, {T, 0.0}));
  QuadResult q = integrate(p, [&](Complex k) {
    return ScaledComplex::from(Complex(g(k.real()), 0.0));
  }, 1e-12);
  REQUIRE(q.converged);
  return q.value.to_complex().real();
}

}  // namespace

TEST_CASE("gaussian profile values and metadata") {
  Profile p = make_gaussian(0.1);
  CHECK(p.eval({0.0, 0.0}) == Complex(0.1, 0.0));
  CHECK(std::abs(p.eval({1.0, 0.0}) - 0.1 * std::exp(-0.5)) < 1e-16);
  // phi_hat(1+i) = mu e^{-(1+i)^2/2} = mu e^{-i}
  Complex v = p.eval({1.0, 1.0});
  CHECK(std::abs(v - 0.1 * Complex(std::cos(1.0), -std::sin(1.0))) < 1e-16);
  CHECK(p.l2_norm == doctest::Approx(0.1 * 1.3313353638).epsilon(1e-9));
  CHECK(p.is_gaussian);
  CHECK(p.boundary_right == Complex(0.1, 0.0));
  CHECK_THROWS_AS(make_gaussian(-1.0), DomainError);
}

TEST_CASE("parseval self-consistency of the stored norm") {
  for (const Profile& p : {make_gaussian(0.7), default_psi0()}) {
    double l2sq = line_integral(
        [&](double k) { return std::norm(p.eval({k, 0.0})); }, 30.0);
    CHECK(std::sqrt(l2sq) == doctest::Approx(p.l2_norm).epsilon(1e-8));
  }
}

TEST_CASE("reflection closure matches conjugation on the real line") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  ModelIIProfile m2 = make_model2(default_psi0(), 0.3);
  for (const Profile& p :
       {make_gaussian(0.5), default_psi0(), m2.profile}) {
    for (int i = 0; i < 200; ++i) {
      Complex k(u(rng), 0.0);
      CHECK(std::abs(p.eval_conj(k) - std::conj(p.eval(k))) < 1e-13);
    }
  }
}

TEST_CASE("analyticity: conjugate-reflection identity off the real line") {
  std::mt19937 rng(78);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  ModelIIProfile m2 = make_model2(default_psi0(), 0.2);
  for (const Profile& p :
       {make_gaussian(0.5), default_psi0(), m2.profile}) {
    for (int i = 0; i < 200; ++i) {
      Complex k(u(rng), u(rng));
      Complex a = p.eval_conj(k);
      Complex b = std::conj(p.eval(std::conj(k)));
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("second model acceptance and rejection by the sign condition") {
  ModelIIProfile m = make_model2(default_psi0(), 0.1);
  // closed form: int (1-k^2)(1+k^2)^2 e^{-k^2} dk = -(9/8) sqrt(pi)
  CHECK(m.quad_form ==
        doctest::Approx(-9.0 / 8.0 * std::sqrt(M_PI)).epsilon(1e-10));
  CHECK(m.base_l2_sq ==
        doctest::Approx(11.0 / 4.0 * std::sqrt(M_PI)).epsilon(1e-10));
  CHECK(m.normalization == doctest::Approx(std::sqrt(-m.quad_form)));

  // a plain gaussian has int (1-k^2) e^{-k^2} dk = +sqrt(pi)/2 > 0
  CHECK_THROWS_AS(make_model2(make_gaussian(1.0), 0.1), NormSignError);
}

TEST_CASE("second model norm identity") {
  double eps = 0.25;
  ModelIIProfile m = make_model2(default_psi0(), eps);
  double num = line_integral(
      [&](double k) {
        double k2m1 = k * k - 1.0;
        return (k2m1 * k2m1 + eps * eps) *
               std::norm(m.base.eval({k, 0.0}));
      },
      30.0);
  CHECK(m.profile.l2_norm * m.profile.l2_norm ==
        doctest::Approx(num / (m.normalization * m.normalization))
            .epsilon(1e-8));
}

TEST_CASE("boundary values by one-sided limits") {
  auto [r, l] = boundary_values(make_gaussian(0.3));
  CHECK(std::abs(r - Complex(0.3, 0.0)) < 1e-9);
  CHECK(std::abs(l - Complex(0.3, 0.0)) < 1e-9);

  double eps = 0.15;
  ModelIIProfile m = make_model2(default_psi0(), eps);
  Complex expect = Complex(-1.0, eps) / m.normalization;
  auto [r2, l2] = boundary_values(m.profile);
  CHECK(std::abs(r2 - expect) < 1e-9);
  CHECK(std::abs(l2 - r2) < 1e-12);
  CHECK(std::abs(m.profile.boundary_right - expect) < 1e-12);
}
