#include "starkres/special.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace starkres {

namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955126;

struct GaussLegendre {
  std::vector<double> x, w;
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1], by Newton
// iteration on the Legendre recurrence.
GaussLegendre gauss_legendre(int n) {
  GaussLegendre r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const GaussLegendre& gl32() {
  static const GaussLegendre g = gauss_legendre(32);
  return g;
}

// (2/sqrt(pi)) int over the vertical segment from a (real) to a+iy of
// e^{-t^2} dt, accumulated in scaled arithmetic. Substituting t = a+iu:
// i e^{-a^2} int_0^y e^{u^2 - 2iau} du.
ScaledComplex erf_vertical(double a, double y) {
  if (y == 0.0) return ScaledComplex::zero();
  // Panels sized so magnitude and phase variation stay small per panel.
  double total_var = std::abs(y) * (2.0 * std::abs(a) + 2.0 * std::abs(y));
  int n = std::max(2, (int)std::ceil(total_var / 4.0));
  const GaussLegendre& g = gl32();
  ScaledComplex sum = ScaledComplex::zero();
  for (int p = 0; p < n; ++p) {
    double u0 = y * p / n, u1 = y * (p + 1) / n;
    double c = 0.5 * (u0 + u1), hw = 0.5 * (u1 - u0);
    for (size_t j = 0; j < g.x.size(); ++j) {
      double u = c + hw * g.x[j];
      // e^{u^2 - 2iau}, weight hw*w_j
      ScaledComplex term = ScaledComplex::exp(Complex(u * u, -2.0 * a * u));
      sum = sum + term * (hw * g.w[j]);
    }
  }
  ScaledComplex pref =
      ScaledComplex::exp(Complex(-a * a, 0.0)) * Complex(0.0, kTwoOverSqrtPi);
  return pref * sum;
}

}  // namespace

Complex principal_sqrt(Complex z) {
  if (z.imag() == 0.0 && z.real() < 0.0)
    return Complex(0.0, std::sqrt(-z.real()));
  return std::sqrt(z);
}

ScaledComplex erf_complex_scaled(Complex z) {
  double a = z.real(), y = z.imag();
  if (y == 0.0) return ScaledComplex::from(Complex(std::erf(a), 0.0));
  ScaledComplex v = ScaledComplex::from(Complex(std::erf(a), 0.0));
  return v + erf_vertical(a, y);
}

Complex erf_complex(Complex z) { return erf_complex_scaled(z).to_complex(); }

}  // namespace starkres
