#include "starkres/profile.hpp"

#include <atomic>
#include <cmath>

#include "starkres/quadrature.hpp"

namespace starkres {

namespace {

std::atomic<unsigned long long> g_profile_id{1};

constexpr double kPi4 = 1.3313353638003897;  // pi^{1/4}

double real_line_integral(const std::function<double(double)>& g, double T) {
  ContourPath line;
  line.append(segment(Complex(-T, 0.0), Complex(0.0, 0.0)));
  line.append(segment(Complex(0.0, 0.0), Complex(T, 0.0)));
  QuadResult q = integrate(
      line,
      [&](Complex k) {
        return ScaledComplex::from(Complex(g(k.real()), 0.0));
      },
      1e-12);
  require_converged(q, "profile moment integral");
  return q.value.to_complex().real();
}

}  // namespace

Profile make_gaussian(double mu) {
  // mu = 0 is allowed: the decoupled limit, where the model function
  // degenerates to 1 - z.
  if (!(mu >= 0.0)) throw DomainError("make_gaussian: mu must be >= 0");
  Profile p;
  p.eval = [mu](Complex k) { return mu * std::exp(-k * k / 2.0); };
  // Real Taylor coefficients: the reflected factor equals eval itself.
  p.eval_conj = p.eval;
  p.region = RegionM::strip;
  p.k0 = 4.0;  // working cap; the function is entire
  p.l2_norm = mu * kPi4;
  p.boundary_right = p.boundary_left = Complex(mu, 0.0);
  p.description = "gaussian(mu=" + std::to_string(mu) + ")";
  p.id = g_profile_id.fetch_add(1);
  p.is_gaussian = true;
  p.mu = mu;
  return p;
}

Profile default_psi0() {
  Profile p;
  p.eval = [](Complex k) { return (1.0 + k * k) * std::exp(-k * k / 2.0); };
  p.eval_conj = p.eval;
  p.region = RegionM::strip;
  p.k0 = 4.0;
  p.l2_norm = std::sqrt(11.0 * std::sqrt(M_PI) / 4.0);
  p.boundary_right = p.boundary_left = Complex(1.0, 0.0);
  p.description = "psi0_default";
  p.id = g_profile_id.fetch_add(1);
  return p;
}

ModelIIProfile make_model2(const Profile& psi0, double epsilon) {
  ModelIIProfile m;
  m.base = psi0;
  m.epsilon = epsilon;
  auto abs2 = [&](double k) { return std::norm(psi0.eval(Complex(k, 0.0))); };
  m.base_l2_sq = real_line_integral(abs2, 40.0);
  m.quad_form =
      real_line_integral([&](double k) { return (1.0 - k * k) * abs2(k); },
                         40.0);
  if (!(m.quad_form < 0.0))
    throw NormSignError("make_model2: (psi0,(1-p^2)psi0) must be negative");
  m.normalization = std::sqrt(-m.quad_form);

  double n = m.normalization;
  auto base_eval = psi0.eval;
  auto base_conj = psi0.eval_conj;
  Profile p;
  p.eval = [base_eval, epsilon, n](Complex k) {
    return (k * k - 1.0 + Complex(0.0, epsilon)) * base_eval(k) / n;
  };
  p.eval_conj = [base_conj, epsilon, n](Complex k) {
    return (k * k - 1.0 - Complex(0.0, epsilon)) * base_conj(k) / n;
  };
  p.region = psi0.region;
  p.k0 = psi0.k0;
  p.theta0 = psi0.theta0;
  double l2_sq = real_line_integral(
      [&](double k) {
        double k2m1 = k * k - 1.0;
        return (k2m1 * k2m1 + epsilon * epsilon) * abs2(k);
      },
      40.0);
  p.l2_norm = std::sqrt(l2_sq) / n;
  p.boundary_right = p.eval(Complex(0.0, 0.0));
  p.boundary_left = p.boundary_right;
  p.description = "model2(eps=" + std::to_string(epsilon) + ", base=" +
                  psi0.description + ")";
  p.id = g_profile_id.fetch_add(1);
  m.profile = p;
  return m;
}

std::pair<Complex, Complex> boundary_values(const Profile& p) {
  // Richardson along h = 1e-2 .. 1e-5 from each side.
  auto one_sided = [&](double sign) {
    double h = 1e-2;
    Complex prev = p.eval(Complex(sign * h, 0.0));
    Complex extrap = prev;
    for (int i = 0; i < 3; ++i) {
      h /= 10.0;
      Complex cur = p.eval(Complex(sign * h, 0.0));
      extrap = cur + (cur - prev) / 9.0;  // first-order Richardson in h
      prev = cur;
    }
    return extrap;
  };
  return {one_sided(+1.0), one_sided(-1.0)};
}

}  // namespace starkres
