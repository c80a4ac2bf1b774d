#include <doctest.h>

#include <cmath>

#include "starkres/trajectory.hpp"

using namespace starkres;

TEST_CASE("tracing a branch of a synthetic family") {
  // F(z, f) = z - (1 - f + i f^2): root moves linearly, curves in Im
  FFamily F = [](Complex z, double f) {
    return ScaledComplex::from(z - Complex(1.0 - f, f * f));
  };
  auto traj = trace(F, 0.05, 0.002, 20, {0.95, 0.0}, 1e-11);
  REQUIRE(traj.size() >= 5);
  CHECK(traj.front().f == doctest::Approx(0.05));
  CHECK(traj.back().f <= 0.002 + 1e-12);
  for (size_t i = 1; i < traj.size(); ++i)
    CHECK(traj[i].f < traj[i - 1].f);  // ordered by decreasing f
  for (const auto& pt : traj) {
    CHECK(std::abs(pt.r - Complex(1.0 - pt.f, pt.f * pt.f)) < 1e-8);
    CHECK(pt.im_over_f == doctest::Approx(pt.f).epsilon(1e-4));
  }
}

TEST_CASE("losing the branch reports the good prefix") {
  // below f = 0.02 the function has no zero at all
  FFamily F = [](Complex z, double f) {
    if (f < 0.02) return ScaledComplex::from({1.0, 0.0});
    return ScaledComplex::from(z - Complex(1.0, -f));
  };
  try {
    trace(F, 0.05, 0.001, 30, {1.0, -0.05}, 1e-10);
    FAIL("expected BranchLost");
  } catch (const BranchLost& e) {
    REQUIRE(!e.points.empty());
    CHECK(e.points.back().f >= 0.02 - 1e-9);
    CHECK(std::abs(e.points.front().r - Complex(1.0, -0.05)) < 1e-8);
  }
}

TEST_CASE("instability verdict on a synthetic unstable trajectory") {
  // Im r = -c f stays away from r0 = 1 - 0.01i; im_over_f constant
  std::vector<TrajectoryPoint> traj;
  for (double f = 0.05; f > 0.002; f *= 0.8) {
    TrajectoryPoint pt;
    pt.f = f;
    pt.r = Complex(1.0 + 0.1 * f, -0.5 * f);
    pt.im_over_f = std::abs(pt.r.imag()) / f;
    traj.push_back(pt);
  }
  InstabilityReport rep = instability_report(traj, {1.0, -0.01});
  CHECK(rep.verdict == Verdict::unstable);
  CHECK(rep.c0_hat == doctest::Approx(0.5));
  CHECK(rep.kendall_tau <= 0.0);
  CHECK(rep.f_range.first == doctest::Approx(0.05));
  CHECK(rep.min_dist_to_r0 >= 0.005);
}

TEST_CASE("a trajectory converging to r0 is inconclusive") {
  Complex r0{1.0, -0.01};
  std::vector<TrajectoryPoint> traj;
  for (double f = 0.05; f > 0.002; f *= 0.8) {
    TrajectoryPoint pt;
    pt.f = f;
    pt.r = r0 + Complex(f, f);  // approaches r0, im_over_f grows as f drops
    pt.im_over_f = std::abs(pt.r.imag()) / f;
    traj.push_back(pt);
  }
  InstabilityReport rep = instability_report(traj, r0);
  CHECK(rep.verdict == Verdict::inconclusive);
}

TEST_CASE("static resonance of the rank-one model across couplings") {
  auto pts = mu_sweep({0.025, 0.05, 0.1, 0.2}, 1e-12);
  REQUIRE(pts.size() == 4);
  for (const auto& p : pts) {
    CHECK(p.r0.imag() < 0.0);
    CHECK(p.residual_log < std::log(1e-8));
  }
  // pinned value at mu = 0.1
  CHECK(std::abs(pts[2].r0 - Complex(1.01905, -0.0111115)) < 5e-5);

  // the width scales like mu^2: fit the log-log slope
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    double x = std::log(p.mu), y = std::log(-p.r0.imag());
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  int n = 4;
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("coupling sweep rejects values outside its range") {
  CHECK_THROWS_AS(mu_sweep({0.0}), DomainError);
  CHECK_THROWS_AS(mu_sweep({0.9}), DomainError);
}
