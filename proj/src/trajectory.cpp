#include "starkres/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "starkres/special.hpp"

namespace starkres {

namespace {

TrajectoryPoint make_point(double f, const ResonanceRecord& rec) {
  TrajectoryPoint p;
  p.f = f;
  p.r = rec.z;
  p.residual_log = rec.residual_log;
  p.im_over_f = std::abs(rec.z.imag()) / f;
  return p;
}

}  // namespace

std::vector<TrajectoryPoint> trace(const FFamily& F, double f_start,
                                   double f_end, int steps, Complex seed,
                                   double tol) {
  if (!(f_start > f_end && f_end > 0.0))
    throw DomainError("trace: need f_start > f_end > 0");
  auto at = [&](double f) {
    return [&F, f](Complex z) { return F(z, f); };
  };

  std::vector<TrajectoryPoint> pts;
  // Convergence at the start point is a precondition; failures propagate.
  pts.push_back(make_point(f_start, newton(at(f_start), seed, tol, 60)));

  double hint = std::clamp((f_start - f_end) / std::max(steps, 1), 1e-5, 0.01);
  double step = hint;
  double f = f_start;
  int easy = 0;
  while (f > f_end + 1e-15) {
    // Steps are kept small relative to f itself: root strings rearrange on
    // the phase scale f^2/|z^{3/2}|, and the linear predictor only tracks a
    // single branch while its extrapolation error stays below the ~pi*f
    // neighbor spacing. 0.1 f keeps a factor ~5 margin.
    step = std::min(step, std::min(0.01, std::max(hint, 0.1 * f)));
    double fn = std::max(f - step, f_end);
    Complex pred = pts.back().r;
    if (pts.size() >= 2) {
      const TrajectoryPoint& a = pts[pts.size() - 2];
      const TrajectoryPoint& b = pts.back();
      if (b.f != a.f) pred = b.r + (b.r - a.r) / (b.f - a.f) * (fn - b.f);
    }
    try {
      ResonanceRecord rec = newton(at(fn), pred, tol, 40);
      pts.push_back(make_point(fn, rec));
      f = fn;
      if (rec.newton_iters <= 5 && ++easy >= 3) {
        step = std::min(step * 2.0, 0.01);
        easy = 0;
      }
    } catch (const Error&) {
      easy = 0;
      step *= 0.5;
      if (step < 1e-5)
        throw BranchLost("trace: corrector failed at minimum f-step near f=" +
                             std::to_string(fn),
                         pts);
    }
  }
  return pts;
}

InstabilityReport instability_report(const std::vector<TrajectoryPoint>& traj,
                                     Complex r0) {
  if (traj.empty()) throw DomainError("instability_report: empty trajectory");
  InstabilityReport rep;
  double f_max = traj.front().f, f_min = traj.front().f;
  for (const auto& p : traj) {
    rep.c0_hat = std::max(rep.c0_hat, p.im_over_f);
    f_max = std::max(f_max, p.f);
    f_min = std::min(f_min, p.f);
  }
  rep.f_range = {f_max, f_min};

  // Distance to r0 judged where the trajectory had its chance to converge:
  // at f small compared to |Im r0| (or just the smallest f reached).
  double f_cut = std::max(0.1 * std::abs(r0.imag()), 1.05 * f_min);
  rep.min_dist_to_r0 = INFINITY;
  for (const auto& p : traj)
    if (p.f <= f_cut)
      rep.min_dist_to_r0 = std::min(rep.min_dist_to_r0, std::abs(p.r - r0));

  // Kendall tau of im_over_f against decreasing f: positive means the ratio
  // grows as f drops (no linear bound), negative or zero means bounded.
  std::vector<TrajectoryPoint> sorted = traj;
  std::sort(sorted.begin(), sorted.end(),
            [](const TrajectoryPoint& a, const TrajectoryPoint& b) {
              return a.f > b.f;
            });
  long concordant = 0, discordant = 0;
  for (size_t i = 0; i < sorted.size(); ++i)
    for (size_t j = i + 1; j < sorted.size(); ++j) {
      double d = sorted[j].im_over_f - sorted[i].im_over_f;
      if (d > 0.0)
        ++concordant;
      else if (d < 0.0)
        ++discordant;
    }
  long tot = concordant + discordant;
  rep.kendall_tau = tot > 0 ? double(concordant - discordant) / tot : 0.0;

  // A bounded ratio shows up as a noisy constant, whose sampled tau
  // fluctuates around 0; only a trend outside the one-sided 95% band of the
  // no-trend null counts as growth.
  double n = double(sorted.size());
  rep.tau_bound =
      n >= 3.0 ? 1.645 * std::sqrt(2.0 * (2.0 * n + 5.0) / (9.0 * n * (n - 1.0)))
               : 1.0;
  bool bounded = rep.kendall_tau <= rep.tau_bound;
  bool away = rep.min_dist_to_r0 >= 0.5 * std::abs(r0.imag());
  rep.verdict = (bounded && away) ? Verdict::unstable : Verdict::inconclusive;
  return rep;
}

std::vector<MuSweepPoint> mu_sweep(const std::vector<double>& mu_grid,
                                   double tol) {
  std::vector<double> mus = mu_grid;
  std::sort(mus.begin(), mus.end());
  if (mus.empty() || mus.front() <= 0.0 || mus.back() > 0.85)
    throw DomainError("mu_sweep: mu values must lie in (0, 0.85]");

  std::vector<MuSweepPoint> out;
  Complex seed(1.0, -0.001);
  for (double mu : mus) {
    // F(z) = 1 - z - mu^2 i pi e^{-z}(1 + erf(i sqrt z))/sqrt z.
    Holomorphic F = [mu](Complex z) {
      Complex w = principal_sqrt(z);
      ScaledComplex e = erf_complex_scaled(Complex(0.0, 1.0) * w);
      ScaledComplex tail = ScaledComplex::exp(-z) *
                           (ScaledComplex::from(Complex(1.0, 0.0)) + e) *
                           (Complex(0.0, M_PI) * mu * mu / w);
      return ScaledComplex::from(1.0 - z) - tail;
    };
    ResonanceRecord rec = newton(F, seed, tol, 80);
    MuSweepPoint p;
    p.mu = mu;
    p.r0 = rec.z;
    p.residual_log = rec.residual_log;
    out.push_back(p);
    seed = rec.z;
  }
  return out;
}

}  // namespace starkres
