#ifndef STARKRES_TRAJECTORY_HPP
#define STARKRES_TRAJECTORY_HPP

#include <vector>

#include "starkres/rootfind.hpp"

namespace starkres {

struct BranchLost : Error {
  BranchLost(const std::string& msg, std::vector<struct TrajectoryPoint> got)
      : Error(msg), points(std::move(got)) {}
  std::vector<struct TrajectoryPoint> points;  // last good prefix
};

struct TrajectoryPoint {
  double f = 0.0;
  Complex r{0.0, 0.0};
  double residual_log = 0.0;
  double im_over_f = 0.0;  // |Im r| / f
};

enum class Verdict { unstable, inconclusive };

struct InstabilityReport {
  double c0_hat = 0.0;       // max of im_over_f over the trajectory
  double min_dist_to_r0 = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::pair<double, double> f_range{0.0, 0.0};  // (largest, smallest)
  double kendall_tau = 0.0;  // trend of im_over_f as f decreases
  double tau_bound = 0.0;    // one-sided 95% null bound for kendall_tau
};

struct MuSweepPoint {
  double mu = 0.0;
  Complex r0{0.0, 0.0};
  double residual_log = 0.0;
};

/// A family of F functions indexed by f (the field strength).
using FFamily = std::function<ScaledComplex(Complex, double)>;

/// Follow one root branch from f_start down to f_end: linear predictor from
/// the last two roots, Newton corrector. The initial f-step is the span over
/// `steps`; it halves on corrector failure, doubles after 3 easy steps, and
/// stays within [1e-5, 0.01]. Throws BranchLost (carrying the good prefix)
/// if the corrector keeps failing at the minimum step. Points come back
/// ordered by decreasing f.
std::vector<TrajectoryPoint> trace(const FFamily& F, double f_start,
                                   double f_end, int steps, Complex seed,
                                   double tol = 1e-9);

/// Instability diagnostics against the f = 0 resonance r0: verdict unstable
/// requires no significant upward im_over_f trend (Kendall tau within the
/// one-sided 95% bound of the no-trend null, so a noisy constant passes) and
/// min distance to r0 at small f >= |Im r0| / 2.
InstabilityReport instability_report(const std::vector<TrajectoryPoint>& traj,
                                     Complex r0);

/// The f = 0 resonance of the rank-one Gaussian model as a function of mu:
/// Newton on the closed-form F, seeded at 1 - 0.001i for the smallest mu and
/// continued from the previous root. mu_grid values must lie in (0, 0.85].
std::vector<MuSweepPoint> mu_sweep(const std::vector<double>& mu_grid,
                                   double tol = 1e-11);

}  // namespace starkres

#endif
