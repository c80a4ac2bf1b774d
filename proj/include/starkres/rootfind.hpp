#ifndef STARKRES_ROOTFIND_HPP
#define STARKRES_ROOTFIND_HPP

#include <string>
#include <vector>

#include "starkres/resolvent.hpp"

namespace starkres {

struct NoConvergence : Error {
  using Error::Error;
};
struct BoundaryZero : Error {
  using Error::Error;
};
struct NonIntegerWinding : Error {
  using Error::Error;
};

enum class Model { model1, model2 };

using Holomorphic = std::function<ScaledComplex(Complex)>;

struct ResonanceRecord {
  Complex z{0.0, 0.0};
  double residual_log = 0.0;  // log |F(z)|
  int newton_iters = 0;
  double f = 0.0;
  Model model = Model::model1;
  bool count_certified = false;
};

/// Damped Newton with complex central differences (h = max(1e-7, 1e-7 |z|)).
/// Converged when the Newton step |F/F'| drops below tol; the step length is
/// the residual rescaled by the local derivative, so this is scale-free.
/// Throws NoConvergence after max_iter iterations.
ResonanceRecord newton(const Holomorphic& F, Complex z0, double tol = 1e-10,
                       int max_iter = 60);

struct Rect {
  Complex lo{0.0, 0.0};  // bottom-left corner
  Complex hi{0.0, 0.0};  // top-right corner
  bool contains(Complex z, double margin = 0.0) const {
    return z.real() >= lo.real() - margin && z.real() <= hi.real() + margin &&
           z.imag() >= lo.imag() - margin && z.imag() <= hi.imag() + margin;
  }
};

struct WindingReport {
  Rect rectangle;
  int count = 0;
  double boundary_min_abs_log = 0.0;  // log of min |F| over the boundary
};

/// Number of zeros inside the rectangle by the argument principle: total
/// phase change of F around the boundary, unwrapped with adaptive refinement
/// keeping each step below pi/2. Auto-perturbs the rectangle up to 3 times
/// when a boundary zero is detected (BoundaryZero after that); throws
/// NonIntegerWinding if the total refuses to settle within 0.05 of an
/// integer.
WindingReport winding_count(const Holomorphic& F, Rect rect,
                            int samples_per_side = 64);

struct ScanResult {
  std::vector<ResonanceRecord> records;  // deduplicated, sorted by (Re, Im)
  int winding = 0;
  bool counts_match = false;
  std::string diagnostic;  // nonempty on mismatch
};

/// Newton started from every node of an nx-by-ny grid over the rectangle;
/// roots outside the rectangle are discarded, the rest deduplicated at
/// cluster radius 1e-6 and cross-checked against winding_count. A count
/// mismatch is reported in the result, never silently dropped.
ScanResult scan_window(const Holomorphic& F, Rect rect, int nx, int ny,
                       double tol = 1e-10, int threads = 0);

/// Certify a located root by a count-1 argument-principle box around it.
bool certify(const Holomorphic& F, ResonanceRecord& rec, double radius);

struct EigenvalueCheckReport {
  double F_residual_log = 0.0;    // log |F_model1(lambda)|
  double psi_residual_log = 0.0;  // log |psi_f(lambda/f)|
};

/// Both residuals of the real-eigenvalue necessary conditions: F(lambda) = 0
/// and psi_f(lambda/f) = 0. Both must be small for a candidate.
EigenvalueCheckReport eigenvalue_check(double lambda, double f,
                                       const Profile& p,
                                       const EvalBudget& budget = {});

}  // namespace starkres

#endif
