#ifndef STARKRES_RESOLVENT_HPP
#define STARKRES_RESOLVENT_HPP

#include "starkres/profile.hpp"
#include "starkres/quadrature.hpp"
#include "starkres/scaled_complex.hpp"

namespace starkres {

enum class Sheet { physical, continued };

struct SpectralPoint {
  Complex z{0.0, 0.0};
  Sheet sheet = Sheet::physical;
  double f = 0.0;
};

enum class Method { exact, expansion24, leading26, auto_pick };

struct EvalBudget {
  double rel_tol = 1e-10;
  long max_evals = 80000000;
  Method method = Method::auto_pick;
  // auto_pick uses the product formula at f >= this, the small-f expansion
  // below it.
  double auto_exact_threshold = 0.01;
  // > 0 forces the rectangular contour at this descent depth for psi_f
  // (exposed for the contour-independence checks); 0 picks a saddle-adapted
  // contour automatically.
  double alpha = 0.0;
};

/// (1/sqrt(2 pi)) Int e^{-i(k^3/(3f) - k x)} phi_hat(k) dk along a descent
/// contour. Entire in x; returned log-scaled since |psi_f| reaches e^{c/f}
/// off the real axis. Values at real x are cached per (f, profile).
ScaledComplex psi_f(Complex x, double f, const Profile& p,
                    const EvalBudget& budget = {});

/// The conjugate-reflected transform: same integral with amplitude
/// eval_conj(-k). Satisfies psi_f_reflected(x) == conj(psi_f(conj x)).
ScaledComplex psi_f_reflected(Complex x, double f, const Profile& p,
                              const EvalBudget& budget = {});

void clear_psi_cache();

/// Physical-sheet matrix element (phi, (p^2 + f x - z)^{-1} phi) as the
/// x-integral (1/f) Int |psi_f(x)|^2 / (x - z/f) dx. Requires Im z != 0.
/// ill_conditioned (optional) is set when |Im z|/f < 1e-3.
ScaledComplex resolvent_direct(Complex z, double f, const Profile& p,
                               const EvalBudget& budget = {},
                               bool* ill_conditioned = nullptr);

/// Second-sheet continuation: equals resolvent_direct for Im z > 0, adds the
/// residue term (2 pi i / f) psi_reflected(z/f) psi_f(z/f) below the axis,
/// and uses the principal-value + half-residue form on the axis itself.
ScaledComplex resolvent_continued(Complex z, double f, const Profile& p,
                                  const EvalBudget& budget = {});

/// f = 0 continued matrix element (phi, (p^2 - z)^{-1} phi)^c.
/// Gaussian profiles use the erf closed form; the general route is the plain
/// integral plus the residue correction (half of it on the real axis).
Complex resolvent_f0_continued(Complex z, const Profile& p,
                               const EvalBudget& budget = {});

/// The ordinary (not continued) integral Int phi_hat(k) eval_conj(k) /
/// (k^2 - z) dk. Exposed because the small-f expansion needs it verbatim.
Complex resolvent_f0_plain(Complex z, const Profile& p,
                           double rel_tol = 1e-11);

/// General-profile quadrature route of the f = 0 continuation (the Gaussian
/// closed form is cross-checked against this).
Complex resolvent_f0_quadrature(Complex z, const Profile& p,
                                const EvalBudget& budget = {});

/// Small-f expansion of the continued matrix element with O(f) error:
/// (i/f) A B - (i/f) C D + (1/z)(C phi_hat(+0) + D conj(phi_hat(-0))) +
/// plain f=0 integral, where A,B run over the saddle-distorted contour and
/// C,D over (-inf, 0]. Requires z in the validity region.
ScaledComplex resolvent_expansion24(Complex z, double f, const Profile& p,
                                    const EvalBudget& budget = {});

/// Leading order with O(sqrt f) error:
/// (pi/sqrt z) phi_hat(sqrt z) ec(-sqrt z) e^{i(4/3f) z^{3/2}}
/// + (i pi/sqrt z)(phi_hat(sqrt z) ec(sqrt z) + phi_hat(-sqrt z) ec(-sqrt z))
/// + plain f=0 integral, with ec(w) = conj(phi_hat(conj w)).
ScaledComplex resolvent_leading26(Complex z, double f, const Profile& p);

/// The six pieces of the saddle decomposition of the two V-contour halves,
/// plus the direct half-contour integrals for cross-checking:
/// c_plus == I1 + I2 + I3 and c_minus == I4 + I5 - I6.
struct SteepestIntegrals {
  ScaledComplex I1, I2, I3, I4, I5, I6;
  ScaledComplex c_plus, c_minus;
};
SteepestIntegrals steepest_integrals(Complex z, double f, const Profile& p,
                                     double rel_tol = 1e-11);

/// F(z) = 1 - z - r^c(z); zeros are the resonances of the rank-one model
/// with coupling phi. f = 0 routes to the f = 0 continuation.
ScaledComplex F_model1(Complex z, double f, const Profile& p,
                       const EvalBudget& budget = {});

/// Second model: F(z) = ((z-1)||psi0||^2 + (eps^2 + (z-1)^2) r0^c(z)) / |Q|
/// at f = 0 and r^c(phi_eps) - 1 for f > 0 (same zeros, continuous in f).
ScaledComplex F_model2(Complex z, double f, const ModelIIProfile& m,
                       const EvalBudget& budget = {});
ScaledComplex F_model2(Complex z, double f, double epsilon,
                       const Profile& psi0, const EvalBudget& budget = {});

/// Int |phi_hat(k)|^2 / ((k^2 + |lambda|)(1 + |lambda|)) dk for lambda < 0;
/// a negative eigenvalue exists exactly where this equals 1.
double bound_state_condition(double lambda, const Profile& p);

}  // namespace starkres

#endif
