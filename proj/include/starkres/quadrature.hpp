#ifndef STARKRES_QUADRATURE_HPP
#define STARKRES_QUADRATURE_HPP

#include <functional>

#include "starkres/contour.hpp"
#include "starkres/scaled_complex.hpp"

namespace starkres {

struct NonConvergence : Error {
  using Error::Error;
};

struct QuadResult {
  ScaledComplex value;
  double abs_error_log = -INFINITY;  // ln of estimated absolute error
  long evaluations = 0;
  double tail_bound_log = -INFINITY;
  bool converged = true;
  // worst remaining subinterval when not converged
  int worst_piece = -1;
  double worst_t_lo = 0.0, worst_t_hi = 0.0;
};

using ScaledIntegrand = std::function<ScaledComplex(Complex)>;

struct IntegrateOptions {
  double rel_tol = 1e-10;
  int max_depth = 24;
  long max_panels = 400000;
  // Optional cap on panel arc length near a point (used to pre-split
  // oscillatory integrands before adaptivity starts).
  std::function<double(Complex)> width_cap;
};

QuadResult integrate(const ContourPath& path, const ScaledIntegrand& f,
                     const IntegrateOptions& opts);
inline QuadResult integrate(const ContourPath& path, const ScaledIntegrand& f,
                            double rel_tol) {
  IntegrateOptions o;
  o.rel_tol = rel_tol;
  return integrate(path, f, o);
}

/// The only phase family this artifact needs: k^3/3 - k*x.
struct CubicPhase {
  Complex x;
  Complex eval(Complex k) const { return k * k * k / 3.0 - k * x; }
  Complex deriv(Complex k) const { return k * k - x; }
};

/// Integral of e^{-i * phase(k) * one_over_f} * amplitude(k) dk with panel
/// sizes capped at half the local oscillation wavelength; the exponent is
/// handled in ScaledComplex.
QuadResult integrate_oscillatory(const ContourPath& path,
                                 const CubicPhase& phase,
                                 const std::function<Complex(Complex)>& amp,
                                 double one_over_f, double rel_tol);

/// Symmetric-limit P.V. integral of g(k)/(k-s) dk over the real line, for
/// decaying smooth g, via singularity subtraction on a symmetric window
/// (whose log term vanishes exactly).
double principal_value(const std::function<double(double)>& g, double s,
                       double rel_tol);

inline void require_converged(const QuadResult& q, const char* what) {
  if (!q.converged)
    throw NonConvergence(std::string("quadrature failed to converge in ") +
                         what);
}

}  // namespace starkres

#endif
