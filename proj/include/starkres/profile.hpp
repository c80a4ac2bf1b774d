#ifndef STARKRES_PROFILE_HPP
#define STARKRES_PROFILE_HPP

#include <functional>
#include <string>

#include "starkres/contour.hpp"
#include "starkres/scaled_complex.hpp"

namespace starkres {

struct NormSignError : Error {
  using Error::Error;
};

/// A Fourier-side coupling profile phi_hat with analyticity metadata.
struct Profile {
  std::function<Complex(Complex)> eval;       // phi_hat(k)
  std::function<Complex(Complex)> eval_conj;  // k -> conj(phi_hat(conj k))
  RegionM::Kind region = RegionM::strip;
  double k0 = 4.0;      // strip half-width
  double theta0 = 0.0;  // sector half-angle when region == sector
  double l2_norm = 0.0;
  Complex boundary_right{0.0, 0.0};  // phi_hat(+0)
  Complex boundary_left{0.0, 0.0};   // phi_hat(-0)
  std::string description;
  unsigned long long id = 0;  // cache key component

  bool is_gaussian = false;
  double mu = 0.0;  // set for the Gaussian family

  Complex operator()(Complex k) const { return eval(k); }
};

/// phi_hat(k) = mu e^{-k^2/2}; l2_norm = mu pi^{1/4}.
Profile make_gaussian(double mu);

/// Default base profile for the second model: psi0_hat(k) = (1+k^2)e^{-k^2/2}.
Profile default_psi0();

struct ModelIIProfile {
  Profile profile;     // phi_eps
  Profile base;        // psi0
  double epsilon = 0.0;
  double normalization = 0.0;  // sqrt|int (1-k^2)|psi0_hat|^2 dk|
  double base_l2_sq = 0.0;     // int |psi0_hat|^2 dk
  double quad_form = 0.0;      // int (1-k^2)|psi0_hat|^2 dk (must be < 0)
};

/// phi_eps_hat(k) = (k^2 - 1 + i eps) psi0_hat(k) / normalization.
/// Throws NormSignError when int (1-k^2)|psi0_hat|^2 dk >= 0.
ModelIIProfile make_model2(const Profile& psi0, double epsilon);

/// One-sided limits (phi_hat(+0), phi_hat(-0)) by Richardson extrapolation
/// along the real axis.
std::pair<Complex, Complex> boundary_values(const Profile& p);

}  // namespace starkres

#endif
