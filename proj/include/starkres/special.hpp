#ifndef STARKRES_SPECIAL_HPP
#define STARKRES_SPECIAL_HPP

#include "starkres/scaled_complex.hpp"

namespace starkres {

/// Principal branch, cut (-inf,0); on the cut returns the limit from above,
/// i|z|^{1/2}. Im sqrt(z) has the sign of Im z off the cut.
Complex principal_sqrt(Complex z);

/// Entire extension of (2/sqrt(pi)) int_0^z e^{-t^2} dt.
/// Relative accuracy <= 1e-13 for |z| <= 8 (and far beyond).
Complex erf_complex(Complex z);

/// Overflow-safe variant for |Im z| large enough that e^{-z^2} leaves double
/// range.
ScaledComplex erf_complex_scaled(Complex z);

}  // namespace starkres

#endif
