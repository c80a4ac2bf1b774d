#ifndef STARKRES_SCALED_COMPLEX_HPP
#define STARKRES_SCALED_COMPLEX_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <ostream>

namespace starkres {

using Complex = std::complex<double>;

/// Complex value stored as mantissa * e^{log_scale}. Survives magnitudes
/// ~e^{c/f} that overflow double. Zero is {0, 0}.
struct ScaledComplex {
  Complex mantissa{0.0, 0.0};
  double log_scale = 0.0;
  bool shadowed = false;  // set when an addend was dropped in scaled_add

  static constexpr double kShadowThreshold = 800.0;

  ScaledComplex() = default;
  ScaledComplex(Complex m, double ls, bool sh = false)
      : mantissa(m), log_scale(ls), shadowed(sh) {
    normalize();
  }

  static ScaledComplex from(Complex c) { return ScaledComplex(c, 0.0); }
  static ScaledComplex zero() { return ScaledComplex(); }

  /// e^w as a scaled value: mantissa from Im w, scale from Re w.
  static ScaledComplex exp(Complex w) {
    ScaledComplex r;
    r.mantissa = Complex(std::cos(w.imag()), std::sin(w.imag()));
    r.log_scale = w.real();
    return r;
  }

  bool is_zero() const { return mantissa == Complex(0.0, 0.0); }

  void normalize() {
    double a = std::abs(mantissa);
    if (a == 0.0 || std::isnan(a)) {
      if (!std::isnan(a)) log_scale = 0.0;
      return;
    }
    mantissa /= a;
    log_scale += std::log(a);
  }

  Complex to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    return mantissa * std::exp(log_scale);
  }

  /// log |value|; -inf for zero.
  double abs_log() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return log_scale + std::log(std::abs(mantissa));
  }

  double arg() const { return std::arg(mantissa); }

  ScaledComplex conj() const {
    ScaledComplex r = *this;
    r.mantissa = std::conj(r.mantissa);
    return r;
  }

  ScaledComplex operator-() const {
    ScaledComplex r = *this;
    r.mantissa = -r.mantissa;
    return r;
  }
};

inline ScaledComplex scaled_mul(const ScaledComplex& a, const ScaledComplex& b) {
  if (a.is_zero() || b.is_zero()) return ScaledComplex::zero();
  return ScaledComplex(a.mantissa * b.mantissa, a.log_scale + b.log_scale,
                       a.shadowed || b.shadowed);
}

inline ScaledComplex scaled_div(const ScaledComplex& a, const ScaledComplex& b) {
  return ScaledComplex(a.mantissa / b.mantissa, a.log_scale - b.log_scale,
                       a.shadowed || b.shadowed);
}

inline ScaledComplex scaled_add(const ScaledComplex& a, const ScaledComplex& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const ScaledComplex& hi = (a.log_scale >= b.log_scale) ? a : b;
  const ScaledComplex& lo = (a.log_scale >= b.log_scale) ? b : a;
  double d = hi.log_scale - lo.log_scale;
  if (d > ScaledComplex::kShadowThreshold) {
    ScaledComplex r = hi;
    r.shadowed = true;
    return r;
  }
  ScaledComplex r(hi.mantissa + lo.mantissa * std::exp(-d), hi.log_scale,
                  a.shadowed || b.shadowed);
  return r;
}

inline ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
  return scaled_mul(a, b);
}
inline ScaledComplex operator*(const ScaledComplex& a, Complex c) {
  return scaled_mul(a, ScaledComplex::from(c));
}
inline ScaledComplex operator*(Complex c, const ScaledComplex& a) {
  return scaled_mul(a, ScaledComplex::from(c));
}
inline ScaledComplex operator*(const ScaledComplex& a, double c) {
  return scaled_mul(a, ScaledComplex::from(Complex(c, 0.0)));
}
inline ScaledComplex operator*(double c, const ScaledComplex& a) {
  return a * c;
}
inline ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
  return scaled_add(a, b);
}
inline ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) {
  return scaled_add(a, -b);
}
inline ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b) {
  return scaled_div(a, b);
}

inline std::ostream& operator<<(std::ostream& os, const ScaledComplex& v) {
  os << v.mantissa << "*e^" << v.log_scale;
  return os;
}

}  // namespace starkres

#endif
