#include "starkres/contour.hpp"

#include <cmath>

#include "starkres/special.hpp"

namespace starkres {

namespace {

// The exact curve, evaluated with complex arithmetic so derivatives can use
// the complex-step trick.
Complex curve_y_impl(Complex x, double gamma, double nu, Side side) {
  if (side == Side::minus) {
    Complex d = gamma - x;  // x <= 0 so d >= gamma > 0
    Complex a = nu / d;
    return x * (a + std::sqrt(a * a + (gamma - x / 3.0) / d));
  }
  Complex d = gamma + x;  // x >= 0
  Complex a = nu / d;
  return x * (a - std::sqrt(a * a + (gamma + x / 3.0) / d));
}

double theta0_of_t0(double t0, double gamma, double nu, Side side) {
  double x = (side == Side::minus) ? -t0 : t0;
  return -curve_y_impl(Complex(x, 0.0), gamma, nu, side).real();
}

}  // namespace

double steepest_curve_y(double x, double gamma, double nu, Side side) {
  return curve_y_impl(Complex(x, 0.0), gamma, nu, side).real();
}

Complex ContourPath::start() const {
  if (pieces.empty()) throw DomainError("empty path");
  if (orientation >= 0) return pieces.front().k(pieces.front().t_lo);
  return pieces.back().k(pieces.back().t_hi);
}

Complex ContourPath::end() const {
  if (pieces.empty()) throw DomainError("empty path");
  if (orientation >= 0) return pieces.back().k(pieces.back().t_hi);
  return pieces.front().k(pieces.front().t_lo);
}

double ContourPath::continuity_defect() const {
  double worst = 0.0;
  for (size_t i = 0; i + 1 < pieces.size(); ++i) {
    Complex a = pieces[i].k(pieces[i].t_hi);
    Complex b = pieces[i + 1].k(pieces[i + 1].t_lo);
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

ContourPiece segment(Complex a, Complex b) {
  ContourPiece p;
  p.k = [a, b](double t) { return a + (b - a) * t; };
  p.dk = [a, b](double) { return b - a; };
  p.t_lo = 0.0;
  p.t_hi = 1.0;
  return p;
}

bool RegionM::contains(Complex z) const {
  Complex w = principal_sqrt(z);
  double g = w.real();
  if (!(g >= eps2 && g <= a)) return false;
  double ar = std::arg(w);
  double lim = std::min(M_PI / 3.0, kind == sector ? theta0 : M_PI / 3.0);
  if (!(ar < 0.0 && ar > -lim + eps1)) return false;
  if (kind == strip && !(w.imag() >= -k0 + eps3)) return false;
  return true;
}

ContourPath build_gamma_alpha(double alpha, double N, double T,
                              double analyticity_margin) {
  if (!(alpha > 0.0)) throw DomainError("gamma_alpha: alpha must be > 0");
  if (alpha >= analyticity_margin)
    throw DomainError("gamma_alpha: alpha outside analyticity margin");
  if (!(N > 0.0 && T > N)) throw DomainError("gamma_alpha: need T > N > 0");
  ContourPath path;
  ContourPiece left;
  left.k = [alpha](double t) { return Complex(t, -alpha); };
  left.dk = [](double) { return Complex(1.0, 0.0); };
  left.t_lo = -T;
  left.t_hi = -N;
  path.append(left);
  path.append(segment(Complex(-N, -alpha), Complex(-N, 0.0)));
  path.append(segment(Complex(-N, 0.0), Complex(N, 0.0)));
  path.append(segment(Complex(N, 0.0), Complex(N, -alpha)));
  ContourPiece right;
  right.k = [alpha](double t) { return Complex(t, -alpha); };
  right.dk = [](double) { return Complex(1.0, 0.0); };
  right.t_lo = N;
  right.t_hi = T;
  path.append(right);
  path.truncation = T;
  return path;
}

ContourPath build_C_half(double alpha, Side side, double T) {
  if (!(alpha > 0.0)) throw DomainError("C_pm: alpha must be > 0");
  if (!(T > 1.0)) throw DomainError("C_pm: need T > 1");
  ContourPath path;
  if (side == Side::minus) {
    ContourPiece tail;
    tail.k = [alpha](double t) { return Complex(t, -alpha); };
    tail.dk = [](double) { return Complex(1.0, 0.0); };
    tail.t_lo = -T;
    tail.t_hi = -1.0;
    path.append(tail);
    ContourPiece vee;
    Complex slope(1.0, alpha);  // k(t) = (-1 - ia)(-t) = (1 + ia) t for t<0
    vee.k = [slope](double t) { return slope * t; };
    vee.dk = [slope](double) { return slope; };
    vee.t_lo = -1.0;
    vee.t_hi = 0.0;
    path.append(vee);
  } else {
    ContourPiece vee;
    Complex slope(1.0, -alpha);
    vee.k = [slope](double t) { return slope * t; };
    vee.dk = [slope](double) { return slope; };
    vee.t_lo = 0.0;
    vee.t_hi = 1.0;
    path.append(vee);
    ContourPiece tail;
    tail.k = [alpha](double t) { return Complex(t, -alpha); };
    tail.dk = [](double) { return Complex(1.0, 0.0); };
    tail.t_lo = 1.0;
    tail.t_hi = T;
    path.append(tail);
  }
  path.truncation = T;
  return path;
}

ContourPath build_C_pm(double alpha, double T) {
  ContourPath path = build_C_half(alpha, Side::minus, T);
  path.append(build_C_half(alpha, Side::plus, T));
  path.truncation = T;
  return path;
}

double steepest_default_eps(const RegionM& region) {
  return std::min({0.05, region.k0 / 4.0, region.eps2 / 10.0});
}

std::pair<SteepestPathSpec, ContourPath> build_steepest_raw(
    Complex z, Side side, double delta, double eps, double T, double k0) {
  Complex w = principal_sqrt(z);
  double gamma = w.real();
  double nu = -w.imag();
  if (!(gamma > 0.0) || nu < -1e-12)
    throw DomainError("build_steepest: need Re sqrt(z) > 0, Im sqrt(z) <= 0");
  nu = std::max(nu, 0.0);

  double t0;
  if (nu < eps) {
    t0 = 2.0 * eps * std::sqrt(3.0);
  } else {
    // Solve Theta0(lambda*gamma) = nu (1+eps) on the minus-side curve.
    double target = nu * (1.0 + eps);
    double lo = 0.0, hi = 1.0;
    while (theta0_of_t0(hi * gamma, gamma, nu, Side::minus) < target)
      hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      if (theta0_of_t0(mid * gamma, gamma, nu, Side::minus) < target)
        lo = mid;
      else
        hi = mid;
    }
    t0 = 0.5 * (lo + hi) * gamma;
  }
  t0 = std::max(t0, delta);
  double Theta0 = theta0_of_t0(t0, gamma, nu, side);
  if (Theta0 >= k0)
    throw DomainError("build_steepest: tail leaves the analyticity strip");

  SteepestPathSpec spec;
  spec.z = z;
  spec.gamma = gamma;
  spec.nu = nu;
  spec.side = side;
  spec.delta = delta;
  spec.t0 = t0;
  spec.Theta0 = Theta0;

  double sgn = (side == Side::minus) ? -1.0 : 1.0;
  ContourPath path;
  ContourPiece curve;
  // Parametrized by x = Re zeta running outward from 0 to sgn*t0.
  curve.k = [gamma, nu, side](double x) {
    return Complex(x, curve_y_impl(Complex(x, 0.0), gamma, nu, side).real());
  };
  curve.dk = [gamma, nu, side](double x) {
    // complex-step derivative of y(x)
    const double h = 1e-20;
    double dy = curve_y_impl(Complex(x, h), gamma, nu, side).imag() / h;
    return Complex(1.0, dy);
  };
  if (side == Side::minus) {
    curve.t_lo = -t0;
    curve.t_hi = 0.0;
  } else {
    curve.t_lo = 0.0;
    curve.t_hi = t0;
  }
  // Orient outward: minus side runs 0 -> -t0.
  ContourPath curve_path;
  curve_path.append(curve);
  if (side == Side::minus) curve_path.orientation = -1;

  ContourPiece tail;
  tail.k = [Theta0, sgn](double t) { return Complex(sgn * t, -Theta0); };
  tail.dk = [sgn](double) { return Complex(sgn, 0.0); };
  tail.t_lo = t0;
  tail.t_hi = T;
  ContourPath tail_path;
  tail_path.append(tail);

  // Flatten into one outward-oriented path: curve piece then tail piece.
  // For the minus side the curve parametrization runs -t0 -> 0, so rebuild it
  // reversed as an explicit piece to keep orientation uniform (+1).
  if (side == Side::minus) {
    ContourPiece rev;
    rev.k = [gamma, nu, side](double t) {
      double x = -t;
      return Complex(x, curve_y_impl(Complex(x, 0.0), gamma, nu, side).real());
    };
    rev.dk = [gamma, nu, side](double t) {
      const double h = 1e-20;
      double x = -t;
      double dy = curve_y_impl(Complex(x, h), gamma, nu, side).imag() / h;
      return Complex(-1.0, -dy);
    };
    rev.t_lo = 0.0;
    rev.t_hi = t0;
    path.append(rev);
  } else {
    path.append(curve);
  }
  path.append(tail);
  path.truncation = T;
  return {spec, path};
}

std::pair<SteepestPathSpec, ContourPath> build_steepest(
    Complex z, Side side, double delta, const RegionM& region, double T) {
  Complex w = principal_sqrt(z);
  bool real_axis_case = std::abs(w.imag()) < 1e-14 && w.real() >= region.eps2 &&
                        w.real() <= region.a;
  if (!region.contains(z) && !real_axis_case)
    throw DomainError("build_steepest: z outside region M");
  return build_steepest_raw(z, side, delta, steepest_default_eps(region), T,
                            region.k0);
}

ContourPath build_semicircle(double center, double radius, Half half,
                             Orient orient) {
  if (!(radius > 0.0)) throw DomainError("semicircle: radius must be > 0");
  double th0, th1;
  if (half == Half::upper) {
    if (orient == Orient::cw) {
      th0 = M_PI;
      th1 = 0.0;
    } else {
      th0 = 0.0;
      th1 = M_PI;
    }
  } else {
    if (orient == Orient::ccw) {
      th0 = M_PI;
      th1 = 2.0 * M_PI;
    } else {
      th0 = 2.0 * M_PI;
      th1 = M_PI;
    }
  }
  ContourPiece arc;
  arc.k = [center, radius, th0, th1](double t) {
    double th = th0 + (th1 - th0) * t;
    return Complex(center + radius * std::cos(th), radius * std::sin(th));
  };
  arc.dk = [radius, th0, th1](double t) {
    double th = th0 + (th1 - th0) * t;
    return (th1 - th0) * radius * Complex(-std::sin(th), std::cos(th));
  };
  arc.t_lo = 0.0;
  arc.t_hi = 1.0;
  ContourPath path;
  path.append(arc);
  return path;
}

ContourPath build_cross_arc(Complex w, double h) {
  ContourPiece arc;
  // u = pi - t so the path runs -w -> +w (through i*h) as t goes 0 -> pi.
  arc.k = [w, h](double t) {
    return -w * std::cos(t) + Complex(0.0, h * std::sin(t));
  };
  arc.dk = [w, h](double t) {
    return w * std::sin(t) + Complex(0.0, h * std::cos(t));
  };
  arc.t_lo = 0.0;
  arc.t_hi = M_PI;
  ContourPath path;
  path.append(arc);
  return path;
}

ContourPath build_horizontal_line(double h, double T) {
  ContourPiece line;
  line.k = [h](double t) { return Complex(t, h); };
  line.dk = [](double) { return Complex(1.0, 0.0); };
  line.t_lo = -T;
  line.t_hi = T;
  ContourPath path;
  path.append(line);
  path.truncation = T;
  return path;
}

RegionCheck validate_in_region(const ContourPath& path, RegionM::Kind kind,
                               double k0_or_theta0, int samples_per_piece) {
  RegionCheck res;
  for (const auto& p : path.pieces) {
    for (int i = 0; i <= samples_per_piece; ++i) {
      double t = p.t_lo + (p.t_hi - p.t_lo) * i / samples_per_piece;
      Complex k = p.k(t);
      bool ok;
      if (kind == RegionM::strip) {
        ok = std::abs(k.imag()) < k0_or_theta0;
      } else {
        double a1 = std::abs(std::arg(k));
        double a2 = std::abs(std::arg(-k));
        ok = std::min(a1, a2) < k0_or_theta0 || std::abs(k) == 0.0;
      }
      if (!ok) {
        res.ok = false;
        res.first_violation = k;
        return res;
      }
    }
  }
  return res;
}

void dump_csv(const ContourPath& path, std::ostream& os,
              int samples_per_piece) {
  os << "t,re_k,im_k\n";
  char buf[96];
  for (const auto& p : path.pieces) {
    for (int i = 0; i <= samples_per_piece; ++i) {
      double t = p.t_lo + (p.t_hi - p.t_lo) * i / samples_per_piece;
      Complex k = p.k(t);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, k.real(),
                    k.imag());
      os << buf;
    }
  }
}

}  // namespace starkres
