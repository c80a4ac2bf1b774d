#ifndef STARKRES_CONTOUR_HPP
#define STARKRES_CONTOUR_HPP

#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "starkres/scaled_complex.hpp"

namespace starkres {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : Error {
  using Error::Error;
};

struct ContourPiece {
  std::function<Complex(double)> k;   // position
  std::function<Complex(double)> dk;  // derivative dk/dt
  double t_lo = 0.0, t_hi = 1.0;
  bool smooth = true;
};

struct ContourPath {
  std::vector<ContourPiece> pieces;
  int orientation = +1;  // -1 means traverse pieces in reverse
  std::optional<double> truncation;  // where an infinite tail was cut

  void append(ContourPiece p) { pieces.push_back(std::move(p)); }
  void append(const ContourPath& other) {
    for (const auto& p : other.pieces) pieces.push_back(p);
  }
  ContourPath reversed() const {
    ContourPath r = *this;
    r.orientation = -orientation;
    return r;
  }
  /// Largest endpoint mismatch between consecutive pieces.
  double continuity_defect() const;
  Complex start() const;
  Complex end() const;
};

/// Straight segment from a to b on t in [0,1].
ContourPiece segment(Complex a, Complex b);

enum class Side { minus, plus };
enum class Half { upper, lower };
enum class Orient { cw, ccw };

struct SteepestPathSpec {
  Complex z;
  double gamma = 0.0;   // Re sqrt(z)
  double nu = 0.0;      // -Im sqrt(z) >= 0
  Side side = Side::minus;
  double delta = 0.0;   // cap on |Re zeta|
  double t0 = 0.0;
  double Theta0 = 0.0;
};

struct RegionM {
  double eps1 = 0.05, eps2 = 0.05, eps3 = 0.05;
  double a = 1.5;
  enum Kind { strip, sector } kind = strip;
  double k0 = 4.0;
  double theta0 = M_PI / 3.0;

  bool contains(Complex z) const;
};

/// Five-piece path (-T,-N)-ia, riser at -N, real (-N,N), drop at N, (N,T)-ia,
/// oriented left to right; T truncates the infinite tails.
ContourPath build_gamma_alpha(double alpha, double N, double T,
                              double analyticity_margin = 4.0);

/// C_- u C_+ through 0: k(t) = (sgn t - ia)|t| for |t|<=1, t - ia beyond,
/// truncated at |t| = T.
ContourPath build_C_pm(double alpha, double T);
/// One half: side=minus gives t in [-T,0], plus gives [0,T].
ContourPath build_C_half(double alpha, Side side, double T);

/// Exact steepest-descent curve (in zeta coordinates, saddle at zeta = 0)
/// plus its horizontal tail at depth Theta0, truncated at |Re zeta| = T.
/// Oriented outward: from zeta = 0 to -/+T - i Theta0.
/// eps drives the t0/Theta0 two-case selection; pass RegionM defaults via
/// steepest_default_eps. Throws DomainError if the tail leaves the strip.
std::pair<SteepestPathSpec, ContourPath> build_steepest_raw(
    Complex z, Side side, double delta, double eps, double T, double k0);

/// Spec'd entry point: requires z in RegionM (or nu == 0) and uses the
/// region's default eps.
std::pair<SteepestPathSpec, ContourPath> build_steepest(
    Complex z, Side side, double delta, const RegionM& region = RegionM{},
    double T = 8.0);

double steepest_default_eps(const RegionM& region);

/// The exact curve ordinate y(x) (x = Re zeta; x <= 0 for minus, >= 0 for
/// plus). Exposed for tests of the defining Re(.)=0 condition.
double steepest_curve_y(double x, double gamma, double nu, Side side);

ContourPath build_semicircle(double center, double radius, Half half,
                             Orient orient);

/// Elliptical cross arc between the saddles -w and +w through i*h,
/// k(u) = w cos u + i h sin u, u from pi to 0.
ContourPath build_cross_arc(Complex w, double h);

/// Horizontal line at height h, from -T to T (in k).
ContourPath build_horizontal_line(double h, double T);

struct RegionCheck {
  bool ok = true;
  Complex first_violation{0.0, 0.0};
};

/// True iff every sampled point (>= 64 per piece) lies inside the strip
/// |Im k| < k0 (kind==strip) or the sector |arg(+-k)| < theta0.
RegionCheck validate_in_region(const ContourPath& path, RegionM::Kind kind,
                               double k0_or_theta0,
                               int samples_per_piece = 64);

/// Debug dump: one line "t,Re k,Im k" per sample.
void dump_csv(const ContourPath& path, std::ostream& os,
              int samples_per_piece = 128);

}  // namespace starkres

#endif
