#include "starkres/resolvent.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <unordered_map>

#include "starkres/special.hpp"

namespace starkres {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

using Amp = std::function<Complex(Complex)>;

RegionM region_of(const Profile& p) {
  RegionM r;
  r.kind = p.region;
  r.k0 = p.k0;
  if (p.theta0 > 0.0) r.theta0 = p.theta0;
  return r;
}

ContourPiece real_piece(double a, double b) {
  ContourPiece pc;
  pc.k = [](double t) { return Complex(t, 0.0); };
  pc.dk = [](double) { return Complex(1.0, 0.0); };
  pc.t_lo = a;
  pc.t_hi = b;
  return pc;
}

ContourPath shifted(const ContourPath& path, Complex c) {
  ContourPath r = path;
  for (auto& pc : r.pieces) {
    auto k = pc.k;
    pc.k = [k, c](double t) { return k(t) + c; };
  }
  return r;
}

ContourPath single(const ContourPiece& pc) {
  ContourPath p;
  p.append(pc);
  return p;
}

// log |e^{-i(k^3/3 - kX)/f}| = Im(k^3/3 - kX)/f.
double exp_logmag(Complex k, Complex X, double inv_f) {
  return (k * k * k / 3.0 - k * X).imag() * inv_f;
}

double amp_logmag(const Amp& amp, Complex k) {
  double m = std::abs(amp(k));
  return m > 0.0 ? std::log(m) : -1e30;
}

// March t outward from t0 until logmag has dropped `drop` nats below its
// running maximum. Used to truncate infinite contour tails.
double march_cut(double t0, double step0, double drop,
                 const std::function<double(double)>& logmag, double tmax) {
  double t = t0, step = step0;
  double ref = logmag(t0);
  while (t < tmax) {
    t += step;
    step *= 1.3;
    double v = logmag(t);
    if (v > ref) ref = v;
    if (v < ref - drop) break;
  }
  return t;
}

ScaledComplex osc_int(const ContourPath& path, Complex X, const Amp& amp,
                      double inv_f, double rel_tol, const char* what,
                      long* evals = nullptr) {
  QuadResult q = integrate_oscillatory(path, CubicPhase{X}, amp, inv_f,
                                       rel_tol);
  require_converged(q, what);
  if (evals) *evals += q.evaluations;
  return q.value;
}

// Core transform Int e^{-i(k^3/3 - kX)/f} amp(k) dk with the contour picked
// from the saddle geometry (saddles at +-sqrt(X)).
ScaledComplex airy_core(Complex X, double f, const Amp& amp, double k0,
                        double rel_tol, double alpha) {
  double inv_f = 1.0 / f;

  if (alpha > 0.0) {
    // Rectangular descent contour: real segment [-N, N] with tails at -i
    // alpha. Valid for any X; exposed for contour-independence checks.
    double aw = std::abs(principal_sqrt(X));
    double N = std::max(2.0, 1.5 * aw + 1.0);
    auto lmr = [&](double t) {
      Complex k(t, -alpha);
      return exp_logmag(k, X, inv_f) + amp_logmag(amp, k);
    };
    auto lml = [&](double t) {
      Complex k(-t, -alpha);
      return exp_logmag(k, X, inv_f) + amp_logmag(amp, k);
    };
    double T = std::max(march_cut(N, 0.5, 45.0, lmr, 1e4),
                        march_cut(N, 0.5, 45.0, lml, 1e4));
    ContourPath path = build_gamma_alpha(alpha, N, T, k0);
    return osc_int(path, X, amp, inv_f, rel_tol, "airy transform (rect)");
  }

  if (X.imag() > 0.0) {
    // Reflect into the computable half: conj twice with the mirrored
    // amplitude k -> conj(amp(-conj k)).
    Amp ra = [&amp](Complex k) { return std::conj(amp(-std::conj(k))); };
    return airy_core(std::conj(X), f, ra, k0, rel_tol, 0.0).conj();
  }

  Complex w = principal_sqrt(X);

  if (std::abs(w) < 0.04) {
    // Saddles collide at 0: plain V contour.
    double av = std::min(0.5, 0.4 * k0);
    auto lm = [&](double t) {
      Complex k(t, -av);
      return exp_logmag(k, X, inv_f) + amp_logmag(amp, k);
    };
    auto lml = [&](double t) {
      Complex k(-t, -av);
      return exp_logmag(k, X, inv_f) + amp_logmag(amp, k);
    };
    double T = std::max({1.5, march_cut(1.0, 0.5, 45.0, lm, 1e4),
                         march_cut(1.0, 0.5, 45.0, lml, 1e4)});
    return osc_int(build_C_pm(av, T), X, amp, inv_f, rel_tol,
                   "airy transform (vee)");
  }

  if (w.real() >= 0.04) {
    // Saddle route: descent curve into -w, cross arc -w -> +w through the
    // upper midpoint, descent curve out of +w.
    double gamma = w.real();
    double delta = gamma / 10.0;
    const double eps_int = 0.25;
    auto build_side = [&](Side side, Complex saddle) {
      auto pre = build_steepest_raw(X, side, delta, eps_int, 1.0e3, k0);
      double t0 = pre.first.t0, Th = pre.first.Theta0;
      double sgn = (side == Side::minus) ? -1.0 : 1.0;
      auto lm = [&](double t) {
        Complex k = Complex(sgn * t, -Th) + saddle;
        return exp_logmag(k, X, inv_f) + amp_logmag(amp, k);
      };
      double T = march_cut(t0, 0.25, 45.0, lm, 2e3);
      auto built = build_steepest_raw(X, side, delta, eps_int, T, k0);
      return shifted(built.second, saddle);
    };
    ContourPath pm = build_side(Side::minus, -w);
    ContourPath pp = build_side(Side::plus, w);
    double h = std::min(std::abs(w), 0.8 * k0);
    ContourPath arc = build_cross_arc(w, h);
    ScaledComplex im = osc_int(pm, X, amp, inv_f, rel_tol,
                               "airy transform (left descent)");
    ScaledComplex ia = osc_int(arc, X, amp, inv_f, rel_tol,
                               "airy transform (cross arc)");
    ScaledComplex ip = osc_int(pp, X, amp, inv_f, rel_tol,
                               "airy transform (right descent)");
    // pm is oriented outward (away from -w); the full left-to-right contour
    // traverses it in reverse.
    return -im + ia + ip;
  }

  // Saddles hug the imaginary axis (X on or near the negative real axis):
  // horizontal line through the lower saddle region.
  double h = std::min(std::abs(w), 0.8 * k0);
  auto lmr = [&](double t) {
    Complex k(t, -h);
    return exp_logmag(k, X, inv_f) + amp_logmag(amp, k);
  };
  auto lml = [&](double t) {
    Complex k(-t, -h);
    return exp_logmag(k, X, inv_f) + amp_logmag(amp, k);
  };
  double start = std::max(1.0, std::abs(w));
  double Tr = march_cut(start, 0.5, 45.0, lmr, 1e4);
  double Tl = march_cut(start, 0.5, 45.0, lml, 1e4);
  ContourPiece line;
  line.k = [h](double t) { return Complex(t, -h); };
  line.dk = [](double) { return Complex(1.0, 0.0); };
  line.t_lo = -Tl;
  line.t_hi = Tr;
  return osc_int(single(line), X, amp, inv_f, rel_tol,
                 "airy transform (line)");
}

struct PsiCache {
  std::mutex m;
  std::map<std::tuple<std::uint64_t, std::uint64_t, unsigned long long, bool>,
           std::unordered_map<std::uint64_t, ScaledComplex>>
      data;
};

PsiCache& psi_cache() {
  static PsiCache c;
  return c;
}

ScaledComplex psi_eval(Complex x, double f, const Profile& p, const Amp& amp,
                       bool reflected, const EvalBudget& b) {
  if (!(f > 0.0)) throw DomainError("psi_f: f must be > 0");
  bool cacheable = x.imag() == 0.0 && b.alpha == 0.0;
  std::tuple<std::uint64_t, std::uint64_t, unsigned long long, bool> key{
      std::bit_cast<std::uint64_t>(f), std::bit_cast<std::uint64_t>(b.rel_tol),
      p.id, reflected};
  std::uint64_t xbits = std::bit_cast<std::uint64_t>(x.real());
  if (cacheable) {
    std::lock_guard<std::mutex> lk(psi_cache().m);
    auto& slot = psi_cache().data[key];
    auto it = slot.find(xbits);
    if (it != slot.end()) return it->second;
  }
  ScaledComplex v =
      airy_core(x * f, f, amp, p.k0, b.rel_tol, b.alpha) * kInvSqrt2Pi;
  if (cacheable) {
    std::lock_guard<std::mutex> lk(psi_cache().m);
    psi_cache().data[key][xbits] = v;
  }
  return v;
}

// Round a truncation bound up to a power of two so the x-grid (and with it
// the psi_f cache hits) is shared across z at fixed f.
double quantize_up(double v) {
  return std::exp2(std::ceil(std::log2(std::max(v, 4.0))));
}

// Quarter-wavelength cap on the |psi_f|^2 oscillation (local frequency
// 2 sqrt(x f) for x > 0); independent of z by design.
std::function<double(Complex)> x_grid_cap(double f) {
  return [f](Complex k) {
    double x = k.real();
    if (x <= 0.0) return 1e9;
    return M_PI / (4.0 * std::sqrt(std::max(x * f, 1e-6)));
  };
}

// Marches the truncation of the |psi_f|^2/(x - pole) integrand; must pass
// the pole neighbourhood before the decay test may stop it.
std::pair<double, double> x_truncation(
    double f, Complex pole, double floor_dist,
    const std::function<double(double)>& psi_log) {
  auto q = [&](double x) {
    double d = std::max(std::abs(Complex(x, 0.0) - pole), floor_dist);
    return 2.0 * psi_log(x) - std::log(d);
  };
  auto sweep = [&](double dir, double reach) {
    double peak = q(0.0);
    double x = 0.0, step = 1.0;
    int below = 0;
    while (std::abs(x) < 1e7) {
      x += dir * step;
      step *= 1.15;
      double v = q(x);
      if (v > peak) peak = v;
      if (dir * x >= reach) {
        below = (v < peak - 37.0) ? below + 1 : 0;
        if (below >= 2) break;
      }
    }
    return std::abs(x);
  };
  double reach_r = std::max(4.0, pole.real() + 8.0);
  double reach_l = std::max(4.0, 8.0 - pole.real());
  double R = quantize_up(sweep(+1.0, reach_r));
  double L = quantize_up(sweep(-1.0, reach_l));
  return {-L, R};
}

// The small-f forms are analytic across the real axis, and on the second
// sheet they stay the right comparison object in a thin band above it (the
// exact element would jump to the first-sheet value there and break the
// continuity that root finding near the axis relies on). Accept that band
// in addition to the validity region proper.
bool in_expansion_domain(const RegionM& region, Complex z) {
  if (z.imag() < 0.0) return region.contains(z);
  if (z.imag() > 0.02) return false;
  return region.contains(Complex(z.real(), -1e-9));
}

ScaledComplex resolvent_for_sheet(Complex z, double f, const Profile& p,
                                  const EvalBudget& b) {
  Method m = b.method;
  if (m == Method::auto_pick)
    m = (f >= b.auto_exact_threshold) ? Method::exact : Method::expansion24;
  if (m == Method::expansion24 || m == Method::leading26) {
    if (!in_expansion_domain(region_of(p), z)) m = Method::exact;
  }
  switch (m) {
    case Method::expansion24:
      return resolvent_expansion24(z, f, p, b);
    case Method::leading26:
      return resolvent_leading26(z, f, p);
    default:
      return resolvent_continued(z, f, p, b);
  }
}

}  // namespace

ScaledComplex psi_f(Complex x, double f, const Profile& p,
                    const EvalBudget& budget) {
  return psi_eval(x, f, p, p.eval, false, budget);
}

ScaledComplex psi_f_reflected(Complex x, double f, const Profile& p,
                              const EvalBudget& budget) {
  Amp amp = [&p](Complex k) { return p.eval_conj(-k); };
  return psi_eval(x, f, p, amp, true, budget);
}

void clear_psi_cache() {
  std::lock_guard<std::mutex> lk(psi_cache().m);
  psi_cache().data.clear();
}

ScaledComplex resolvent_direct(Complex z, double f, const Profile& p,
                               const EvalBudget& budget,
                               bool* ill_conditioned) {
  if (!(f > 0.0)) throw DomainError("resolvent_direct: f must be > 0");
  if (z.imag() == 0.0)
    throw DomainError("resolvent_direct: Im z must be nonzero");
  if (ill_conditioned) *ill_conditioned = std::abs(z.imag()) / f < 1e-3;

  Complex pole = z / f;
  auto psi_log = [&](double x) {
    return psi_f(Complex(x, 0.0), f, p, budget).abs_log();
  };
  auto [L, R] = x_truncation(f, pole, std::abs(pole.imag()), psi_log);

  ContourPath path;
  path.append(real_piece(L, 0.0));
  path.append(real_piece(0.0, R));
  IntegrateOptions opts;
  opts.rel_tol = budget.rel_tol;
  opts.max_panels = budget.max_evals / 15;
  opts.width_cap = x_grid_cap(f);
  ScaledIntegrand g = [&](Complex k) {
    double x = k.real();
    ScaledComplex s = psi_f(Complex(x, 0.0), f, p, budget);
    return s.conj() * s * (1.0 / (f * (Complex(x, 0.0) - pole)));
  };
  QuadResult q = integrate(path, g, opts);
  require_converged(q, "resolvent x-integral");
  return q.value;
}

ScaledComplex resolvent_continued(Complex z, double f, const Profile& p,
                                  const EvalBudget& budget) {
  if (z.imag() > 0.0) return resolvent_direct(z, f, p, budget);
  ScaledComplex G = psi_f_reflected(z / f, f, p, budget);
  ScaledComplex P = psi_f(z / f, f, p, budget);
  if (z.imag() < 0.0)
    return resolvent_direct(z, f, p, budget) +
           Complex(0.0, 2.0 * M_PI / f) * G * P;

  // Real axis: principal value plus half the residue. Valid for any real z
  // at f > 0 since psi_f is entire.
  double s = z.real() / f;
  auto psi_log = [&](double x) {
    return psi_f(Complex(x, 0.0), f, p, budget).abs_log();
  };
  double d = 1.0;
  auto [L, R] = x_truncation(f, Complex(s, 0.0), d, psi_log);
  auto gval = [&](double x) {
    ScaledComplex t = psi_f(Complex(x, 0.0), f, p, budget);
    return std::exp(2.0 * t.abs_log());
  };
  double gs = gval(s);

  IntegrateOptions opts;
  opts.rel_tol = budget.rel_tol;
  opts.width_cap = x_grid_cap(f);

  ContourPath win;
  win.append(real_piece(s - d, s));
  win.append(real_piece(s, s + d));
  QuadResult qw = integrate(
      win,
      [&](Complex k) {
        double x = k.real();
        return ScaledComplex::from(Complex((gval(x) - gs) / (x - s), 0.0));
      },
      opts);
  require_converged(qw, "resolvent principal-value window");

  ContourPath outer;
  outer.append(real_piece(L, s - d));
  outer.append(real_piece(s + d, R));
  QuadResult qo = integrate(
      outer,
      [&](Complex k) {
        double x = k.real();
        return ScaledComplex::from(Complex(gval(x) / (x - s), 0.0));
      },
      opts);
  require_converged(qo, "resolvent principal-value tails");

  return (qw.value + qo.value) * (1.0 / f) + Complex(0.0, M_PI / f) * G * P;
}

Complex resolvent_f0_plain(Complex z, const Profile& p, double rel_tol) {
  if (z.imag() == 0.0 && z.real() >= 0.0)
    throw DomainError("resolvent_f0_plain: z on the essential spectrum");
  auto prod = [&](double k) {
    Complex kk(k, 0.0);
    return p.eval(kk) * p.eval_conj(kk);
  };
  auto lg = [&](double k) {
    double m = std::abs(prod(k));
    return m > 0.0 ? std::log(m) : -1e30;
  };
  double T = std::max(march_cut(1.0, 0.5, 45.0, lg, 1e4),
                      march_cut(1.0, 0.5, 45.0,
                                [&](double t) { return lg(-t); }, 1e4));
  Complex w = std::sqrt(z);
  ContourPath path;
  path.append(real_piece(-T, 0.0));
  path.append(real_piece(0.0, T));
  IntegrateOptions opts;
  opts.rel_tol = rel_tol;
  opts.width_cap = [w](Complex k) {
    double dist = std::min(std::abs(k - w), std::abs(k + w));
    return std::max(0.5 * dist, 1e-4);
  };
  QuadResult q = integrate(
      path,
      [&](Complex k) {
        double x = k.real();
        return ScaledComplex::from(prod(x) / (x * x - z));
      },
      opts);
  require_converged(q, "f=0 resolvent integral");
  return q.value.to_complex();
}

Complex resolvent_f0_quadrature(Complex z, const Profile& p,
                                const EvalBudget& budget) {
  if (z.imag() == 0.0 && z.real() <= 0.0)
    throw DomainError("f=0 continuation: z must avoid (-inf, 0]");
  Complex w = principal_sqrt(z);
  if (p.region == RegionM::strip && !(w.imag() > -p.k0))
    throw DomainError("f=0 continuation: z below the analyticity strip");
  if (z.imag() > 0.0) return resolvent_f0_plain(z, p, budget.rel_tol);
  if (z.imag() < 0.0) {
    Complex residue = (Complex(0.0, M_PI) / w) *
                      (p.eval(w) * p.eval_conj(w) +
                       p.eval(-w) * p.eval_conj(-w));
    return resolvent_f0_plain(z, p, budget.rel_tol) + residue;
  }
  // Real axis: symmetric-limit principal value plus half the residue.
  double s = w.real();
  auto gg = [&](double k) {
    Complex kk(k, 0.0);
    return std::real(p.eval(kk) * p.eval_conj(kk));
  };
  double pv = (principal_value(gg, s, budget.rel_tol) +
               principal_value([&](double k) { return gg(-k); }, s,
                               budget.rel_tol)) /
              (2.0 * s);
  Complex half_res = (Complex(0.0, M_PI / (2.0 * s))) *
                     (p.eval(Complex(s, 0.0)) * p.eval_conj(Complex(s, 0.0)) +
                      p.eval(Complex(-s, 0.0)) *
                          p.eval_conj(Complex(-s, 0.0)));
  return pv + half_res;
}

Complex resolvent_f0_continued(Complex z, const Profile& p,
                               const EvalBudget& budget) {
  if (z.imag() == 0.0 && z.real() <= 0.0)
    throw DomainError("f=0 continuation: z must avoid (-inf, 0]");
  if (p.is_gaussian) {
    // mu^2 i pi e^{-z} (1 + erf(i sqrt z)) / sqrt z, entire off the cut.
    Complex w = principal_sqrt(z);
    ScaledComplex e = erf_complex_scaled(Complex(0.0, 1.0) * w);
    ScaledComplex sum = scaled_add(ScaledComplex::from(Complex(1.0, 0.0)), e);
    ScaledComplex r = ScaledComplex::exp(-z) * sum *
                      (Complex(0.0, M_PI) * p.mu * p.mu / w);
    return r.to_complex();
  }
  return resolvent_f0_quadrature(z, p, budget);
}

ScaledComplex resolvent_expansion24(Complex z, double f, const Profile& p,
                                    const EvalBudget& budget) {
  RegionM region = region_of(p);
  if (!in_expansion_domain(region, z))
    throw DomainError("expansion24: z outside the validity region");
  double inv_f = 1.0 / f;
  Complex w = principal_sqrt(z);
  double delta = w.real() / 10.0;
  double eps = steepest_default_eps(region);
  double rel_tol = budget.rel_tol;

  Amp amp_b = p.eval;
  Amp amp_a = [&p](Complex k) { return p.eval_conj(-k); };

  auto build_side = [&](Side side, Complex saddle, const Amp& amp) {
    auto pre = build_steepest_raw(z, side, delta, eps, 1.0e3, p.k0);
    double t0 = pre.first.t0, Th = pre.first.Theta0;
    double sgn = (side == Side::minus) ? -1.0 : 1.0;
    auto lm = [&](double t) {
      Complex k = Complex(sgn * t, -Th) + saddle;
      return exp_logmag(k, z, inv_f) + amp_logmag(amp, k);
    };
    double T = march_cut(t0, 0.25, 45.0, lm, 2e3);
    auto built = build_steepest_raw(z, side, delta, eps, T, p.k0);
    return shifted(built.second, saddle);
  };

  auto gamma_prime = [&](const Amp& amp) {
    ContourPath pm = build_side(Side::minus, -w, amp);
    ContourPath pp = build_side(Side::plus, w, amp);
    ScaledComplex im =
        osc_int(pm, z, amp, inv_f, rel_tol, "expansion24 left descent");
    ScaledComplex s1 = osc_int(single(segment(-w, Complex(0.0, 0.0))), z, amp,
                               inv_f, rel_tol, "expansion24 left segment");
    ScaledComplex s2 = osc_int(single(segment(Complex(0.0, 0.0), w)), z, amp,
                               inv_f, rel_tol, "expansion24 right segment");
    ScaledComplex ip =
        osc_int(pp, z, amp, inv_f, rel_tol, "expansion24 right descent");
    return -im + s1 + s2 + ip;
  };

  auto neg_axis = [&](const Amp& amp) {
    double start = std::max(2.0, 2.0 * std::abs(w));
    auto lm = [&](double t) {
      Complex k(-t, 0.0);
      return exp_logmag(k, z, inv_f) + amp_logmag(amp, k);
    };
    double T = march_cut(start, 0.5, 45.0, lm, 1e4);
    return osc_int(single(real_piece(-T, 0.0)), z, amp, inv_f, rel_tol,
                   "expansion24 negative-axis integral");
  };

  ScaledComplex A = gamma_prime(amp_a);
  ScaledComplex B = gamma_prime(amp_b);
  ScaledComplex C = neg_axis(amp_a);
  ScaledComplex D = neg_axis(amp_b);

  Complex i_over_f(0.0, inv_f);
  return i_over_f * (A * B) - i_over_f * (C * D) +
         (C * p.boundary_right + D * std::conj(p.boundary_left)) * (1.0 / z) +
         ScaledComplex::from(resolvent_f0_plain(z, p, budget.rel_tol));
}

ScaledComplex resolvent_leading26(Complex z, double f, const Profile& p) {
  RegionM region = region_of(p);
  if (!in_expansion_domain(region, z))
    throw DomainError("leading26: z outside the validity region");
  Complex w = principal_sqrt(z);
  ScaledComplex e4 =
      ScaledComplex::exp(Complex(0.0, 4.0 / (3.0 * f)) * z * w);
  ScaledComplex lead =
      e4 * (M_PI / w * p.eval(w) * p.eval_conj(-w));
  // The residue term plus the plain integral is exactly the continued f = 0
  // element, which is closed-form for the Gaussian.
  EvalBudget f0;
  f0.rel_tol = 1e-11;
  return lead + ScaledComplex::from(resolvent_f0_continued(z, p, f0));
}

SteepestIntegrals steepest_integrals(Complex z, double f, const Profile& p,
                                     double rel_tol) {
  RegionM region = region_of(p);
  if (!region.contains(z))
    throw DomainError("steepest_integrals: z outside the validity region");
  double inv_f = 1.0 / f;
  Complex w = principal_sqrt(z);
  double delta = w.real() / 10.0;
  double eps = steepest_default_eps(region);

  auto build_side = [&](Side side, Complex saddle) {
    auto pre = build_steepest_raw(z, side, delta, eps, 1.0e3, p.k0);
    double t0 = pre.first.t0, Th = pre.first.Theta0;
    double sgn = (side == Side::minus) ? -1.0 : 1.0;
    auto lm = [&](double t) {
      Complex k = Complex(sgn * t, -Th) + saddle;
      return exp_logmag(k, z, inv_f) + amp_logmag(p.eval, k);
    };
    double T = march_cut(t0, 0.25, 45.0, lm, 2e3);
    auto built = build_steepest_raw(z, side, delta, eps, T, p.k0);
    return shifted(built.second, saddle);
  };
  ContourPath pm = build_side(Side::minus, -w);
  ContourPath pp = build_side(Side::plus, w);

  SteepestIntegrals r;
  r.I1 = osc_int(single(segment(Complex(0.0, 0.0), w)), z, p.eval, inv_f,
                 rel_tol, "I1");
  r.I2 = osc_int(single(pp.pieces[0]), z, p.eval, inv_f, rel_tol, "I2");
  r.I3 = osc_int(single(pp.pieces[1]), z, p.eval, inv_f, rel_tol, "I3");
  r.I4 = osc_int(single(segment(-w, Complex(0.0, 0.0))), z, p.eval, inv_f,
                 rel_tol, "I4");
  // The stored left pieces run outward from the saddle; I5 is the inward
  // traversal, I6 the outward tail itself.
  r.I5 = -osc_int(single(pm.pieces[0]), z, p.eval, inv_f, rel_tol, "I5");
  r.I6 = osc_int(single(pm.pieces[1]), z, p.eval, inv_f, rel_tol, "I6");

  double av = std::min(0.5, 0.4 * p.k0);
  auto lmc = [&](double sgn) {
    return [&, sgn](double t) {
      Complex k(sgn * t, -av);
      return exp_logmag(k, z, inv_f) + amp_logmag(p.eval, k);
    };
  };
  double Tp = std::max(1.5, march_cut(1.0, 0.5, 45.0, lmc(+1.0), 1e4));
  double Tm = std::max(1.5, march_cut(1.0, 0.5, 45.0, lmc(-1.0), 1e4));
  // The straight half-contours cancel from e^{c/f} peaks down to an O(1)
  // value, so their achievable relative accuracy is floored near
  // eps * e^{peak/f} / |value| in double precision. Loosen stepwise instead
  // of failing: the point of c_plus/c_minus is a cross-check at whatever
  // accuracy the cancellation leaves available.
  auto half = [&](Side side, double T, const char* what) {
    double tol = rel_tol;
    for (;;) {
      try {
        return osc_int(build_C_half(av, side, T), z, p.eval, inv_f, tol,
                       what);
      } catch (const NonConvergence&) {
        if (tol >= 1e-4) throw;
        tol *= 100.0;
      }
    }
  };
  r.c_plus = half(Side::plus, Tp, "plus half-contour");
  r.c_minus = half(Side::minus, Tm, "minus half-contour");
  return r;
}

ScaledComplex F_model1(Complex z, double f, const Profile& p,
                       const EvalBudget& budget) {
  if (f == 0.0)
    return ScaledComplex::from(1.0 - z - resolvent_f0_continued(z, p, budget));
  return ScaledComplex::from(1.0 - z) - resolvent_for_sheet(z, f, p, budget);
}

ScaledComplex F_model2(Complex z, double f, const ModelIIProfile& m,
                       const EvalBudget& budget) {
  if (f == 0.0) {
    Complex r0 = resolvent_f0_continued(z, m.base, budget);
    Complex e2(m.epsilon * m.epsilon, 0.0);
    Complex num = (z - 1.0) * m.base_l2_sq + (e2 + (z - 1.0) * (z - 1.0)) * r0;
    return ScaledComplex::from(num / (-m.quad_form));
  }
  return resolvent_for_sheet(z, f, m.profile, budget) -
         ScaledComplex::from(Complex(1.0, 0.0));
}

ScaledComplex F_model2(Complex z, double f, double epsilon,
                       const Profile& psi0, const EvalBudget& budget) {
  return F_model2(z, f, make_model2(psi0, epsilon), budget);
}

double bound_state_condition(double lambda, const Profile& p) {
  if (!(lambda < 0.0))
    throw DomainError("bound_state_condition: lambda must be < 0");
  double al = std::abs(lambda);
  auto gg = [&](double k) {
    return std::norm(p.eval(Complex(k, 0.0))) / ((k * k + al) * (1.0 + al));
  };
  auto lg = [&](double t) {
    double m = gg(t);
    return m > 0.0 ? std::log(m) : -1e30;
  };
  double T = std::max(march_cut(1.0, 0.5, 45.0, lg, 1e4),
                      march_cut(1.0, 0.5, 45.0,
                                [&](double t) { return lg(-t); }, 1e4));
  ContourPath path;
  path.append(real_piece(-T, 0.0));
  path.append(real_piece(0.0, T));
  QuadResult q = integrate(
      path,
      [&](Complex k) {
        return ScaledComplex::from(Complex(gg(k.real()), 0.0));
      },
      1e-11);
  require_converged(q, "bound-state integral");
  return q.value.to_complex().real();
}

}  // namespace starkres
