#include "starkres/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <optional>
#include <thread>

namespace starkres {

namespace {

double wrap_pi(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

struct BoundarySample {
  double arg;
  double abs_log;
};

struct SideSum {
  double delta = 0.0;
  double min_log = INFINITY;
  bool dip = false;  // a sample far below both neighbors: zero nearby
  bool depth_exhausted = false;
};

BoundarySample eval_bs(const Holomorphic& F, Complex z) {
  ScaledComplex v = F(z);
  return {v.arg(), v.abs_log()};
}

// Phase change from a to b, refined until each step is below pi/2.
void unwrap(const Holomorphic& F, Complex a, Complex b,
            const BoundarySample& va, const BoundarySample& vb, int depth,
            SideSum& out) {
  double d = wrap_pi(vb.arg - va.arg);
  if (std::abs(d) < M_PI / 2.0) {
    out.delta += d;
    return;
  }
  if (depth >= 30) {
    out.depth_exhausted = true;
    out.delta += d;
    return;
  }
  Complex m = 0.5 * (a + b);
  BoundarySample vm = eval_bs(F, m);
  out.min_log = std::min(out.min_log, vm.abs_log);
  // deep local dip between the bracketing samples: a zero sits nearby
  if (vm.abs_log < std::min(va.abs_log, vb.abs_log) - 34.0) out.dip = true;
  unwrap(F, a, m, va, vm, depth + 1, out);
  unwrap(F, m, b, vm, vb, depth + 1, out);
}

SideSum sum_side(const Holomorphic& F, Complex a, Complex b, int samples) {
  SideSum out;
  std::vector<BoundarySample> vs(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    double t = double(i) / samples;
    vs[i] = eval_bs(F, a + t * (b - a));
    out.min_log = std::min(out.min_log, vs[i].abs_log);
  }
  // The dip test is local on purpose: |F| may legitimately sweep a huge
  // range along a side (scaled exponentials), but smoothly; only a zero
  // close to the side pulls one sample far below both of its neighbors.
  for (int i = 1; i < samples; ++i)
    if (vs[i].abs_log <
        std::min(vs[i - 1].abs_log, vs[i + 1].abs_log) - 34.0)
      out.dip = true;
  for (int i = 0; i < samples; ++i) {
    double t0 = double(i) / samples, t1 = double(i + 1) / samples;
    unwrap(F, a + t0 * (b - a), a + t1 * (b - a), vs[i], vs[i + 1], 0, out);
  }
  return out;
}

int pick_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("STARKRES_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? (int)hc : 1;
}

}  // namespace

ResonanceRecord newton(const Holomorphic& F, Complex z0, double tol,
                       int max_iter) {
  Complex z = z0;
  ScaledComplex Fz = F(z);
  for (int it = 1; it <= max_iter; ++it) {
    if (Fz.is_zero()) {
      ResonanceRecord r;
      r.z = z;
      r.residual_log = -INFINITY;
      r.newton_iters = it;
      return r;
    }
    double h = std::max(1e-7, 1e-7 * std::abs(z));
    ScaledComplex dF = (F(z + h) - F(z - h)) * Complex(1.0 / (2.0 * h), 0.0);
    if (dF.is_zero())
      throw NoConvergence("newton: vanishing derivative estimate");
    Complex step = scaled_div(Fz, dF).to_complex();
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag()))
      throw NoConvergence("newton: non-finite step");

    double damp = 1.0;
    Complex zn = z;
    ScaledComplex Fn = Fz;
    bool moved = false;
    for (int d = 0; d < 14; ++d) {
      Complex cand = z - damp * step;
      ScaledComplex Fc;
      try {
        Fc = F(cand);
      } catch (const Error&) {
        damp *= 0.5;  // stepped outside the evaluable domain
        continue;
      }
      if (Fc.abs_log() < Fz.abs_log() || std::abs(damp * step) <= tol) {
        zn = cand;
        Fn = Fc;
        moved = true;
        break;
      }
      damp *= 0.5;
    }
    if (!moved)
      throw NoConvergence("newton: damping failed to reduce |F|");
    z = zn;
    Fz = Fn;
    if (std::abs(damp * step) <= tol) {
      ResonanceRecord r;
      r.z = z;
      r.residual_log = Fz.abs_log();
      r.newton_iters = it;
      return r;
    }
  }
  throw NoConvergence("newton: max_iter exceeded");
}

WindingReport winding_count(const Holomorphic& F, Rect rect,
                            int samples_per_side) {
  Rect r = rect;
  int samples = std::max(8, samples_per_side);
  std::string last_problem;
  for (int attempt = 0; attempt < 3; ++attempt) {
    Complex c0 = r.lo;
    Complex c1(r.hi.real(), r.lo.imag());
    Complex c2 = r.hi;
    Complex c3(r.lo.real(), r.hi.imag());
    bool boundary_zero = false;
    double last_w = 0.0;
    for (int retry = 0; retry < 3; ++retry) {
      std::future<SideSum> fs[4] = {
          std::async(std::launch::async, sum_side, std::cref(F), c0, c1,
                     samples),
          std::async(std::launch::async, sum_side, std::cref(F), c1, c2,
                     samples),
          std::async(std::launch::async, sum_side, std::cref(F), c2, c3,
                     samples),
          std::async(std::launch::async, sum_side, std::cref(F), c3, c0,
                     samples)};
      SideSum total;
      for (auto& f : fs) {
        SideSum s = f.get();
        total.delta += s.delta;
        total.min_log = std::min(total.min_log, s.min_log);
        total.dip |= s.dip;
        total.depth_exhausted |= s.depth_exhausted;
      }
      if (total.depth_exhausted || total.dip) {
        boundary_zero = true;
        last_problem = "suspected zero on the rectangle boundary";
        break;
      }
      double w = total.delta / (2.0 * M_PI);
      last_w = w;
      double nearest = std::round(w);
      if (std::abs(w - nearest) <= 0.05) {
        WindingReport rep;
        rep.rectangle = r;
        rep.count = (int)nearest;
        rep.boundary_min_abs_log = total.min_log;
        if (rep.count < 0)
          throw NonIntegerWinding(
              "winding_count: negative count (not holomorphic inside?)");
        return rep;
      }
      last_problem = "winding total not near an integer";
      samples *= 2;
    }
    // A persistent half-integer total is the signature of a zero sitting
    // between boundary samples; treat it like a detected boundary zero.
    if (!boundary_zero &&
        std::abs(std::abs(last_w - std::round(last_w)) - 0.5) > 0.2)
      throw NonIntegerWinding("winding_count: " + last_problem);
    // Perturb: grow the rectangle slightly to move the boundary off the zero.
    Complex diag = r.hi - r.lo;
    double pad = 0.007 * (attempt + 1) * std::max(diag.real(), diag.imag());
    r.lo -= Complex(pad, pad);
    r.hi += Complex(pad, pad);
  }
  throw BoundaryZero("winding_count: " + last_problem +
                     " after 3 perturbations");
}

ScanResult scan_window(const Holomorphic& F, Rect rect, int nx, int ny,
                       double tol, int threads) {
  if (nx < 1 || ny < 1) throw DomainError("scan_window: empty grid");
  int n = nx * ny;
  std::vector<std::optional<ResonanceRecord>> hits(n);
  double w = rect.hi.real() - rect.lo.real();
  double h = rect.hi.imag() - rect.lo.imag();
  auto node = [&](int idx) {
    int i = idx % nx, j = idx / nx;
    return rect.lo + Complex((i + 0.5) * w / nx, (j + 0.5) * h / ny);
  };
  int nthreads = std::min(pick_threads(threads), n);
  std::vector<std::future<void>> pool;
  for (int t = 0; t < nthreads; ++t) {
    pool.push_back(std::async(std::launch::async, [&, t]() {
      for (int idx = t; idx < n; idx += nthreads) {
        try {
          ResonanceRecord rec = newton(F, node(idx), tol, 60);
          if (rect.contains(rec.z)) hits[idx] = rec;
        } catch (const Error&) {
        }
      }
    }));
  }
  for (auto& f : pool) f.get();

  ScanResult res;
  for (int idx = 0; idx < n; ++idx) {
    if (!hits[idx]) continue;
    bool dup = false;
    for (const auto& kept : res.records)
      if (std::abs(kept.z - hits[idx]->z) < 1e-6) {
        dup = true;
        break;
      }
    if (!dup) res.records.push_back(*hits[idx]);
  }
  std::sort(res.records.begin(), res.records.end(),
            [](const ResonanceRecord& a, const ResonanceRecord& b) {
              if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
              return a.z.imag() < b.z.imag();
            });

  try {
    res.winding = winding_count(F, rect, 64).count;
    res.counts_match = (res.winding == (int)res.records.size());
    if (!res.counts_match)
      res.diagnostic = "scan found " + std::to_string(res.records.size()) +
                       " zeros but winding count is " +
                       std::to_string(res.winding);
  } catch (const Error& e) {
    res.winding = -1;
    res.counts_match = false;
    res.diagnostic = std::string("winding cross-check failed: ") + e.what();
  }
  return res;
}

bool certify(const Holomorphic& F, ResonanceRecord& rec, double radius) {
  Rect box{rec.z - Complex(radius, radius), rec.z + Complex(radius, radius)};
  try {
    rec.count_certified = (winding_count(F, box, 48).count == 1);
  } catch (const Error&) {
    rec.count_certified = false;
  }
  return rec.count_certified;
}

EigenvalueCheckReport eigenvalue_check(double lambda, double f,
                                       const Profile& p,
                                       const EvalBudget& budget) {
  if (!(f > 0.0)) throw DomainError("eigenvalue_check: f must be > 0");
  EigenvalueCheckReport rep;
  rep.F_residual_log = F_model1(Complex(lambda, 0.0), f, p, budget).abs_log();
  rep.psi_residual_log =
      psi_f(Complex(lambda / f, 0.0), f, p, budget).abs_log();
  return rep;
}

}  // namespace starkres
