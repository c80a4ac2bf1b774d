#include "starkres/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace starkres {

namespace {

// Gauss 7 / Kronrod 15 on [-1,1] (QUADPACK dqk15 constants).
const double kXgk[8] = {0.991455371120813, 0.949107912342759,
                        0.864864423359769, 0.741531185599394,
                        0.586087235467691, 0.405845151377397,
                        0.207784955007898, 0.0};
const double kWgk[8] = {0.022935322010529, 0.063092092629979,
                        0.104790010322250, 0.140653259715525,
                        0.169004726639267, 0.190350578064785,
                        0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277,
                       0.381830050505119, 0.417959183673469};

struct Panel {
  int piece;
  double a, b;
  ScaledComplex val;
  double err_log;
  double peak_log;
  int depth;
};

struct PanelWorse {
  bool operator()(const Panel& x, const Panel& y) const {
    return x.err_log < y.err_log;
  }
};

// Running log-sum-exp accumulator for error totals.
struct LogSum {
  double ref = -INFINITY;
  double sum = 0.0;  // sum of exp(e - ref)
  void add(double e) {
    if (e == -INFINITY) return;
    if (e > ref) {
      sum = sum * std::exp(ref - e) + 1.0;
      ref = e;
    } else {
      sum += std::exp(e - ref);
    }
  }
  void sub(double e) {
    if (e == -INFINITY || ref == -INFINITY) return;
    sum -= std::exp(e - ref);
    if (sum < 0.0) sum = 0.0;
  }
  double log_total() const {
    if (ref == -INFINITY || sum <= 0.0) return -INFINITY;
    return ref + std::log(sum);
  }
};

Panel eval_panel(const ContourPath& path, const ScaledIntegrand& f, int piece,
                 double a, double b, int depth, long& evals) {
  const ContourPiece& pc = path.pieces[piece];
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  ScaledComplex sk = ScaledComplex::zero();
  ScaledComplex sg = ScaledComplex::zero();
  double peak = -INFINITY;
  for (int i = 0; i < 8; ++i) {
    int reps = (i == 7) ? 1 : 2;
    for (int r = 0; r < reps; ++r) {
      double x = (r == 0) ? kXgk[i] : -kXgk[i];
      double t = c + h * x;
      ScaledComplex v = f(pc.k(t)) * pc.dk(t);
      ++evals;
      peak = std::max(peak, v.abs_log());
      sk = sk + v * kWgk[i];
      if (i % 2 == 1) sg = sg + v * kWg[i / 2];
    }
  }
  Panel p;
  p.piece = piece;
  p.a = a;
  p.b = b;
  p.val = sk * h;
  p.err_log = (sk * h - sg * h).abs_log();
  p.peak_log = peak + std::log(std::abs(h) * 2.0);
  p.depth = depth;
  return p;
}

}  // namespace

QuadResult integrate(const ContourPath& path, const ScaledIntegrand& f,
                     const IntegrateOptions& opts) {
  QuadResult res;
  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
  std::vector<Panel> done;  // panels at max depth or with negligible error
  LogSum err_sum;
  ScaledComplex total = ScaledComplex::zero();
  double peak_log = -INFINITY;
  long n_panels = 0;

  auto push = [&](const Panel& p) {
    err_sum.add(p.err_log);
    total = total + p.val;
    peak_log = std::max(peak_log, p.peak_log);
    heap.push(p);
    ++n_panels;
  };

  // Initial panels: each piece split by the width cap (if any), at least 4
  // panels per piece.
  for (size_t i = 0; i < path.pieces.size(); ++i) {
    const ContourPiece& pc = path.pieces[i];
    std::vector<std::pair<double, double>> stack{{pc.t_lo, pc.t_hi}};
    std::vector<std::pair<double, double>> panels;
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      bool split = false;
      if (b - a > (pc.t_hi - pc.t_lo) / 4.0 + 1e-300) split = true;
      if (!split && opts.width_cap) {
        double m = 0.5 * (a + b);
        double arc = std::abs(pc.dk(m)) * (b - a);
        double cap = opts.width_cap(pc.k(m));
        // Clamp pre-splitting at 64 panels per piece; finer oscillation is
        // resolved adaptively, and only where the integrand magnitude
        // matters (the G7K15 error stays large on unresolved oscillation).
        if (arc > cap && (b - a) > (pc.t_hi - pc.t_lo) / 64.0) split = true;
      }
      if (split) {
        double m = 0.5 * (a + b);
        stack.push_back({a, m});
        stack.push_back({m, b});
      } else {
        panels.push_back({a, b});
      }
    }
    std::sort(panels.begin(), panels.end());
    for (auto [a, b] : panels)
      push(eval_panel(path, f, (int)i, a, b, 0, res.evaluations));
  }

  auto tol_log = [&]() {
    double ref = std::max(total.abs_log(), peak_log + std::log(1e-8));
    return std::log(opts.rel_tol) + ref;
  };

  while (!heap.empty() && err_sum.log_total() > tol_log() &&
         n_panels < opts.max_panels) {
    Panel worst = heap.top();
    heap.pop();
    --n_panels;
    if (worst.depth >= opts.max_depth) {
      done.push_back(worst);
      ++n_panels;
      // Everything else in the heap has smaller error; if the sum is still
      // above tolerance we cannot improve this panel further.
      if (worst.err_log > tol_log()) break;
      continue;
    }
    err_sum.sub(worst.err_log);
    total = total - worst.val;
    double m = 0.5 * (worst.a + worst.b);
    push(eval_panel(path, f, worst.piece, worst.a, m, worst.depth + 1,
                    res.evaluations));
    push(eval_panel(path, f, worst.piece, m, worst.b, worst.depth + 1,
                    res.evaluations));
  }

  // Deterministic final summation: panels ordered along the path.
  std::vector<Panel> all = std::move(done);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) {
    if (x.piece != y.piece) return x.piece < y.piece;
    return x.a < y.a;
  });
  ScaledComplex sum = ScaledComplex::zero();
  LogSum err_final;
  for (const Panel& p : all) {
    sum = sum + p.val;
    err_final.add(p.err_log);
  }
  res.value = (path.orientation >= 0) ? sum : -sum;
  res.abs_error_log = err_final.log_total();
  double ref = std::max(res.value.abs_log(), peak_log + std::log(1e-8));
  res.converged = res.abs_error_log <= std::log(opts.rel_tol * 30.0) + ref;
  if (!res.converged) {
    double worst = -INFINITY;
    for (const Panel& p : all)
      if (p.err_log > worst) {
        worst = p.err_log;
        res.worst_piece = p.piece;
        res.worst_t_lo = p.a;
        res.worst_t_hi = p.b;
      }
  }
  return res;
}

QuadResult integrate_oscillatory(const ContourPath& path,
                                 const CubicPhase& phase,
                                 const std::function<Complex(Complex)>& amp,
                                 double one_over_f, double rel_tol) {
  IntegrateOptions opts;
  opts.rel_tol = rel_tol;
  opts.width_cap = [phase, one_over_f](Complex k) {
    double rate = std::abs(phase.deriv(k)) * one_over_f;
    return std::max(1e-8, M_PI / std::max(rate, 1e-30));
  };
  ScaledIntegrand f = [phase, one_over_f, &amp](Complex k) {
    Complex w = Complex(0.0, -1.0) * phase.eval(k) * one_over_f;
    return ScaledComplex::exp(w) * amp(k);
  };
  return integrate(path, f, opts);
}

double principal_value(const std::function<double(double)>& g, double s,
                       double rel_tol) {
  if (!(s > 1e-8))
    throw DomainError("principal_value: s too close to 0");
  double d = std::min(1.0, s / 2.0);

  // Truncation: march outward until g is negligible relative to its max.
  double gmax = std::max({std::abs(g(0.0)), std::abs(g(s)), 1e-300});
  auto march = [&](double from, double dir) {
    double t = from, step = 0.5;
    int below = 0;
    while (below < 3 && std::abs(t) < 400.0) {
      t += dir * step;
      step *= 1.25;
      double v = std::abs(g(t));
      gmax = std::max(gmax, v);
      below = (v < gmax * 1e-18) ? below + 1 : 0;
    }
    return t;
  };
  double R = march(s + d, +1.0);
  double L = march(std::min(0.0, s - d), -1.0);

  double gs = g(s);
  auto wrap = [](std::function<ScaledComplex(Complex)> f) { return f; };
  IntegrateOptions opts;
  opts.rel_tol = rel_tol;

  // Window: (g(k)-g(s))/(k-s); the log terms of the subtraction cancel
  // exactly because the window is symmetric about s.
  ContourPath win;
  win.append(segment(Complex(s - d, 0.0), Complex(s, 0.0)));
  win.append(segment(Complex(s, 0.0), Complex(s + d, 0.0)));
  QuadResult qw = integrate(
      win,
      wrap([&](Complex k) {
        double x = k.real();
        return ScaledComplex::from(Complex((g(x) - gs) / (x - s), 0.0));
      }),
      opts);
  require_converged(qw, "principal_value window");

  ContourPath outer;
  outer.append(segment(Complex(L, 0.0), Complex(s - d, 0.0)));
  outer.append(segment(Complex(s + d, 0.0), Complex(R, 0.0)));
  QuadResult qo = integrate(
      outer,
      wrap([&](Complex k) {
        double x = k.real();
        return ScaledComplex::from(Complex(g(x) / (x - s), 0.0));
      }),
      opts);
  require_converged(qo, "principal_value outer");

  return (qw.value + qo.value).to_complex().real();
}

}  // namespace starkres
