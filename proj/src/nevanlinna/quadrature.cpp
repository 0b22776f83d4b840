#include "nev/nevanlinna/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "nev/expr/evaluate.hpp"

namespace nev::nevanlinna {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, err;
  bool operator<(const Panel& o) const {
    if (err != o.err) return err < o.err;
    return a > o.a;
  }
};

Panel kronrod(const std::function<double(double)>& g, double a, double b, long& evals) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = g(c);
  double resg = fc * kWg[3], resk = fc * kWgk[7], resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 3; ++j) {
    int k = 2 * j + 1;
    double x = h * kXgk[k];
    f1[k] = g(c - x);
    f2[k] = g(c + x);
    resg += kWg[j] * (f1[k] + f2[k]);
    resk += kWgk[k] * (f1[k] + f2[k]);
    resabs += kWgk[k] * (std::abs(f1[k]) + std::abs(f2[k]));
  }
  for (int j = 0; j < 4; ++j) {
    int k = 2 * j;
    double x = h * kXgk[k];
    f1[k] = g(c - x);
    f2[k] = g(c + x);
    resk += kWgk[k] * (f1[k] + f2[k]);
    resabs += kWgk[k] * (std::abs(f1[k]) + std::abs(f2[k]));
  }
  evals += 15;
  double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int k = 0; k < 7; ++k) resasc += kWgk[k] * (std::abs(f1[k] - mean) + std::abs(f2[k] - mean));
  double ah = std::abs(h);
  resabs *= ah;
  resasc *= ah;
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  err = std::max(err, 50.0 * kEps * resabs);
  return {a, b, resk * h, err};
}

// Global adaptive bisection over the given break points.
QuadratureResult adaptive(const std::function<double(double)>& g, const std::vector<double>& breaks,
                          double abs_tol, double rel_tol, long cap) {
  QuadratureResult out;
  std::priority_queue<Panel> heap;
  std::vector<Panel> done;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
    if (breaks[k + 1] > breaks[k]) heap.push(kronrod(g, breaks[k], breaks[k + 1], out.n_evals));
  auto totals = [&]() {
    std::vector<Panel> all = done;
    auto copy = heap;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double v = 0.0, e = 0.0;
    for (const auto& p : all) {
      v += p.value;
      e += p.err;
    }
    return std::pair{v, e};
  };
  double value = 0.0, err = 0.0;
  {
    auto copy = heap;
    while (!copy.empty()) {
      value += copy.top().value;
      err += copy.top().err;
      copy.pop();
    }
  }
  double stuck = 0.0;  // error of panels too narrow to split
  while (!heap.empty() && err - stuck > std::max(abs_tol, rel_tol * std::abs(value))) {
    Panel worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        worst.b - worst.a < 1e-15 * std::max(1.0, std::abs(mid))) {
      done.push_back(worst);
      stuck += worst.err;
      continue;
    }
    if (out.n_evals + 30 > cap)
      throw Error(ErrorKind::budget_exceeded, "quadrature evaluation cap reached");
    Panel left = kronrod(g, worst.a, mid, out.n_evals);
    Panel right = kronrod(g, mid, worst.b, out.n_evals);
    value += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum in a fixed order so the result does not depend on the refinement path.
  auto [v, e] = totals();
  out.value = v;
  out.abs_err_est = e;
  return out;
}

struct ArcPoint {
  double angle;
  cplx at;
  int signed_mult;  // + zero, - pole
};

struct Arc {
  double lo, hi;
  std::vector<ArcPoint> points;
};

double norm_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

}  // namespace

std::vector<std::pair<double, double>> gauss_legendre(int n) {
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out[static_cast<std::size_t>(i)] = {-x, w};
    out[static_cast<std::size_t>(n - 1 - i)] = {x, w};
  }
  return out;
}

QuadratureResult integrate(const std::function<double(double)>& g, double a, double b,
                           const QuadratureOptions& opt) {
  return adaptive(g, {a, b}, opt.abs_tol, opt.rel_tol, opt.eval_cap);
}

QuadratureResult circle_log_integral(const expr::NodePtr& f, double r, LogKind kind,
                                     const std::vector<expr::ZeroPole>& singular,
                                     const std::function<double(double)>& weight,
                                     const std::vector<double>& extra_breaks,
                                     const QuadratureOptions& opt) {
  if (!(r > 0.0)) throw Error(ErrorKind::precondition, "radius must be positive");

  auto raw_log = [&](double t) {
    expr::LogPolar lp = expr::log_polar(f, std::polar(r, t));
    if (lp.zero) {
      if (kind == LogKind::log_plus) return -std::numeric_limits<double>::infinity();
      throw Error(ErrorKind::non_finite, "log|f| is -inf at a quadrature node");
    }
    if (lp.pole || !std::isfinite(lp.log_abs))
      throw Error(ErrorKind::non_finite, "integrand not finite outside singular arcs");
    return lp.log_abs;
  };
  auto shape = [&](double l) { return kind == LogKind::log_plus ? std::max(0.0, l) : l; };
  auto w = [&](double t) { return weight ? weight(t) : 1.0; };

  // Singular arcs around zeros/poles hugging the circle.
  std::vector<Arc> arcs;
  std::vector<double> breaks;
  for (const auto& s : singular) {
    double mod = std::abs(s.location);
    double dist = std::abs(mod - r);
    bool relevant = s.kind == expr::PointKind::pole || kind == LogKind::log_abs;
    if (dist < 0.25 * r && mod > 0.0) breaks.push_back(norm_angle(std::arg(s.location)));
    if (!relevant || dist >= kSingularBand * r) continue;
    double c = std::arg(s.location);
    int sm = s.kind == expr::PointKind::zero ? s.multiplicity : -s.multiplicity;
    arcs.push_back({c - kArcHalfWidth, c + kArcHalfWidth, {{c, s.location, sm}}});
  }
  // Merge overlapping arcs (angles are compared on the unrolled line first).
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
  std::vector<Arc> merged;
  for (auto& a : arcs) {
    if (!merged.empty() && a.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, a.hi);
      merged.back().points.insert(merged.back().points.end(), a.points.begin(), a.points.end());
    } else {
      merged.push_back(a);
    }
  }
  if (merged.size() > 1 && merged.back().hi - kTwoPi >= merged.front().lo) {
    Arc& first = merged.front();
    Arc last = merged.back();
    merged.pop_back();
    first.lo = last.lo - kTwoPi;
    for (auto p : last.points) {
      p.angle -= kTwoPi;
      first.points.push_back(p);
    }
  }

  // Start of the period: an angle outside every arc.
  double start = 0.0;
  for (int attempt = 0; attempt < 16; ++attempt) {
    bool clash = false;
    for (const auto& a : merged) {
      double lo = norm_angle(a.lo - start), hi = lo + (a.hi - a.lo);
      if (lo < 1e-12 || hi > kTwoPi - 1e-12) clash = true;
    }
    if (!clash) break;
    start += 0.3719;
  }

  int base = static_cast<int>(std::clamp(16.0 + r, 16.0, 1024.0));
  std::vector<double> pts;
  for (int k = 0; k <= base; ++k) pts.push_back(start + kTwoPi * k / base);
  auto unroll = [&](double t) { return start + norm_angle(t - start); };
  for (double b : breaks) pts.push_back(unroll(b));
  for (double b : extra_breaks) pts.push_back(unroll(b));
  std::vector<std::pair<double, double>> holes;
  for (const auto& a : merged) {
    double lo = unroll(a.lo);
    holes.push_back({lo, lo + (a.hi - a.lo)});
    pts.push_back(lo);
    pts.push_back(lo + (a.hi - a.lo));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double x, double y) { return std::abs(x - y) < 1e-13; }),
            pts.end());
  pts.front() = start;
  pts.back() = start + kTwoPi;

  auto in_hole = [&](double x) {
    for (const auto& h : holes)
      if (x > h.first - 1e-13 && x < h.second + 1e-13) return true;
    return false;
  };

  std::function<double(double)> g = [&](double t) { return w(t) * shape(raw_log(t)); };
  QuadratureResult out;
  double tol = opt.abs_tol * kTwoPi;
  // Regular part: runs of consecutive break points outside the holes.
  std::vector<double> run;
  auto flush = [&]() {
    if (run.size() >= 2) {
      QuadratureResult part = adaptive(g, run, tol, opt.rel_tol, opt.eval_cap - out.n_evals);
      out.value += part.value;
      out.abs_err_est += part.abs_err_est;
      out.n_evals += part.n_evals;
    }
    run.clear();
  };
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    double mid = 0.5 * (pts[k] + pts[k + 1]);
    if (in_hole(mid)) {
      flush();
      continue;
    }
    if (run.empty()) run.push_back(pts[k]);
    run.push_back(pts[k + 1]);
  }
  flush();

  // Singular arcs: log|f| = C(t) + sum m_j log|r e^{it} - x_j| with C linear
  // between the arc edges, integrated in closed-form-free fashion.
  for (std::size_t h = 0; h < merged.size(); ++h) {
    const Arc& arc = merged[h];
    double lo = holes[h].first, hi = holes[h].second;
    double shift = lo - arc.lo;
    auto sing = [&](double t) {
      double acc = 0.0;
      for (const auto& p : arc.points)
        acc += p.signed_mult * std::log(std::abs(std::polar(r, t) - p.at));
      return acc;
    };
    double cl = raw_log(lo) - sing(lo);
    double ch = raw_log(hi) - sing(hi);
    out.n_evals += 2;
    auto model = [&](double t) {
      double c = cl + (ch - cl) * (t - lo) / (hi - lo);
      return w(t) * shape(c + sing(t));
    };
    std::vector<double> cuts{lo, hi};
    for (const auto& p : arc.points) {
      double a = p.angle + shift;
      if (a > lo && a < hi) cuts.push_back(a);
    }
    std::sort(cuts.begin(), cuts.end());
    QuadratureResult part = adaptive(model, cuts, 1e-3 * tol * (hi - lo), 0.0, 1L << 16);
    out.value += part.value;
    double scale = std::max(std::abs(w(lo)), std::abs(w(hi)));
    out.abs_err_est += part.abs_err_est + 0.5 * (hi - lo) * std::abs(ch - cl) * scale +
                       50.0 * kEps * std::abs(part.value);
    out.singular_arcs.push_back({norm_angle(0.5 * (arc.lo + arc.hi)), 0.5 * (arc.hi - arc.lo)});
  }

  out.value /= kTwoPi;
  out.abs_err_est /= kTwoPi;
  return out;
}

}  // namespace nev::nevanlinna
