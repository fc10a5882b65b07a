#include "anarchia/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace anarchia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTripleScanFactor = 1e6;  // x scanned over [t, factor*t]
constexpr int kTripleScanPoints = 4096;
// One doubling must grow the running maximum by more than this relative step
// for the divergence verdict; three successive doublings are required.
constexpr double kGrowthStep = 1e-3;
constexpr int kDoublings = 3;

double nearest_multiple(double t, double w) {
  double k = std::max(1.0, std::round(t / w));
  return k * w;
}

// l(x+i)/l(x) = x/t as a root problem on the log scale.
double triple_gap(const LatencyFunction& f, double t, double i, double x) {
  return std::log(x) + f.log_eval(x) - std::log(t) - f.log_eval(x + i);
}

// Golden-section maximization of fn over [lo, hi] on the log axis.
double golden_max(const std::function<double(double)>& fn, double lo, double hi, double tol) {
  constexpr double kGolden = 0.6180339887498949;
  double a = std::log(lo), b = std::log(hi);
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = fn(std::exp(c)), fd = fn(std::exp(d));
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = fn(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = fn(std::exp(d));
    }
  }
  return std::exp(0.5 * (a + b));
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  double la = std::log(lo), lb = std::log(hi);
  for (int k = 0; k < n; ++k) g[k] = std::exp(la + (lb - la) * k / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

bool detect_growth(const std::vector<std::pair<double, double>>& trace) {
  if (static_cast<int>(trace.size()) < kDoublings + 1) return false;
  for (size_t k = 1; k < trace.size(); ++k)
    if (!(trace[k].second > trace[k - 1].second + std::log1p(kGrowthStep))) return false;
  return true;
}

struct Candidate {
  double log_value = -kInf;
  BoundWitness witness;

  // Deterministic max: larger value wins, ties to the smaller (t, i, j).
  void offer(double lv, double j, double t, double i) {
    if (lv > log_value ||
        (lv == log_value && std::tie(t, i, j) < std::tie(witness.t, witness.i, witness.j))) {
      log_value = lv;
      witness.j = j;
      witness.t = t;
      witness.i = i;
    }
  }
};

std::vector<double> effective_i_values(const SearchDomain& dom, double w) {
  if (!dom.i_values.empty()) return dom.i_values;
  return {w};
}

// --- g* ---------------------------------------------------------------

Candidate g_star_pass(const LatencyFunction& f, const SearchDomain& dom, double w, double t_cap,
                      std::vector<OrderedTriple>* triples_out) {
  Candidate best;
  for (double i : effective_i_values(dom, w)) {
    Candidate best_i;
    double t_lo = std::max(dom.t_min, i);
    if (t_lo > t_cap) continue;
    for (double t : log_grid(t_lo, t_cap, dom.grid_points)) {
      auto lv = g_star_log_at(f, t, i);
      if (lv) best_i.offer(*lv, 0.0, t, i);
    }
    if (best_i.log_value == -kInf) continue;
    // polish the best grid t
    double t_ref = golden_max(
        [&](double t) {
          auto lv = g_star_log_at(f, t, i);
          return lv ? *lv : -kInf;
        },
        std::max(t_lo, best_i.witness.t / 2), std::min(t_cap, best_i.witness.t * 2), dom.refine_tol);
    auto lv = g_star_log_at(f, t_ref, i);
    if (lv) best_i.offer(*lv, 0.0, t_ref, i);

    auto triple = find_triple(f, best_i.witness.t, i);
    if (triple) {
      best_i.witness.j = triple->x;
      if (triples_out) triples_out->push_back(*triple);
    }
    best.offer(best_i.log_value, best_i.witness.j, best_i.witness.t, best_i.witness.i);
  }
  return best;
}

// --- g^ ---------------------------------------------------------------

// l(x+z)/l(y) - x l(x) / (y l(y)) with z = w, in the log domain; -inf when
// the difference is not positive.
double g_hat_obj(const LatencyFunction& f, double w, double x, double y) {
  double ly = f.log_eval(y);
  double a = f.log_eval(x + w) - ly;
  double b = std::log(x) + f.log_eval(x) - std::log(y) - ly;
  if (a <= b) return -kInf;
  return a + std::log1p(-std::exp(b - a));
}

Candidate g_hat_pass(const LatencyFunction& f, double w, const SearchDomain& dom, double scale) {
  double x_min = 1e-6 * w;
  double x_cap = 8.0 * dom.t_max * scale;
  double y_cap = dom.t_max * scale;
  int n = dom.grid_points;

  std::vector<double> xs = log_grid(x_min, x_cap, n);
  std::vector<double> ys = log_grid(w, y_cap, n);
  Candidate best;
  for (double y : ys)
    for (double x : xs) best.offer(g_hat_obj(f, w, x, y), x, y, w);

  // coordinate descent with golden sections around the best cell
  double x = best.witness.j, y = best.witness.t;
  for (int sweep = 0; sweep < 4; ++sweep) {
    double step = std::pow(x_cap / x_min, 2.0 / (n - 1));
    x = golden_max([&](double xx) { return g_hat_obj(f, w, xx, y); },
                   std::max(x_min, x / step), std::min(x_cap, x * step), dom.refine_tol);
    step = std::pow(y_cap / w, 2.0 / (n - 1));
    y = golden_max([&](double yy) { return g_hat_obj(f, w, x, yy); }, std::max(w, y / step),
                   std::min(y_cap, y * step), dom.refine_tol);
  }
  best.offer(g_hat_obj(f, w, x, y), x, y, w);
  return best;
}

// --- PoA expression ---------------------------------------------------

// log of  g^ j l(j) / (g^ t l(t) + j l(j) - t l(j+i))  for j at or beyond the
// triple root, where the denominator is positive. Cells whose denominator is
// cancelled away below 1e-12 of its leading term are not trusted; they are
// counted instead of clipped.
double poa_expr_log(const LatencyFunction& f, double log_ghat, double j, double t, double i,
                    long* degenerate) {
  double ln_a = log_ghat + std::log(t) + f.log_eval(t);
  double ln_b = std::log(j) + f.log_eval(j);
  double ln_c = std::log(t) + f.log_eval(j + i);
  double m = std::max(ln_a, ln_b);
  double d = std::exp(ln_a - m) + std::exp(ln_b - m) - std::exp(ln_c - m);
  if (d < 1e-12 * std::exp(std::max(ln_b, ln_c) - m)) {
    if (degenerate) ++(*degenerate);
    return -kInf;
  }
  return log_ghat + ln_b - (m + std::log(d));
}

// Maximize over j >= x for one (t, i); coarse grid then golden polish.
double poa_expr_best_j(const LatencyFunction& f, double log_ghat, double x, double t, double i,
                       double j_cap, double tol, long* degenerate, double* j_at_best) {
  std::vector<double> js = log_grid(x, std::max(j_cap, x * (1.0 + 1e-9)), 48);
  double best = -kInf, bj = x;
  for (double j : js) {
    double lv = poa_expr_log(f, log_ghat, j, t, i, degenerate);
    if (lv > best) {
      best = lv;
      bj = j;
    }
  }
  double step = std::pow(js.back() / js.front(), 2.0 / 47.0);
  double j = golden_max([&](double jj) { return poa_expr_log(f, log_ghat, jj, t, i, nullptr); },
                        std::max(x, bj / step), std::min(js.back(), bj * step), tol);
  double lv = poa_expr_log(f, log_ghat, j, t, i, degenerate);
  if (lv > best) {
    best = lv;
    bj = j;
  }
  if (j_at_best) *j_at_best = bj;
  return best;
}

Candidate poa_expr_pass(const LatencyFunction& f, double log_ghat, double w, const SearchDomain& dom,
                        double t_cap, long* degenerate) {
  Candidate best;
  for (double i : effective_i_values(dom, w)) {
    double t_lo = std::max(dom.t_min, i);
    if (t_lo > t_cap) continue;
    for (double t : log_grid(t_lo, t_cap, dom.grid_points)) {
      auto triple = find_triple(f, t, i);
      if (!triple) continue;
      double j_cap = 16.0 * std::max(triple->x, t_cap);
      double bj = triple->x;
      double lv = poa_expr_best_j(f, log_ghat, triple->x, t, i, j_cap, dom.refine_tol, degenerate, &bj);
      best.offer(lv, bj, t, i);
    }
  }
  if (best.log_value == -kInf) return best;

  // polish t at the best weight value
  double i = best.witness.i;
  double t_lo = std::max(dom.t_min, i);
  double t = golden_max(
      [&](double tt) {
        auto triple = find_triple(f, tt, i);
        if (!triple) return -kInf;
        return poa_expr_best_j(f, log_ghat, triple->x, tt, i, 16.0 * std::max(triple->x, t_cap),
                               dom.refine_tol, nullptr, nullptr);
      },
      std::max(t_lo, best.witness.t / 2), std::min(t_cap, best.witness.t * 2), dom.refine_tol);
  auto triple = find_triple(f, t, i);
  if (triple) {
    double bj = triple->x;
    double lv = poa_expr_best_j(f, log_ghat, triple->x, t, i, 16.0 * std::max(triple->x, t_cap),
                                dom.refine_tol, degenerate, &bj);
    best.offer(lv, bj, t, i);
  }
  return best;
}

BoundValue finish(const Candidate& base, std::vector<std::pair<double, double>> trace, double w) {
  BoundValue v;
  v.log_value = base.log_value;
  v.witness = base.witness;
  v.witness.t_nearest_achievable = nearest_multiple(v.witness.t, w);
  if (detect_growth(trace)) {
    v.infinite = true;
    v.growth_trace = std::move(trace);
  }
  return v;
}

}  // namespace

double BoundValue::value() const {
  if (infinite) return kInf;
  return std::exp(log_value);
}

std::optional<OrderedTriple> find_triple(const LatencyFunction& f, double t, double i) {
  if (!(i > 0.0) || !(t >= i)) throw std::invalid_argument("find_triple: need t >= i > 0");
  double h0 = triple_gap(f, t, i, t);
  if (std::fabs(h0) <= 1e-12) return OrderedTriple{t, t, i, std::fabs(h0)};
  // h(t) < 0 for any increasing curve; hunt the first sign change on a log
  // grid, then bisect. No sign change over the whole scan means no triple
  // (the fast-growing case).
  double lo = t, hi = t;
  bool bracketed = false;
  double l_lo = std::log(t), l_hi = std::log(t) + std::log(kTripleScanFactor);
  double prev_x = t, prev_h = h0;
  for (int k = 1; k < kTripleScanPoints; ++k) {
    double x = std::exp(l_lo + (l_hi - l_lo) * k / (kTripleScanPoints - 1));
    double h = triple_gap(f, t, i, x);
    if (prev_h < 0.0 && h >= 0.0) {
      lo = prev_x;
      hi = x;
      bracketed = true;
      break;
    }
    prev_x = x;
    prev_h = h;
  }
  if (!bracketed) return std::nullopt;
  for (int it = 0; it < 200; ++it) {
    double mid = std::sqrt(lo * hi);
    if (triple_gap(f, t, i, mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-14 * hi) break;
  }
  double x = std::sqrt(lo * hi);
  return OrderedTriple{x, t, i, std::fabs(triple_gap(f, t, i, x))};
}

std::optional<double> g_star_log_at(const LatencyFunction& f, double t, double i) {
  auto triple = find_triple(f, t, i);
  if (!triple) return std::nullopt;
  return f.log_eval(triple->x + i) - f.log_eval(t);
}

BoundValue g_star(const LatencyFunction& f, double w, const SearchDomain& dom) {
  std::vector<OrderedTriple> triples;
  Candidate base = g_star_pass(f, dom, w, dom.t_max, &triples);
  std::vector<std::pair<double, double>> trace;
  trace.emplace_back(dom.t_max, base.log_value);
  for (int d = 1; d <= kDoublings; ++d) {
    double cap = dom.t_max * std::pow(2.0, d);
    trace.emplace_back(cap, g_star_pass(f, dom, w, cap, nullptr).log_value);
  }
  return finish(base, std::move(trace), w);
}

BoundValue g_hat(const LatencyFunction& f, double w, const SearchDomain& dom) {
  Candidate base = g_hat_pass(f, w, dom, 1.0);
  std::vector<std::pair<double, double>> trace;
  trace.emplace_back(dom.t_max, base.log_value);
  for (int d = 1; d <= kDoublings; ++d) {
    double scale = std::pow(2.0, d);
    trace.emplace_back(dom.t_max * scale, g_hat_pass(f, w, dom, scale).log_value);
  }
  return finish(base, std::move(trace), w);
}

BoundReport analyze(const LatencyFunction& f, double w, const SearchDomain& dom) {
  if (!(w > 0.0)) throw std::invalid_argument("analyze: weight must be > 0");
  BoundReport rep;
  rep.g_hat = g_hat(f, w, dom);

  std::vector<OrderedTriple> triples;
  Candidate gs_base = g_star_pass(f, dom, w, dom.t_max, &triples);
  std::vector<std::pair<double, double>> gs_trace;
  gs_trace.emplace_back(dom.t_max, gs_base.log_value);
  for (int d = 1; d <= kDoublings; ++d) {
    double cap = dom.t_max * std::pow(2.0, d);
    gs_trace.emplace_back(cap, g_star_pass(f, dom, w, cap, nullptr).log_value);
  }
  rep.g_star = finish(gs_base, gs_trace, w);
  rep.triples = std::move(triples);

  if (rep.g_hat.infinite) {
    rep.poa = rep.g_hat;
    return rep;
  }
  if (rep.g_star.infinite) {
    rep.poa = rep.g_star;
    return rep;
  }

  double log_ghat = rep.g_hat.log_value;
  Candidate expr = poa_expr_pass(f, log_ghat, w, dom, dom.t_max, &rep.degenerate_cells);
  std::vector<std::pair<double, double>> trace;
  Candidate base = expr;
  base.offer(gs_base.log_value, gs_base.witness.j, gs_base.witness.t, gs_base.witness.i);
  trace.emplace_back(dom.t_max, base.log_value);
  for (int d = 1; d <= kDoublings; ++d) {
    double cap = dom.t_max * std::pow(2.0, d);
    Candidate pass = poa_expr_pass(f, log_ghat, w, dom, cap, nullptr);
    pass.offer(gs_trace[d].second, 0.0, 0.0, 0.0);
    trace.emplace_back(cap, pass.log_value);
  }
  rep.poa = finish(base, std::move(trace), w);
  return rep;
}

BoundValue poa_bound(const LatencyFunction& f, double w, const SearchDomain& dom) {
  return analyze(f, w, dom).poa;
}

std::vector<std::pair<double, double>> predict_scaling(const LatencyFunction& f, double w,
                                                       const std::vector<double>& t_values) {
  std::vector<std::pair<double, double>> out;
  SearchDomain dom;
  double l3_bound = 0.0;
  if (f.class_tag() == LatencyClass::L3) l3_bound = poa_bound(f, w, dom).value();
  for (double t : t_values) {
    double pred;
    switch (f.class_tag()) {
      case LatencyClass::L1: {
        auto lv = g_star_log_at(f, t, w);
        if (lv) {
          pred = *lv > 700.0 ? kInf : std::exp(*lv);
        } else {
          // no triples: fall back to the telescoped ratio growth with the
          // ratio step measured at t itself
          double delta = std::expm1(f.log_ratio(t + w, t));
          double lp = (delta * t / w + 1.0) * std::log1p(delta);
          pred = lp > 700.0 ? kInf : std::exp(lp);
        }
        break;
      }
      case LatencyClass::L2: {
        double eps = f.params()[0];
        pred = (1.0 + eps) * std::pow(std::log(std::max(t, 1.0 + 1e-12)), eps);
        break;
      }
      case LatencyClass::L3:
        pred = l3_bound;
        break;
      default:
        pred = 0.0;
    }
    out.emplace_back(t, pred);
  }
  return out;
}

}  // namespace anarchia
