#include "anarchia/lower_bound.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace anarchia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LogTerm {
  double count = 0.0;  // multiplicity, 0 drops the term
  double log_value = -kInf;
};

// Scaled two-sided comparison of term sums; immune to saturation because
// everything is shifted by the common max exponent.
struct ScaledSides {
  double m = -kInf;
  double lhs = 0.0;  // cost of staying
  double rhs = 0.0;  // cost of deviating

  ScaledSides(std::initializer_list<LogTerm> stay, std::initializer_list<LogTerm> dev) {
    for (const auto& t : stay)
      if (t.count > 0.0) m = std::max(m, t.log_value);
    for (const auto& t : dev)
      if (t.count > 0.0) m = std::max(m, t.log_value);
    for (const auto& t : stay)
      if (t.count > 0.0) lhs += t.count * std::exp(t.log_value - m);
    for (const auto& t : dev)
      if (t.count > 0.0) rhs += t.count * std::exp(t.log_value - m);
  }

  // ties are stable
  bool nash() const { return rhs >= lhs - 1e-9 * std::max(std::exp(-m), lhs); }
  bool tie() const { return std::fabs(rhs - lhs) <= 1e-9 * std::max(std::exp(-m), std::max(lhs, rhs)); }
};

ScaledSides sides_for(const LBParams& p) {
  const LatencyFunction& f = p.latency;
  double w = p.w.to_double();
  double j1 = (Rational(p.kappa1 * p.alpha) * p.w).to_double();
  double j2 = (Rational(p.kappa2 * p.beta) * p.w).to_double();
  return ScaledSides(
      {{static_cast<double>(p.alpha), p.alpha > 0 ? f.log_eval(j1) : -kInf},
       {static_cast<double>(p.beta), p.beta > 0 ? f.log_eval(j2) : -kInf}},
      {{static_cast<double>(p.gamma), p.gamma > 0 ? f.log_eval(j1 + w) : -kInf},
       {static_cast<double>(p.delta), p.delta > 0 ? f.log_eval(j2 + w) : -kInf}});
}

double log_sum(std::initializer_list<LogTerm> terms) {
  double m = -kInf;
  for (const auto& t : terms)
    if (t.count > 0.0) m = std::max(m, std::log(t.count) + t.log_value);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (const auto& t : terms)
    if (t.count > 0.0) s += std::exp(std::log(t.count) + t.log_value - m);
  return m + std::log(s);
}

double closed_form_log_ratio(const LBParams& p) {
  const LatencyFunction& f = p.latency;
  Rational j1 = Rational(p.kappa1 * p.alpha) * p.w;
  Rational j2 = Rational(p.kappa2 * p.beta) * p.w;
  Rational t1 = Rational(p.kappa1 * p.gamma) * p.w;
  Rational t2 = Rational(p.kappa2 * p.delta) * p.w;
  auto side = [&](const Rational& c1, const Rational& c2) {
    return log_sum({{c1.is_zero() ? 0.0 : static_cast<double>(p.zeta1),
                     c1.is_zero() ? -kInf : std::log(c1.to_double()) + f.log_eval(c1.to_double())},
                    {c2.is_zero() ? 0.0 : static_cast<double>(p.zeta2),
                     c2.is_zero() ? -kInf : std::log(c2.to_double()) + f.log_eval(c2.to_double())}});
  };
  return side(j1, j2) - side(t1, t2);
}

struct TupleCandidate {
  double log_ratio = -kInf;
  long alpha = 0, beta = 0, gamma = 0, delta = 0, zeta1 = 0, zeta2 = 0, kappa1 = 0, kappa2 = 0;
  bool valid = false;

  std::array<long, 8> key() const { return {alpha, beta, gamma, delta, zeta1, zeta2, kappa1, kappa2}; }

  void offer(double lr, long a, long b, long g, long d, long z1, long z2, long k1, long k2) {
    std::array<long, 8> k{a, b, g, d, z1, z2, k1, k2};
    if (!valid || lr > log_ratio || (lr == log_ratio && k < key())) {
      valid = true;
      log_ratio = lr;
      alpha = a;
      beta = b;
      gamma = g;
      delta = d;
      zeta1 = z1;
      zeta2 = z2;
      kappa1 = k1;
      kappa2 = k2;
    }
  }

  void merge(const TupleCandidate& o) {
    if (o.valid) offer(o.log_ratio, o.alpha, o.beta, o.gamma, o.delta, o.zeta1, o.zeta2, o.kappa1, o.kappa2);
  }
};

std::vector<long> divisors(long n) {
  std::vector<long> d;
  for (long k = 1; k <= n; ++k)
    if (n % k == 0) d.push_back(k);
  return d;
}

TupleCandidate scan_n(const LatencyFunction& f, const Rational& w, long n) {
  TupleCandidate best;
  for (long zeta1 : divisors(n)) {
    long kappa1 = n / zeta1;
    for (long zeta2 : divisors(n)) {
      long kappa2 = n / zeta2;
      for (long alpha = 0; alpha <= zeta1; ++alpha)
        for (long gamma = 0; gamma + alpha <= zeta1; ++gamma)
          for (long beta = 0; beta <= zeta2; ++beta)
            for (long delta = 0; delta + beta <= zeta2; ++delta) {
              if (alpha + beta < 1 || gamma + delta < 1) continue;
              LBParams p{alpha, beta, gamma, delta, zeta1, zeta2, kappa1, kappa2, w, f};
              if (!sides_for(p).nash()) continue;
              best.offer(closed_form_log_ratio(p), alpha, beta, gamma, delta, zeta1, zeta2, kappa1,
                         kappa2);
            }
    }
  }
  return best;
}

}  // namespace

Rational tune_weight_for_tie(const LBParams& params) {
  LBParams p = params;
  auto gap = [&](const Rational& w) {
    p.w = w;
    ScaledSides s = sides_for(p);
    return s.rhs - s.lhs;  // >= 0 on the equilibrium side
  };
  Rational hi = p.w;
  if (std::fabs(gap(hi)) <= 1e-12) return hi;
  Rational lo = hi;
  bool bracketed = false;
  for (int k = 0; k < 30; ++k) {
    lo = lo / Rational(2);
    if (gap(lo) < 0.0) {
      bracketed = true;
      break;
    }
  }
  if (!bracketed) return hi;
  for (int it = 0; it < 45; ++it) {
    Rational mid = (lo + hi) / Rational(2);
    double g = gap(mid);
    if (std::fabs(g) <= 1e-9) return mid;
    if (g < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

namespace {

LBSearchResult search_impl(const LatencyFunction& f, const Rational& w, long n_max, bool tune_weight,
                           bool parallel) {
  if (n_max < 1) throw InvalidParams("search_params: n_max must be >= 1");
  TupleCandidate best;
#ifdef _OPENMP
  if (parallel) {
    int threads = omp_get_max_threads();
    std::vector<TupleCandidate> locals(threads);
#pragma omp parallel num_threads(threads)
    {
      TupleCandidate& local = locals[omp_get_thread_num()];
#pragma omp for schedule(dynamic)
      for (long n = 1; n <= n_max; ++n) local.merge(scan_n(f, w, n));
    }
    for (const auto& l : locals) best.merge(l);
  } else
#else
  (void)parallel;
#endif
  {
    for (long n = 1; n <= n_max; ++n) best.merge(scan_n(f, w, n));
  }
  if (!best.valid) throw NoFeasibleParams();

  LBParams params{best.alpha,  best.beta,   best.gamma,  best.delta, best.zeta1,
                  best.zeta2,  best.kappa1, best.kappa2, w,          f};
  if (tune_weight) params.w = tune_weight_for_tie(params);
  double lr = closed_form_log_ratio(params);
  return LBSearchResult{std::move(params), lr > 700.0 ? kInf : std::exp(lr), lr};
}

}  // namespace

std::string LBParams::summary() const {
  return "a=" + std::to_string(alpha) + " b=" + std::to_string(beta) + " g=" + std::to_string(gamma) +
         " d=" + std::to_string(delta) + " z1=" + std::to_string(zeta1) +
         " z2=" + std::to_string(zeta2) + " k1=" + std::to_string(kappa1) +
         " k2=" + std::to_string(kappa2) + " w=" + w.str();
}

void validate(const LBParams& p) {
  if (p.alpha < 0 || p.beta < 0 || p.gamma < 0 || p.delta < 0)
    throw InvalidParams("window lengths must be >= 0");
  if (p.zeta1 < 1 || p.zeta2 < 1 || p.kappa1 < 1 || p.kappa2 < 1)
    throw InvalidParams("zeta and kappa must be >= 1");
  if (p.zeta1 < p.alpha + p.gamma) throw InvalidParams("need zeta1 >= alpha + gamma");
  if (p.zeta2 < p.beta + p.delta) throw InvalidParams("need zeta2 >= beta + delta");
  if (p.kappa1 * p.zeta1 != p.kappa2 * p.zeta2)
    throw InvalidParams("player counts disagree: kappa1*zeta1 != kappa2*zeta2");
  if (p.alpha + p.beta < 1) throw InvalidParams("first strategy is empty");
  if (p.gamma + p.delta < 1) throw InvalidParams("second strategy is empty");
  if (!p.w.is_positive()) throw InvalidParams("weight must be > 0");
}

LBInstance build(const LBParams& p) {
  validate(p);
  long n = p.players();

  std::vector<std::string> resource_ids;
  for (long k = 0; k < p.zeta1; ++k) resource_ids.push_back("a" + std::to_string(k));
  for (long k = 0; k < p.zeta2; ++k) resource_ids.push_back("b" + std::to_string(k));

  std::vector<std::string> player_ids;
  std::vector<Rational> weights(n, p.w);
  std::vector<std::vector<std::vector<int>>> strategies;
  for (long idx = 0; idx < n; ++idx) {
    player_ids.push_back("p" + std::to_string(idx + 1));
    std::vector<int> first, second;
    for (long q = 0; q < p.alpha; ++q) first.push_back(static_cast<int>((idx + q) % p.zeta1));
    for (long q = 0; q < p.beta; ++q)
      first.push_back(static_cast<int>(p.zeta1 + (idx + q) % p.zeta2));
    for (long q = 0; q < p.gamma; ++q)
      second.push_back(static_cast<int>((idx + p.alpha + q) % p.zeta1));
    for (long q = 0; q < p.delta; ++q)
      second.push_back(static_cast<int>(p.zeta1 + (idx + p.beta + q) % p.zeta2));
    std::set<int> overlap(first.begin(), first.end());
    for (int r : second)
      if (overlap.count(r)) throw DisjointnessViolated();
    strategies.push_back({first, second});
  }

  std::vector<LatencyFunction> latency(resource_ids.size(), p.latency);
  LBInstance inst{p,
                  Game(std::move(player_ids), std::move(weights), std::move(resource_ids),
                       std::move(strategies), std::move(latency)),
                  StateProfile(n, 0),
                  StateProfile(n, 1),
                  Rational(p.kappa1 * p.alpha) * p.w,
                  Rational(p.kappa2 * p.beta) * p.w,
                  Rational(p.kappa1 * p.gamma) * p.w,
                  Rational(p.kappa2 * p.delta) * p.w};

  // the cyclic layout must reproduce the closed-form congestions exactly
  CongestionMap cs = congestion(inst.game, inst.state_s);
  CongestionMap cbar = congestion(inst.game, inst.state_sbar);
  for (long r = 0; r < p.zeta1; ++r)
    if (cs[r] != inst.j1 || cbar[r] != inst.t1)
      throw std::logic_error("lb build: A congestion mismatch");
  for (long r = p.zeta1; r < p.zeta1 + p.zeta2; ++r)
    if (cs[r] != inst.j2 || cbar[r] != inst.t2)
      throw std::logic_error("lb build: B congestion mismatch");

  const LatencyFunction& f = p.latency;
  double lt1 = inst.t1.is_zero()
                   ? -kInf
                   : std::log(static_cast<double>(p.zeta1)) + std::log(inst.t1.to_double()) +
                         f.log_eval(inst.t1.to_double());
  double lt2 = inst.t2.is_zero()
                   ? -kInf
                   : std::log(static_cast<double>(p.zeta2)) + std::log(inst.t2.to_double()) +
                         f.log_eval(inst.t2.to_double());
  if (lt1 == -kInf) {
    inst.lambda1 = 0.0;
    inst.lambda2 = 1.0;
  } else if (lt2 == -kInf) {
    inst.lambda1 = 1.0;
    inst.lambda2 = 0.0;
  } else {
    inst.lambda1 = 1.0 / (1.0 + std::exp(lt2 - lt1));
    inst.lambda2 = 1.0 / (1.0 + std::exp(lt1 - lt2));
  }
  return inst;
}

LBVerify verify_nash(const LBInstance& inst) {
  LBVerify v;
  v.analytic_nash = sides_for(inst.params).nash();

  NashCheck check = is_nash(inst.game, inst.state_s);
  v.nash = check.is_nash;
  v.witness = check;

  double slack = kInf;
  CongestionMap c = congestion(inst.game, inst.state_s);
  for (int pl = 0; pl < inst.game.num_players(); ++pl) {
    double stay = player_cost_at(inst.game, c, pl, 0);
    double dev = deviation_cost_at(inst.game, c, inst.state_s, pl, 1);
    slack = std::min(slack, dev - stay);
  }
  v.worst_slack = slack;
  return v;
}

double ratio_lower_bound_log(const LBInstance& inst) { return closed_form_log_ratio(inst.params); }

double ratio_lower_bound(const LBInstance& inst) {
  LBVerify v = verify_nash(inst);
  if (!v.nash || !v.analytic_nash) throw NotEquilibrium();
  double lr = ratio_lower_bound_log(inst);
  return lr > 700.0 ? kInf : std::exp(lr);
}

double decomposed_ratio(const LBInstance& inst) {
  const LatencyFunction& f = inst.params.latency;
  auto part = [&](double lambda, const Rational& j, const Rational& t) {
    if (lambda == 0.0 || t.is_zero() || j.is_zero()) return 0.0;
    double jd = j.to_double(), td = t.to_double();
    return lambda * std::exp(std::log(jd) + f.log_eval(jd) - std::log(td) - f.log_eval(td));
  };
  return part(inst.lambda1, inst.j1, inst.t1) + part(inst.lambda2, inst.j2, inst.t2);
}

std::pair<double, double> lambda_balance(const LBInstance& inst) {
  // Evaluated as SC(S-bar)-scaled sides: lambda1 * [j1 l(j1)/(t1 l(t1)) -
  // l(j1+w)/l(t1)] == zeta1 (j1 l(j1) - t1 l(j1+w)) / SC(S-bar) whenever
  // t1 > 0, and the scaled form stays defined when a window congestion
  // degenerates to zero.
  const LatencyFunction& f = inst.params.latency;
  const LBParams& p = inst.params;
  double w = p.w.to_double();
  double log_sbar = log_sum(
      {{inst.t1.is_zero() ? 0.0 : static_cast<double>(p.zeta1),
        inst.t1.is_zero() ? -kInf
                          : std::log(inst.t1.to_double()) + f.log_eval(inst.t1.to_double())},
       {inst.t2.is_zero() ? 0.0 : static_cast<double>(p.zeta2),
        inst.t2.is_zero() ? -kInf
                          : std::log(inst.t2.to_double()) + f.log_eval(inst.t2.to_double())}});
  auto term = [&](double zeta, const Rational& c, double latency_arg) {
    if (c.is_zero()) return 0.0;
    return zeta * std::exp(std::log(c.to_double()) + f.log_eval(latency_arg) - log_sbar);
  };
  double j1 = inst.j1.to_double(), j2 = inst.j2.to_double();
  double z1 = static_cast<double>(p.zeta1), z2 = static_cast<double>(p.zeta2);
  double lhs = term(z1, inst.j1, j1) - term(z1, inst.t1, j1 + w);
  double rhs = term(z2, inst.t2, j2 + w) - term(z2, inst.j2, j2);
  return {lhs, rhs};
}

std::pair<double, double> closed_form_costs(const LBParams& p) {
  ScaledSides s = sides_for(p);
  return {s.lhs * std::exp(s.m), s.rhs * std::exp(s.m)};
}

LBSearchResult search_params(const LatencyFunction& f, const Rational& w, long n_max, bool tune_weight) {
  return search_impl(f, w, n_max, tune_weight, true);
}

LBSearchResult search_params_serial(const LatencyFunction& f, const Rational& w, long n_max,
                                    bool tune_weight) {
  return search_impl(f, w, n_max, tune_weight, false);
}

}  // namespace anarchia
