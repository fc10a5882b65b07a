#include "anarchia/equilibrium.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace anarchia {

namespace {

// Scan result over one chunk of the profile space. Merging two results is a
// deterministic max/min with index tie-breaks, so any partition of the space
// reduces to the same answer as the serial pass.
struct Scan {
  std::vector<unsigned long long> nash;  // indices, ascending per chunk
  unsigned long long best = 0;           // argmin social cost
  double best_cost = std::numeric_limits<double>::infinity();
  unsigned long long worst_nash = 0;     // argmax social cost among nash
  double worst_nash_cost = -1.0;

  void absorb(unsigned long long idx, double sc, bool nash_state) {
    if (sc < best_cost || (sc == best_cost && idx < best)) {
      best_cost = sc;
      best = idx;
    }
    if (nash_state) {
      nash.push_back(idx);
      if (sc > worst_nash_cost || (sc == worst_nash_cost && idx < worst_nash)) {
        worst_nash_cost = sc;
        worst_nash = idx;
      }
    }
  }

  void merge(const Scan& o) {
    nash.insert(nash.end(), o.nash.begin(), o.nash.end());
    if (o.best_cost < best_cost || (o.best_cost == best_cost && o.best < best)) {
      best_cost = o.best_cost;
      best = o.best;
    }
    if (o.worst_nash_cost > worst_nash_cost ||
        (o.worst_nash_cost == worst_nash_cost && o.worst_nash < worst_nash)) {
      worst_nash_cost = o.worst_nash_cost;
      worst_nash = o.worst_nash;
    }
  }
};

void scan_one(const Game& g, unsigned long long idx, Scan& acc) {
  StateProfile s = profile_from_index(g, idx);
  CongestionMap c = congestion(g, s);
  double sc = social_cost_at(g, c);

  bool nash = true;
  for (int p = 0; p < g.num_players() && nash; ++p) {
    double cur = player_cost_at(g, c, p, s[p]);
    double eps = eps_eq(cur);
    for (int alt = 0; alt < g.strategy_count(p); ++alt) {
      if (alt == s[p]) continue;
      if (deviation_cost_at(g, c, s, p, alt) < cur - eps) {
        nash = false;
        break;
      }
    }
  }
  acc.absorb(idx, sc, nash);
}

Scan scan_profiles(const Game& g, unsigned long long total, bool parallel) {
  Scan result;
#ifdef _OPENMP
  if (parallel && total > 4096) {
    int threads = omp_get_max_threads();
    std::vector<Scan> locals(threads);
#pragma omp parallel num_threads(threads)
    {
      Scan& local = locals[omp_get_thread_num()];
#pragma omp for schedule(static)
      for (long long i = 0; i < static_cast<long long>(total); ++i)
        scan_one(g, static_cast<unsigned long long>(i), local);
    }
    for (const Scan& l : locals) result.merge(l);
    std::sort(result.nash.begin(), result.nash.end());
    return result;
  }
#else
  (void)parallel;
#endif
  for (unsigned long long i = 0; i < total; ++i) scan_one(g, i, result);
  return result;
}

unsigned long long checked_total(const Game& g, unsigned long long cap) {
  unsigned long long total = 0;
  if (!g.profile_count(cap, total)) throw CapExceeded();
  return total;
}

EquilibriumReport report_from_scan(const Game& g, const Scan& scan) {
  if (scan.nash.empty()) throw NoEquilibrium();
  EquilibriumReport rep;
  rep.nash_states.reserve(scan.nash.size());
  for (unsigned long long idx : scan.nash) rep.nash_states.push_back(profile_from_index(g, idx));
  rep.optimal_state = profile_from_index(g, scan.best);
  rep.optimal_cost = scan.best_cost;
  rep.worst_nash_state = profile_from_index(g, scan.worst_nash);
  rep.worst_nash_cost = scan.worst_nash_cost;
  rep.poa = rep.worst_nash_cost / rep.optimal_cost;
  return rep;
}

}  // namespace

StateProfile profile_from_index(const Game& g, unsigned long long index) {
  int n = g.num_players();
  StateProfile s(n, 0);
  for (int p = n - 1; p >= 0; --p) {
    unsigned long long k = g.strategy_count(p);
    s[p] = static_cast<int>(index % k);
    index /= k;
  }
  return s;
}

std::vector<StateProfile> enumerate_nash(const Game& g, unsigned long long cap) {
  Scan scan = scan_profiles(g, checked_total(g, cap), true);
  std::vector<StateProfile> out;
  out.reserve(scan.nash.size());
  for (unsigned long long idx : scan.nash) out.push_back(profile_from_index(g, idx));
  return out;
}

std::vector<StateProfile> enumerate_nash_serial(const Game& g, unsigned long long cap) {
  Scan scan = scan_profiles(g, checked_total(g, cap), false);
  std::vector<StateProfile> out;
  out.reserve(scan.nash.size());
  for (unsigned long long idx : scan.nash) out.push_back(profile_from_index(g, idx));
  return out;
}

std::pair<StateProfile, double> optimal_state(const Game& g, unsigned long long cap) {
  Scan scan = scan_profiles(g, checked_total(g, cap), true);
  return {profile_from_index(g, scan.best), scan.best_cost};
}

EquilibriumReport price_of_anarchy(const Game& g, unsigned long long cap) {
  return report_from_scan(g, scan_profiles(g, checked_total(g, cap), true));
}

EquilibriumReport price_of_anarchy_serial(const Game& g, unsigned long long cap) {
  return report_from_scan(g, scan_profiles(g, checked_total(g, cap), false));
}

BrdResult best_response_dynamics(const Game& g, StateProfile start, int max_steps) {
  BrdResult res;
  res.state = std::move(start);
  for (res.steps = 0; res.steps <= max_steps; ++res.steps) {
    CongestionMap c = congestion(g, res.state);
    int mover = -1, target = -1;
    double target_cost = 0.0;
    for (int p = 0; p < g.num_players() && mover < 0; ++p) {
      double cur = player_cost_at(g, c, p, res.state[p]);
      double eps = eps_eq(cur);
      double best = cur - eps;
      for (int alt = 0; alt < g.strategy_count(p); ++alt) {
        if (alt == res.state[p]) continue;
        double dev = deviation_cost_at(g, c, res.state, p, alt);
        if (dev < best) {
          mover = p;
          target = alt;
          target_cost = dev;
          best = dev;
        }
      }
    }
    if (mover < 0) {
      res.converged = true;
      return res;
    }
    assert(target_cost < player_cost_at(g, c, mover, res.state[mover]));
    (void)target_cost;
    res.state[mover] = target;
  }
  res.steps = max_steps;
  return res;  // converged == false
}

double rosenthal_potential(const Game& g, const StateProfile& s) {
  const Rational w = g.weights[0];
  std::vector<int> users(g.num_resources(), 0);
  for (int p = 0; p < g.num_players(); ++p)
    for (int r : g.strategies[p][s[p]]) ++users[r];
  double phi = 0.0;
  for (int r = 0; r < g.num_resources(); ++r)
    for (int m = 1; m <= users[r]; ++m) phi += g.latency[r].eval((Rational(m) * w).to_double());
  return phi;
}

}  // namespace anarchia
