// Serial vs parallel timing on the two heavy kernels: exhaustive profile
// scans and the lattice search. Results must agree bit-for-bit.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "anarchia/equilibrium.hpp"
#include "anarchia/lower_bound.hpp"

using namespace anarchia;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Game scan_workload(int players, int links) {
  std::vector<std::string> pids;
  std::vector<Rational> weights;
  std::vector<std::vector<std::vector<int>>> strat;
  std::vector<std::string> rids;
  std::vector<LatencyFunction> lat;
  for (int r = 0; r < links; ++r) {
    rids.push_back("r" + std::to_string(r));
    lat.push_back(r % 2 ? LatencyFunction::poly_sum({0, 0, 1}) : LatencyFunction::poly_sum({0, 1}));
  }
  for (int p = 0; p < players; ++p) {
    pids.push_back("p" + std::to_string(p));
    weights.push_back(p % 3 == 0 ? Rational(2) : Rational(1));
    std::vector<std::vector<int>> per;
    for (int s = 0; s < links; ++s) per.push_back({s, (s + p) % links});
    strat.push_back(per);
  }
  return Game(std::move(pids), std::move(weights), std::move(rids), std::move(strat),
              std::move(lat));
}

}  // namespace

int main(int argc, char** argv) {
  int players = argc > 1 ? std::atoi(argv[1]) : 7;
  int links = argc > 2 ? std::atoi(argv[2]) : 5;
  long n_max = argc > 3 ? std::atol(argv[3]) : 24;

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("threads=%d\n", threads);

  Game g = scan_workload(players, links);
  unsigned long long total = 0;
  g.profile_count(kDefaultCap, total);
  std::printf("profile scan: %d players, %d links, %llu profiles\n", players, links, total);

  auto t0 = std::chrono::steady_clock::now();
  EquilibriumReport serial = price_of_anarchy_serial(g);
  double ts = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  EquilibriumReport parallel = price_of_anarchy(g);
  double tp = seconds_since(t0);
  bool same = serial.poa == parallel.poa && serial.nash_states == parallel.nash_states &&
              serial.optimal_state == parallel.optimal_state;
  std::printf("  serial %.3fs   parallel %.3fs   speedup %.2fx   identical=%s\n", ts, tp, ts / tp,
              same ? "yes" : "NO");

  auto lin = LatencyFunction::poly_sum({0, 1});
  t0 = std::chrono::steady_clock::now();
  LBSearchResult ss = search_params_serial(lin, Rational(1), n_max);
  double ls = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  LBSearchResult sp = search_params(lin, Rational(1), n_max);
  double lp = seconds_since(t0);
  bool lsame = ss.ratio == sp.ratio && ss.params.summary() == sp.params.summary();
  std::printf("lattice search: n_max=%ld\n  serial %.3fs   parallel %.3fs   speedup %.2fx   identical=%s\n",
              n_max, ls, lp, ls / lp, lsame ? "yes" : "NO");

  return same && lsame ? 0 : 1;
}
