#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "anarchia/corpus.hpp"
#include "anarchia/equilibrium.hpp"

using namespace anarchia;

namespace {

Game parallel_links(int n_players, const LatencyFunction& f, Rational w = Rational(1)) {
  std::vector<std::string> pids;
  std::vector<Rational> weights(n_players, w);
  std::vector<std::vector<std::vector<int>>> strat;
  for (int p = 0; p < n_players; ++p) {
    pids.push_back("p" + std::to_string(p + 1));
    strat.push_back({{0}, {1}});
  }
  return Game(std::move(pids), std::move(weights), {"r1", "r2"}, std::move(strat), {f, f});
}

}  // namespace

TEST_CASE("enumerate_nash finds exactly the split profiles") {
  Game g = parallel_links(2, LatencyFunction::poly_sum({0, 1}));
  auto nash = enumerate_nash(g);
  REQUIRE(nash.size() == 2);
  CHECK(nash[0] == StateProfile{0, 1});
  CHECK(nash[1] == StateProfile{1, 0});

  // brute oracle over all four profiles
  for (unsigned long long idx = 0; idx < 4; ++idx) {
    StateProfile s = profile_from_index(g, idx);
    bool in_list = std::find(nash.begin(), nash.end(), s) != nash.end();
    CHECK(in_list == is_nash(g, s).is_nash);
  }
}

TEST_CASE("single player picks its cheapest strategy") {
  Game g({"p1"}, {Rational(1)}, {"r1", "r2"}, {{{0}, {1}}},
         {LatencyFunction::constant(3.0), LatencyFunction::constant(5.0)});
  auto nash = enumerate_nash(g);
  REQUIRE(nash.size() == 1);
  CHECK(nash[0] == StateProfile{0});
}

TEST_CASE("uniform weights always admit an equilibrium") {
  SplitMix64 rng(23);
  RandomGameOptions opts;
  opts.uniform_weights = true;
  for (int it = 0; it < 60; ++it) {
    Game g = random_game(rng, opts);
    CHECK_FALSE(enumerate_nash(g).empty());
  }
}

TEST_CASE("cap handling") {
  Game g = parallel_links(4, LatencyFunction::poly_sum({0, 1}));
  CHECK_THROWS_AS(enumerate_nash(g, 15), CapExceeded);
  CHECK_NOTHROW(enumerate_nash(g, 16));
}

TEST_CASE("optimal state") {
  Game g = parallel_links(2, LatencyFunction::poly_sum({0, 1}));
  auto [opt, cost] = optimal_state(g);
  CHECK(opt == StateProfile{0, 1});  // lexicographic tie-break among the splits
  CHECK(cost == doctest::Approx(2.0));

  Game one({"p1"}, {Rational(1)}, {"r1"}, {{{0}}}, {LatencyFunction::poly_sum({0, 1})});
  CHECK(optimal_state(one).first == StateProfile{0});
}

TEST_CASE("price of anarchy on identical links is exactly 1") {
  for (const auto& f : {LatencyFunction::poly_sum({0, 1}), LatencyFunction::poly_sum({1, 0, 2}),
                        LatencyFunction::exp_base(2.0), LatencyFunction::constant(4.0),
                        LatencyFunction::factorial()}) {
    for (int n = 2; n <= 4; ++n) {
      EquilibriumReport rep = price_of_anarchy(parallel_links(n, f));
      CHECK(rep.poa == 1.0);
    }
  }
}

TEST_CASE("report invariants on random games") {
  SplitMix64 rng(29);
  for (int it = 0; it < 40; ++it) {
    Game g = random_game(rng);
    EquilibriumReport rep;
    try {
      rep = price_of_anarchy(g);
    } catch (const NoEquilibrium&) {
      continue;
    }
    CHECK(rep.poa >= 1.0 - 1e-12);
    for (const auto& s : rep.nash_states) {
      CHECK(is_nash(g, s).is_nash);
      CHECK(social_cost(g, s) <= rep.worst_nash_cost + 1e-12);
      CHECK(rep.optimal_cost <= social_cost(g, s) + 1e-12);
    }
  }
}

TEST_CASE("parallel scan is bit-identical to the serial reference") {
  SplitMix64 rng(31);
  for (int it = 0; it < 25; ++it) {
    Game g = random_game(rng);
    CHECK(enumerate_nash(g) == enumerate_nash_serial(g));
    try {
      EquilibriumReport a = price_of_anarchy(g);
      EquilibriumReport b = price_of_anarchy_serial(g);
      CHECK(a.poa == b.poa);
      CHECK(a.optimal_state == b.optimal_state);
      CHECK(a.worst_nash_state == b.worst_nash_state);
      CHECK(a.optimal_cost == b.optimal_cost);
    } catch (const NoEquilibrium&) {
      CHECK_THROWS_AS(price_of_anarchy_serial(g), NoEquilibrium);
    }
  }
}

TEST_CASE("best-response dynamics") {
  Game g = parallel_links(2, LatencyFunction::poly_sum({0, 1}));

  BrdResult fixed = best_response_dynamics(g, {0, 1}, 10);
  CHECK(fixed.converged);
  CHECK(fixed.steps == 0);
  CHECK(fixed.state == StateProfile{0, 1});

  BrdResult moved = best_response_dynamics(g, {0, 0}, 10);
  CHECK(moved.converged);
  CHECK(moved.steps == 1);
  CHECK(is_nash(g, moved.state).is_nash);
}

TEST_CASE("dynamics on uniform games: potential and mover cost both descend") {
  SplitMix64 rng(37);
  RandomGameOptions opts;
  opts.uniform_weights = true;
  for (int it = 0; it < 40; ++it) {
    Game g = random_game(rng, opts);
    StateProfile s = random_state(rng, g);
    double phi = rosenthal_potential(g, s);
    // replay the dynamics one step at a time
    for (int step = 0; step < 200; ++step) {
      BrdResult one = best_response_dynamics(g, s, 0);
      if (one.converged) break;
      one = best_response_dynamics(g, s, 1);
      int mover = -1;
      for (int p = 0; p < g.num_players(); ++p)
        if (one.state[p] != s[p]) mover = p;
      REQUIRE(mover >= 0);
      CHECK(player_cost(g, one.state, mover) < player_cost(g, s, mover));
      double phi_next = rosenthal_potential(g, one.state);
      CHECK(phi_next < phi);
      phi = phi_next;
      s = one.state;
    }
    BrdResult full = best_response_dynamics(g, random_state(rng, g), 500);
    CHECK(full.converged);
    CHECK(is_nash(g, full.state).is_nash);
  }
}
