#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "anarchia/corpus.hpp"
#include "anarchia/game.hpp"
#include "anarchia/game_io.hpp"

using namespace anarchia;

namespace {

Game two_links(std::vector<Rational> weights, const LatencyFunction& f) {
  std::vector<std::string> pids;
  std::vector<std::vector<std::vector<int>>> strat;
  for (size_t p = 0; p < weights.size(); ++p) {
    pids.push_back("p" + std::to_string(p + 1));
    strat.push_back({{0}, {1}});
  }
  return Game(std::move(pids), std::move(weights), {"r1", "r2"}, std::move(strat), {f, f});
}

// Oracle: recompute the deviating player's cost from the full switched
// profile, independent of the incremental path under test.
double deviation_oracle(const Game& g, StateProfile s, int player, int alt) {
  s[player] = alt;
  return player_cost(g, s, player);
}

}  // namespace

TEST_CASE("rational parsing and arithmetic") {
  CHECK(Rational::parse("1/2") == Rational(1, 2));
  CHECK(Rational::parse("0.5") == Rational(1, 2));
  CHECK(Rational::parse("2") == Rational(2));
  CHECK(Rational::parse("0.25") + Rational::parse("1/4") == Rational(1, 2));
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(3, 6) == Rational(1, 2));
  CHECK(Rational(1, 2) < Rational(2, 3));
  CHECK(Rational(2).str() == "2/1");
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("congestion is an exact rational sum") {
  auto lin = LatencyFunction::poly_sum({0, 1});

  Game solo = two_links({Rational(1)}, lin);
  CHECK(congestion(solo, {0}) == CongestionMap{Rational(1), Rational(0)});

  Game pair = two_links({Rational(1), Rational(2)}, lin);
  CHECK(congestion(pair, {0, 0})[0] == Rational(3));

  Game fractional = two_links({Rational(1, 2), Rational(1, 3)}, lin);
  CHECK(congestion(fractional, {0, 0})[0] == Rational(5, 6));
}

TEST_CASE("congestion conservation") {
  SplitMix64 rng(7);
  for (int it = 0; it < 50; ++it) {
    Game g = random_game(rng);
    StateProfile s = random_state(rng, g);
    CongestionMap c = congestion(g, s);
    Rational lhs(0);
    for (const auto& x : c) lhs = lhs + x;
    Rational rhs(0);
    for (int p = 0; p < g.num_players(); ++p)
      rhs = rhs + g.weights[p] * Rational(static_cast<long long>(g.strategies[p][s[p]].size()));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("player cost") {
  auto lin = LatencyFunction::poly_sum({0, 1});
  Game g({"p1"}, {Rational(2)}, {"r1", "r2"}, {{{0, 1}}}, {lin, lin});
  CHECK(player_cost(g, {0}, 0) == doctest::Approx(4.0));

  auto sq = LatencyFunction::poly_sum({0, 0, 1});
  Game shared = two_links({Rational(1), Rational(1)}, sq);
  CHECK(player_cost(shared, {0, 0}, 0) == doctest::Approx(4.0));
  CHECK(player_cost(shared, {0, 0}, 1) == doctest::Approx(4.0));

  auto exp2 = LatencyFunction::exp_base(2.0);
  Game lone = two_links({Rational(3)}, exp2);
  CHECK(player_cost(lone, {0}, 0) == doctest::Approx(8.0));
}

TEST_CASE("deviation cost") {
  auto lin = LatencyFunction::poly_sum({0, 1});
  Game g = two_links({Rational(1), Rational(1)}, lin);
  CHECK(deviation_cost(g, {0, 0}, 0, 1) == doctest::Approx(1.0));
  CHECK(deviation_cost(g, {0, 0}, 0, 0) == player_cost(g, {0, 0}, 0));  // exact, same sum

  // overlapping strategies keep the player's weight on shared resources
  Game ov({"p1", "p2"}, {Rational(1), Rational(1)}, {"r1", "r2", "r3"},
          {{{0, 1}, {0, 2}}, {{1}, {2}}}, {lin, lin, lin});
  for (int alt = 0; alt < 2; ++alt)
    CHECK(deviation_cost(ov, {0, 0}, 0, alt) == doctest::Approx(deviation_oracle(ov, {0, 0}, 0, alt)));

  SplitMix64 rng(11);
  for (int it = 0; it < 60; ++it) {
    Game rg = random_game(rng);
    StateProfile s = random_state(rng, rg);
    for (int p = 0; p < rg.num_players(); ++p)
      for (int alt = 0; alt < rg.strategy_count(p); ++alt)
        CHECK(deviation_cost(rg, s, p, alt) == doctest::Approx(deviation_oracle(rg, s, p, alt)));
  }
}

TEST_CASE("social cost and the weighted-sum identity") {
  auto lin = LatencyFunction::poly_sum({0, 1});
  Game g = two_links({Rational(2), Rational(1)}, lin);
  CHECK(social_cost(g, {0, 1}) == doctest::Approx(2.0 * 2.0 + 1.0 * 1.0));

  Game idle({"p1"}, {Rational(1)}, {"r1", "r2"}, {{{0}}}, {lin, lin});
  CHECK(social_cost(idle, {0}) == doctest::Approx(1.0));  // untouched resource contributes 0

  SplitMix64 rng(13);
  for (int it = 0; it < 80; ++it) {
    Game rg = random_game(rng);
    StateProfile s = random_state(rng, rg);
    double sc = social_cost(rg, s);
    double weighted = 0.0;
    for (int p = 0; p < rg.num_players(); ++p)
      weighted += rg.weights[p].to_double() * player_cost(rg, s, p);
    CHECK(std::fabs(sc - weighted) <= 1e-12 * std::max(1.0, sc));
  }
}

TEST_CASE("equilibrium predicate against a from-scratch oracle") {
  auto lin = LatencyFunction::poly_sum({0, 1});
  Game g = two_links({Rational(1), Rational(1)}, lin);
  CHECK(is_nash(g, {0, 1}).is_nash);
  NashCheck bad = is_nash(g, {0, 0});
  CHECK_FALSE(bad.is_nash);
  CHECK(bad.better_strategy == 1);

  Game solo({"p1"}, {Rational(1)}, {"r1", "r2"}, {{{0}, {1}}},
            {LatencyFunction::constant(3.0), LatencyFunction::constant(5.0)});
  CHECK(is_nash(solo, {0}).is_nash);
  CHECK_FALSE(is_nash(solo, {1}).is_nash);

  SplitMix64 rng(17);
  for (int it = 0; it < 60; ++it) {
    Game rg = random_game(rng);
    StateProfile s = random_state(rng, rg);
    bool oracle = true;
    for (int p = 0; p < rg.num_players() && oracle; ++p) {
      double cur = player_cost(rg, s, p);
      for (int alt = 0; alt < rg.strategy_count(p); ++alt)
        if (deviation_oracle(rg, s, p, alt) < cur - eps_eq(cur)) oracle = false;
    }
    CHECK(is_nash(rg, s).is_nash == oracle);
  }
}

TEST_CASE("game JSON round trip") {
  SplitMix64 rng(19);
  for (int it = 0; it < 20; ++it) {
    Game g = random_game(rng);
    Game back = game_from_json(game_to_json(g));
    CHECK(back.player_ids == g.player_ids);
    CHECK(back.resource_ids == g.resource_ids);
    CHECK(back.weights == g.weights);
    CHECK(back.strategies == g.strategies);
    StateProfile s = random_state(rng, g);
    CHECK(social_cost(back, s) == doctest::Approx(social_cost(g, s)));
  }
}

TEST_CASE("game JSON validation") {
  nlohmann::json j = {{"players", {{{"id", "p1"}, {"weight", "1"}}}},
                      {"resources", {"r1"}},
                      {"strategies", {{"p1", {{"r9"}}}}},
                      {"latency", {{"r1", {{"family", "poly_sum"}, {"params", {0, 1}}}}}}};
  CHECK_THROWS_AS(game_from_json(j), ParseError);
  j["strategies"]["p1"] = {{"r1"}};
  CHECK_NOTHROW(game_from_json(j));
  j["players"][0]["weight"] = "-1";
  CHECK_THROWS_AS(game_from_json(j), ParseError);
}
