#include "anarchia/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace anarchia {

Game::Game(std::vector<std::string> player_ids_, std::vector<Rational> weights_,
           std::vector<std::string> resource_ids_, std::vector<std::vector<std::vector<int>>> strategies_,
           std::vector<LatencyFunction> latency_)
    : player_ids(std::move(player_ids_)),
      weights(std::move(weights_)),
      resource_ids(std::move(resource_ids_)),
      strategies(std::move(strategies_)),
      latency(std::move(latency_)) {
  if (player_ids.empty()) throw std::invalid_argument("game: no players");
  if (resource_ids.empty()) throw std::invalid_argument("game: no resources");
  if (weights.size() != player_ids.size() || strategies.size() != player_ids.size())
    throw std::invalid_argument("game: players/weights/strategies size mismatch");
  if (latency.size() != resource_ids.size())
    throw std::invalid_argument("game: one latency function per resource required");
  w_max = weights[0];
  for (const auto& w : weights) {
    if (!w.is_positive()) throw std::invalid_argument("game: weights must be > 0");
    if (w_max < w) w_max = w;
  }
  for (auto& per_player : strategies) {
    if (per_player.empty()) throw std::invalid_argument("game: every player needs >= 1 strategy");
    for (auto& strat : per_player) {
      std::sort(strat.begin(), strat.end());
      strat.erase(std::unique(strat.begin(), strat.end()), strat.end());
      for (int r : strat)
        if (r < 0 || r >= num_resources())
          throw std::invalid_argument("game: strategy references unknown resource");
    }
  }
}

bool Game::profile_count(unsigned long long cap, unsigned long long& out) const {
  unsigned long long total = 1;
  for (const auto& per_player : strategies) {
    unsigned long long k = per_player.size();
    if (total > cap / k) return false;
    total *= k;
  }
  out = total;
  return total <= cap;
}

bool Game::valid_state(const StateProfile& s) const {
  if (static_cast<int>(s.size()) != num_players()) return false;
  for (int p = 0; p < num_players(); ++p)
    if (s[p] < 0 || s[p] >= strategy_count(p)) return false;
  return true;
}

CongestionMap congestion(const Game& g, const StateProfile& s) {
  CongestionMap c(g.num_resources(), Rational(0));
  for (int p = 0; p < g.num_players(); ++p)
    for (int r : g.strategies[p][s[p]]) c[r] = c[r] + g.weights[p];
  return c;
}

double player_cost_at(const Game& g, const CongestionMap& c, int player, int strategy) {
  double total = 0.0;
  for (int r : g.strategies[player][strategy]) total += g.latency[r].eval(c[r].to_double());
  return total;
}

double player_cost(const Game& g, const StateProfile& s, int player) {
  CongestionMap c = congestion(g, s);
  return player_cost_at(g, c, player, s[player]);
}

double deviation_cost_at(const Game& g, const CongestionMap& c, const StateProfile& s, int player,
                         int alt) {
  const auto& cur = g.strategies[player][s[player]];
  double total = 0.0;
  for (int r : g.strategies[player][alt]) {
    Rational cr = c[r];
    // weight joins r unless the player is already there
    if (!std::binary_search(cur.begin(), cur.end(), r)) cr = cr + g.weights[player];
    total += g.latency[r].eval(cr.to_double());
  }
  return total;
}

double deviation_cost(const Game& g, const StateProfile& s, int player, int alt) {
  CongestionMap c = congestion(g, s);
  return deviation_cost_at(g, c, s, player, alt);
}

double social_cost_at(const Game& g, const CongestionMap& c) {
  double total = 0.0;
  for (int r = 0; r < g.num_resources(); ++r) {
    if (c[r].is_zero()) continue;  // l(0)*0 := 0, l is never evaluated at 0
    double x = c[r].to_double();
    total += g.latency[r].eval(x) * x;
  }
  return total;
}

double social_cost(const Game& g, const StateProfile& s) {
  CongestionMap c = congestion(g, s);
  return social_cost_at(g, c);
}

double eps_eq(double cost) { return 1e-9 * std::max(1.0, cost); }

NashCheck is_nash(const Game& g, const StateProfile& s) {
  CongestionMap c = congestion(g, s);
  for (int p = 0; p < g.num_players(); ++p) {
    double cur = player_cost_at(g, c, p, s[p]);
    double eps = eps_eq(cur);
    for (int alt = 0; alt < g.strategy_count(p); ++alt) {
      if (alt == s[p]) continue;
      if (deviation_cost_at(g, c, s, p, alt) < cur - eps) return {false, p, alt};
    }
  }
  return {};
}

}  // namespace anarchia
