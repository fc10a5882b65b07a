#pragma once

#include <string>
#include <vector>

#include "anarchia/latency.hpp"
#include "anarchia/rational.hpp"

namespace anarchia {

// One chosen strategy index per player.
using StateProfile = std::vector<int>;

// Per-resource congestion, indexed like Game::resource_ids.
using CongestionMap = std::vector<Rational>;

// An unsplittable congestion game: players put their whole weight on every
// resource of the chosen strategy. Immutable after construction; all
// operations on it are pure.
struct Game {
  std::vector<std::string> player_ids;
  std::vector<Rational> weights;
  std::vector<std::string> resource_ids;
  // strategies[p][s] = sorted resource indices of strategy s of player p
  std::vector<std::vector<std::vector<int>>> strategies;
  std::vector<LatencyFunction> latency;  // one per resource
  Rational w_max;

  Game(std::vector<std::string> player_ids_, std::vector<Rational> weights_,
       std::vector<std::string> resource_ids_, std::vector<std::vector<std::vector<int>>> strategies_,
       std::vector<LatencyFunction> latency_);

  int num_players() const { return static_cast<int>(player_ids.size()); }
  int num_resources() const { return static_cast<int>(resource_ids.size()); }
  int strategy_count(int player) const { return static_cast<int>(strategies[player].size()); }

  // Total number of profiles, capped; returns false if it exceeds `cap`.
  bool profile_count(unsigned long long cap, unsigned long long& out) const;

  bool valid_state(const StateProfile& s) const;
};

CongestionMap congestion(const Game& g, const StateProfile& s);

double player_cost(const Game& g, const StateProfile& s, int player);
double player_cost_at(const Game& g, const CongestionMap& c, int player, int strategy);

// Cost of `player` after unilaterally switching to strategy `alt` while
// everyone else stays put. Resources shared between the old and new strategy
// keep the player's weight.
double deviation_cost(const Game& g, const StateProfile& s, int player, int alt);
double deviation_cost_at(const Game& g, const CongestionMap& c, const StateProfile& s, int player, int alt);

double social_cost(const Game& g, const StateProfile& s);
double social_cost_at(const Game& g, const CongestionMap& c);

struct NashCheck {
  bool is_nash = true;
  int player = -1;          // witness on failure
  int better_strategy = -1;
};

// Ties count as stable: a deviation must beat the current cost by more than
// eps_eq(cost) to be improving.
double eps_eq(double cost);

NashCheck is_nash(const Game& g, const StateProfile& s);

}  // namespace anarchia
