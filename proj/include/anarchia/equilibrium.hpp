#pragma once

#include <stdexcept>
#include <vector>

#include "anarchia/game.hpp"

namespace anarchia {

struct CapExceeded : std::runtime_error {
  CapExceeded() : std::runtime_error("profile space exceeds the enumeration cap") {}
};

struct NoEquilibrium : std::runtime_error {
  NoEquilibrium() : std::runtime_error("game has no pure Nash equilibrium") {}
};

constexpr unsigned long long kDefaultCap = 2'000'000;

struct EquilibriumReport {
  std::vector<StateProfile> nash_states;  // lexicographic profile order
  StateProfile optimal_state;
  double optimal_cost = 0.0;
  StateProfile worst_nash_state;
  double worst_nash_cost = 0.0;
  double poa = 0.0;
};

// Profile index <-> state, player 0 most significant, so increasing index is
// lexicographic order.
StateProfile profile_from_index(const Game& g, unsigned long long index);

std::vector<StateProfile> enumerate_nash(const Game& g, unsigned long long cap = kDefaultCap);
std::vector<StateProfile> enumerate_nash_serial(const Game& g, unsigned long long cap = kDefaultCap);

std::pair<StateProfile, double> optimal_state(const Game& g, unsigned long long cap = kDefaultCap);

EquilibriumReport price_of_anarchy(const Game& g, unsigned long long cap = kDefaultCap);
EquilibriumReport price_of_anarchy_serial(const Game& g, unsigned long long cap = kDefaultCap);

struct BrdResult {
  bool converged = false;
  StateProfile state;
  int steps = 0;
};

// Repeatedly gives the lowest-indexed improvable player its best improving
// strategy (ties to the smaller index). Deterministic; may not converge for
// unequal weights.
BrdResult best_response_dynamics(const Game& g, StateProfile start, int max_steps);

// Potential for uniform-weight games: sum over resources of the prefix sums
// l_r(w), l_r(2w), ..., l_r(n_r w). Strictly decreases along improving moves.
double rosenthal_potential(const Game& g, const StateProfile& s);

}  // namespace anarchia
