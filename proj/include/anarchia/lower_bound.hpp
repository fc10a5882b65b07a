#pragma once

#include <stdexcept>
#include <string>

#include "anarchia/game.hpp"

namespace anarchia {

struct InvalidParams : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DisjointnessViolated : std::runtime_error {
  DisjointnessViolated() : std::runtime_error("cyclic layout produced overlapping strategies") {}
};
struct NotEquilibrium : std::runtime_error {
  NotEquilibrium() : std::runtime_error("instance state is not an equilibrium") {}
};
struct NoFeasibleParams : std::runtime_error {
  NoFeasibleParams() : std::runtime_error("no parameter tuple yields an equilibrium instance") {}
};

// Two-strategy cyclic family over resource sets A (size zeta1) and B (size
// zeta2). Player i's first strategy takes alpha consecutive A-resources and
// beta consecutive B-resources starting at index i-1; the second strategy
// takes the gamma (resp. delta) resources immediately after them, so the two
// strategies of a player never share a resource.
struct LBParams {
  long alpha = 0, beta = 0, gamma = 0, delta = 0;
  long zeta1 = 1, zeta2 = 1;
  long kappa1 = 1, kappa2 = 1;
  Rational w = Rational(1);
  LatencyFunction latency;

  long players() const { return kappa1 * zeta1; }
  std::string summary() const;
};

struct LBInstance {
  LBParams params;
  Game game;
  StateProfile state_s;     // everyone on the first strategy
  StateProfile state_sbar;  // everyone on the second strategy
  Rational j1, j2;          // A/B congestion in state_s
  Rational t1, t2;          // A/B congestion in state_sbar
  double lambda1 = 0.0, lambda2 = 0.0;
};

void validate(const LBParams& p);  // throws InvalidParams

LBInstance build(const LBParams& p);

struct LBVerify {
  bool nash = false;           // via the game operations
  bool analytic_nash = false;  // via the closed-form window inequality
  double worst_slack = 0.0;    // min over players of deviation - cost
  NashCheck witness;
};

LBVerify verify_nash(const LBInstance& inst);

// SC(S)/SC(S-bar), formed in the log domain. Throws NotEquilibrium when the
// instance fails verify_nash.
double ratio_lower_bound(const LBInstance& inst);
double ratio_lower_bound_log(const LBInstance& inst);

// lambda1 * r1 + lambda2 * r2 with r = (j l(j))/(t l(t)) over the non-zero
// congestion parts; equals the direct ratio.
double decomposed_ratio(const LBInstance& inst);

// Both sides of the tie-equilibrium balance identity, scaled by SC(S-bar) so
// zero-congestion windows stay well-defined; equal when player costs tie
// exactly between the two strategies.
std::pair<double, double> lambda_balance(const LBInstance& inst);

// Player cost of the first strategy and of deviating to the second, from the
// closed-form congestions (no game construction).
std::pair<double, double> closed_form_costs(const LBParams& p);

struct LBSearchResult {
  LBParams params;
  double ratio = 0.0;
  double log_ratio = 0.0;
};

// Bisect the weight downward until the stay/deviate costs tie (within 1e-9),
// staying on the equilibrium side; returns the weight unchanged when no tie
// is reachable below it.
Rational tune_weight_for_tie(const LBParams& p);

// Exhaustive scan of all feasible integer tuples with at most n_max players,
// keeping equilibrium instances; deterministic lexicographic tie-break.
// tune_weight additionally bisects the weight of the winning tuple toward an
// exact cost tie (weight only ever decreases).
LBSearchResult search_params(const LatencyFunction& f, const Rational& w, long n_max,
                             bool tune_weight = false);
LBSearchResult search_params_serial(const LatencyFunction& f, const Rational& w, long n_max,
                                    bool tune_weight = false);

}  // namespace anarchia
