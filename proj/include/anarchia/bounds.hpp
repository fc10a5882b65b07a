#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anarchia/latency.hpp"

namespace anarchia {

// Solution of l(x+z)/l(x) = x/y with x >= y >= z > 0, found with y = t and
// z = i as every bound expression uses it.
struct OrderedTriple {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double residual = 0.0;  // |log l(x+z)/l(x) - log x/y| at the returned root
};

struct BoundWitness {
  double j = 0.0;
  double t = 0.0;
  double i = 0.0;
  double t_nearest_achievable = 0.0;  // nearest positive multiple of the weight
};

// A maximum that is either a finite value (kept in the log domain, values can
// dwarf double range) or a divergence verdict with the growth trace that
// witnessed it.
struct BoundValue {
  bool infinite = false;
  double log_value = 0.0;
  BoundWitness witness;
  std::vector<std::pair<double, double>> growth_trace;  // (domain cap, max at cap)

  double value() const;
};

// Truncated search region. The underlying maximizations range over unbounded
// reals; divergence is decided by monotone growth of the maximum across three
// successive doublings of t_max.
struct SearchDomain {
  double t_min = 0.25;
  double t_max = 64.0;
  std::vector<double> i_values;  // defaults to {w} when empty
  int grid_points = 192;
  double refine_tol = 1e-10;
};

std::optional<OrderedTriple> find_triple(const LatencyFunction& f, double t, double i);

// log of l(x+i)/l(t) at the triple root for this (t, i), if a root exists.
std::optional<double> g_star_log_at(const LatencyFunction& f, double t, double i);

BoundValue g_star(const LatencyFunction& f, double w, const SearchDomain& dom);
BoundValue g_hat(const LatencyFunction& f, double w, const SearchDomain& dom);

struct BoundReport {
  BoundValue g_star;
  BoundValue g_hat;
  BoundValue poa;
  std::vector<OrderedTriple> triples;  // refined best triple per weight value
  long degenerate_cells = 0;           // skipped cells with a cancelled denominator
  std::string verdict() const { return poa.infinite ? "infinite" : "finite"; }
};

BoundReport analyze(const LatencyFunction& f, double w, const SearchDomain& dom);
BoundValue poa_bound(const LatencyFunction& f, double w, const SearchDomain& dom);

// Predicted lower-bound growth per class: triple-ratio growth for L1,
// (1+eps) (ln j)^eps for L2, the constant bound for L3.
std::vector<std::pair<double, double>> predict_scaling(const LatencyFunction& f, double w,
                                                       const std::vector<double>& t_values);

}  // namespace anarchia
