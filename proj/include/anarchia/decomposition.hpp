#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "anarchia/game.hpp"

namespace anarchia {

struct RefCostZero : std::runtime_error {
  RefCostZero() : std::runtime_error("reference state has zero social cost") {}
};

enum class LoadSide { Overloaded, Underloaded };

// Resources are grouped by exact congestion in the evaluated state (j), exact
// congestion in the reference state (t), the shared cost curve (k), and the
// multiset of player weights occupying them in the reference state. Grouping
// keys are exact rationals; no floating-point equality anywhere.
struct ClassKey {
  Rational j;
  Rational t;
  std::string latency_key;
  std::vector<std::pair<Rational, int>> config;  // sorted (weight, count), sums to t

  bool operator<(const ClassKey& o) const;
  bool operator==(const ClassKey& o) const;
};

struct ClassEntry {
  Rational weight;   // i
  int count = 0;     // players of this weight per resource in the reference state
  double lambda = 0.0;
  double f = 0.0;    // overloaded when f >= 0, else the row holds g = -f > 0
};

struct ClassRow {
  ClassKey key;
  std::vector<int> resources;
  std::vector<ClassEntry> entries;
  double ratio_jt = 0.0;  // (j l(j)) / (t l(t)), 0 when j == 0
};

// Resources used in the evaluated state but idle in the reference state.
struct ZeroRow {
  Rational j;
  std::string latency_key;
  std::vector<int> resources;
  double lambda = 0.0;  // |class| / SC(ref)
  double f00 = 0.0;     // j * l(j)
};

struct ClassTable {
  std::vector<ClassRow> rows;      // t > 0, ordered by key
  std::vector<ZeroRow> zero_rows;  // t == 0, j > 0
  double sc_state = 0.0;
  double sc_ref = 0.0;
  bool ref_is_optimal = false;  // label only; the ratio identity holds either way
};

ClassTable build_classes(const Game& g, const StateProfile& state, const StateProfile& ref,
                         bool ref_is_optimal = false);

// Sum of lambda over all t>0 rows; equals 1 whenever SC(ref) > 0.
double lambda_sum(const ClassTable& table);

// The decomposed coordination ratio; identical to SC(state)/SC(ref).
double coordination_ratio_decomposed(const ClassTable& table);

struct ConstraintCheck {
  double lhs = 0.0;  // zero-row mass + overloaded mass
  double rhs = 0.0;  // underloaded mass
  bool holds = false;
};

// At an equilibrium evaluated against the exact optimum, the overloaded mass
// cannot exceed the underloaded mass.
ConstraintCheck check_equilibrium_constraint(const ClassTable& table);

LoadSide classify_triple_side(double f_value, double g_value);

// Sum of lambda * f over zero rows only; bounded by g_hat of the row's cost
// curve when the evaluated state is an equilibrium.
double zero_row_mass(const ClassTable& table, const std::string& latency_key);

// CSV: j,t,k,config,lambda,f_or_g,side with j and t as exact "num/den".
void write_class_table_csv(std::ostream& out, const ClassTable& table);

}  // namespace anarchia
