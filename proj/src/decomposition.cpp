#include "anarchia/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace anarchia {

namespace {

// (j l(j)) / (t l(t)) via logs so fast-growing curves cannot overflow the
// intermediate products.
double ratio_jt_log(const LatencyFunction& f, const Rational& j, const Rational& t) {
  if (j.is_zero()) return 0.0;
  double jd = j.to_double(), td = t.to_double();
  return std::exp(std::log(jd) + f.log_eval(jd) - std::log(td) - f.log_eval(td));
}

double switch_ratio_log(const LatencyFunction& f, const Rational& j, const Rational& i,
                        const Rational& t) {
  double xd = (j + i).to_double(), td = t.to_double();
  return std::exp(f.log_eval(xd) - f.log_eval(td));
}

}  // namespace

bool ClassKey::operator==(const ClassKey& o) const {
  return j == o.j && t == o.t && latency_key == o.latency_key && config == o.config;
}

bool ClassKey::operator<(const ClassKey& o) const {
  if (j != o.j) return j < o.j;
  if (t != o.t) return t < o.t;
  if (latency_key != o.latency_key) return latency_key < o.latency_key;
  return config < o.config;
}

ClassTable build_classes(const Game& g, const StateProfile& state, const StateProfile& ref,
                         bool ref_is_optimal) {
  if (!g.valid_state(state) || !g.valid_state(ref))
    throw std::invalid_argument("build_classes: invalid state");

  CongestionMap cj = congestion(g, state);
  CongestionMap ct = congestion(g, ref);

  ClassTable table;
  table.sc_state = social_cost_at(g, cj);
  table.sc_ref = social_cost_at(g, ct);
  table.ref_is_optimal = ref_is_optimal;
  if (table.sc_ref <= 0.0) throw RefCostZero();

  // reference-state occupants of each resource, grouped by weight
  std::vector<std::map<Rational, int>> occupants(g.num_resources());
  for (int p = 0; p < g.num_players(); ++p)
    for (int r : g.strategies[p][ref[p]]) occupants[r][g.weights[p]] += 1;

  std::map<ClassKey, std::vector<int>> grouped;
  std::map<std::pair<Rational, std::string>, std::vector<int>> zero_grouped;
  for (int r = 0; r < g.num_resources(); ++r) {
    if (ct[r].is_zero()) {
      if (cj[r].is_zero()) continue;  // idle in both states, contributes nothing
      zero_grouped[{cj[r], g.latency[r].key()}].push_back(r);
      continue;
    }
    ClassKey key;
    key.j = cj[r];
    key.t = ct[r];
    key.latency_key = g.latency[r].key();
    key.config.assign(occupants[r].begin(), occupants[r].end());
    grouped[key].push_back(r);
  }

  for (auto& [key, resources] : grouped) {
    ClassRow row;
    row.key = key;
    row.resources = std::move(resources);
    const LatencyFunction& f = g.latency[row.resources.front()];
    double size = static_cast<double>(row.resources.size());
    double lt = f.eval(key.t.to_double());
    row.ratio_jt = ratio_jt_log(f, key.j, key.t);
    for (const auto& [weight, count] : key.config) {
      ClassEntry e;
      e.weight = weight;
      e.count = count;
      e.lambda = size * weight.to_double() * count * lt / table.sc_ref;
      e.f = row.ratio_jt - switch_ratio_log(f, key.j, weight, key.t);
      row.entries.push_back(e);
    }
    table.rows.push_back(std::move(row));
  }

  for (auto& [key, resources] : zero_grouped) {
    ZeroRow row;
    row.j = key.first;
    row.latency_key = key.second;
    row.resources = std::move(resources);
    const LatencyFunction& f = g.latency[row.resources.front()];
    row.lambda = static_cast<double>(row.resources.size()) / table.sc_ref;
    double jd = row.j.to_double();
    row.f00 = std::exp(std::log(jd) + f.log_eval(jd));
    table.zero_rows.push_back(std::move(row));
  }

  return table;
}

double lambda_sum(const ClassTable& table) {
  double s = 0.0;
  for (const auto& row : table.rows)
    for (const auto& e : row.entries) s += e.lambda;
  return s;
}

double coordination_ratio_decomposed(const ClassTable& table) {
  double h = 0.0;
  for (const auto& row : table.rows)
    for (const auto& e : row.entries) h += e.lambda * row.ratio_jt;
  for (const auto& row : table.zero_rows) h += row.lambda * row.f00;
  return h;
}

ConstraintCheck check_equilibrium_constraint(const ClassTable& table) {
  ConstraintCheck c;
  for (const auto& row : table.zero_rows) c.lhs += row.lambda * row.f00;
  for (const auto& row : table.rows)
    for (const auto& e : row.entries) {
      if (e.f >= 0.0)
        c.lhs += e.lambda * e.f;
      else
        c.rhs += e.lambda * (-e.f);
    }
  c.holds = c.lhs <= c.rhs + 1e-9 * std::max(1.0, c.rhs);
  return c;
}

LoadSide classify_triple_side(double f_value, double g_value) {
  (void)g_value;
  return f_value >= 0.0 ? LoadSide::Overloaded : LoadSide::Underloaded;
}

double zero_row_mass(const ClassTable& table, const std::string& latency_key) {
  double s = 0.0;
  for (const auto& row : table.zero_rows)
    if (row.latency_key == latency_key) s += row.lambda * row.f00;
  return s;
}

void write_class_table_csv(std::ostream& out, const ClassTable& table) {
  out << "j,t,k,config,lambda,f_or_g,side\n";
  char buf[64];
  for (const auto& row : table.rows) {
    std::string config;
    for (size_t i = 0; i < row.key.config.size(); ++i) {
      if (i) config += ' ';
      config += row.key.config[i].first.str() + "x" + std::to_string(row.key.config[i].second);
    }
    for (const auto& e : row.entries) {
      bool over = e.f >= 0.0;
      std::snprintf(buf, sizeof buf, "%.12g,%.12g", e.lambda, over ? e.f : -e.f);
      out << row.key.j.str() << ',' << row.key.t.str() << ',' << row.key.latency_key << ','
          << config << "(i=" << e.weight.str() << ")," << buf << ','
          << (over ? "overloaded" : "underloaded") << '\n';
    }
  }
  for (const auto& row : table.zero_rows) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g", row.lambda, row.f00);
    out << row.j.str() << ",0/1," << row.latency_key << ",empty," << buf << ",overloaded\n";
  }
}

}  // namespace anarchia
