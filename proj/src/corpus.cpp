#include "anarchia/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "anarchia/decomposition.hpp"
#include "anarchia/equilibrium.hpp"
#include "anarchia/game_io.hpp"
#include "anarchia/lower_bound.hpp"

namespace anarchia {

namespace {

LatencyFunction random_latency(SplitMix64& rng) {
  static const double coeffs[] = {0.5, 1.0, 2.0, 3.0};
  auto c = [&] { return coeffs[rng.below(4)]; };
  switch (rng.below(6)) {
    case 0: return LatencyFunction::poly_sum({0.0, c()});
    case 1: return LatencyFunction::poly_sum({c(), c()});
    case 2: return LatencyFunction::poly_sum({0.0, c(), c()});
    case 3: return LatencyFunction::poly_sum({0.0, 0.0, 0.0, c()});
    case 4: return LatencyFunction::constant(c());
    default: return LatencyFunction::poly_log_product({0.0, c()}, {1.0, 1.0});
  }
}

Rational random_weight(SplitMix64& rng) {
  switch (rng.below(3)) {
    case 0: return Rational(1);
    case 1: return Rational(1, 2);
    default: return Rational(2);
  }
}

}  // namespace

Game random_game(SplitMix64& rng, const RandomGameOptions& opts) {
  int n_players = 2 + rng.below(opts.max_players - 1);
  int n_res = 2 + rng.below(opts.max_resources - 1);

  std::vector<std::string> player_ids, resource_ids;
  std::vector<Rational> weights;
  for (int r = 0; r < n_res; ++r) resource_ids.push_back("r" + std::to_string(r + 1));

  std::vector<LatencyFunction> latency;
  if (opts.single_family) {
    LatencyFunction shared = random_latency(rng);
    latency.assign(n_res, shared);
  } else {
    for (int r = 0; r < n_res; ++r) latency.push_back(random_latency(rng));
  }

  std::vector<std::vector<std::vector<int>>> strategies;
  for (int p = 0; p < n_players; ++p) {
    player_ids.push_back("p" + std::to_string(p + 1));
    weights.push_back(opts.uniform_weights ? Rational(1) : random_weight(rng));
    int n_strats = 1 + rng.below(opts.max_strategies);
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> per_player;
    for (int s = 0; s < n_strats; ++s) {
      int mask = 1 + rng.below((1 << n_res) - 1);
      std::vector<int> strat;
      for (int r = 0; r < n_res; ++r)
        if (mask & (1 << r)) strat.push_back(r);
      if (seen.insert(strat).second) per_player.push_back(std::move(strat));
    }
    strategies.push_back(std::move(per_player));
  }

  return Game(std::move(player_ids), std::move(weights), std::move(resource_ids),
              std::move(strategies), std::move(latency));
}

StateProfile random_state(SplitMix64& rng, const Game& g) {
  StateProfile s(g.num_players());
  for (int p = 0; p < g.num_players(); ++p) s[p] = rng.below(g.strategy_count(p));
  return s;
}

std::string VerifySummary::text() const {
  std::string out = "checks=" + std::to_string(checks) + " failures=" + std::to_string(failures) + "\n";
  for (const auto& l : failure_lines) out += "FAIL " + l + "\n";
  if (!repro_path.empty()) out += "repro written to " + repro_path + "\n";
  out += failures == 0 ? "PASS\n" : "FAIL\n";
  return out;
}

namespace {

struct SuiteState {
  VerifySummary summary;

  void fail(const std::string& line, const Game* g, const StateProfile* s, const StateProfile* ref) {
    ++summary.failures;
    summary.failure_lines.push_back(line);
    if (summary.repro_path.empty() && g) {
      nlohmann::ordered_json repro;
      repro["game"] = game_to_json(*g);
      if (s) repro["state"] = state_to_json(*g, *s);
      if (ref) repro["ref"] = state_to_json(*g, *ref);
      repro["check"] = line;
      summary.repro_path = "verify_failure.json";
      std::ofstream out(summary.repro_path);
      out << repro.dump(2) << "\n";
    }
  }

  void check(bool ok, const std::string& line, const Game* g = nullptr, const StateProfile* s = nullptr,
             const StateProfile* ref = nullptr) {
    ++summary.checks;
    if (!ok) fail(line, g, s, ref);
  }
};

void check_ratio_identity(SuiteState& st, const Game& g, SplitMix64& rng, long idx) {
  StateProfile s = random_state(rng, g);
  StateProfile ref = random_state(rng, g);

  double sc = social_cost(g, s);
  double weighted = 0.0;
  for (int p = 0; p < g.num_players(); ++p) weighted += g.weights[p].to_double() * player_cost(g, s, p);
  st.check(std::fabs(sc - weighted) <= 1e-9 * std::max(1.0, sc),
           "weighted player-cost sum != social cost @" + std::to_string(idx), &g, &s, &ref);

  ClassTable table = build_classes(g, s, ref);
  st.check(std::fabs(lambda_sum(table) - 1.0) <= 1e-12,
           "lambda mass != 1 @" + std::to_string(idx), &g, &s, &ref);
  double h = coordination_ratio_decomposed(table);
  double direct = social_cost(g, s) / social_cost(g, ref);
  st.check(std::fabs(h - direct) <= 1e-9 * std::max(1.0, direct),
           "decomposed ratio != SC(S)/SC(ref) @" + std::to_string(idx), &g, &s, &ref);
}

void check_equilibrium_tables(SuiteState& st, const Game& g, long idx) {
  unsigned long long total = 0;
  if (!g.profile_count(100000, total)) return;
  auto nash = enumerate_nash(g);
  if (nash.empty()) return;  // no pure equilibrium: nothing to constrain
  auto [opt, opt_cost] = optimal_state(g);
  (void)opt_cost;
  for (const auto& s : nash) {
    ClassTable table = build_classes(g, s, opt, true);
    ConstraintCheck c = check_equilibrium_constraint(table);
    st.check(c.holds, "equilibrium load constraint violated @" + std::to_string(idx), &g, &s, &opt);
  }
}

void check_generator(SuiteState& st, SplitMix64& rng, long idx) {
  static const Rational w_pool[] = {Rational(1), Rational(1, 2), Rational(2)};
  long zeta1 = 1 + rng.below(4);
  long kappa1 = 1 + rng.below(2);
  long n = zeta1 * kappa1;
  std::vector<long> divs;
  for (long z = 1; z <= n; ++z)
    if (n % z == 0) divs.push_back(z);
  long zeta2 = divs[rng.below(static_cast<int>(divs.size()))];
  long kappa2 = n / zeta2;
  long alpha = rng.below(static_cast<int>(zeta1 + 1));
  long gamma = rng.below(static_cast<int>(zeta1 - alpha + 1));
  long beta = rng.below(static_cast<int>(zeta2 + 1));
  long delta = rng.below(static_cast<int>(zeta2 - beta + 1));
  if (alpha + beta < 1) alpha = 1;
  if (gamma + delta < 1) {
    if (zeta1 - alpha > 0)
      gamma = 1;
    else
      delta = 1;
  }
  if (zeta2 < beta + delta) return;  // delta bump may not fit, skip
  LBParams params{alpha, beta,   gamma,  delta,          zeta1,
                  zeta2, kappa1, kappa2, w_pool[rng.below(3)], random_latency(rng)};
  try {
    validate(params);
  } catch (const InvalidParams&) {
    return;
  }

  LBInstance inst = build(params);  // internal congestion identities are exact-checked
  LBVerify v = verify_nash(inst);
  st.check(v.nash == v.analytic_nash,
           "closed-form and game-level equilibrium checks disagree @" + std::to_string(idx),
           &inst.game, &inst.state_s, &inst.state_sbar);
  st.check(std::fabs(inst.lambda1 + inst.lambda2 - 1.0) <= 1e-12,
           "lambda1+lambda2 != 1 @" + std::to_string(idx), &inst.game, nullptr, nullptr);

  unsigned long long total = 0;
  if (v.nash && inst.game.profile_count(1024, total)) {
    auto nash = enumerate_nash(inst.game);
    bool found = std::find(nash.begin(), nash.end(), inst.state_s) != nash.end();
    st.check(found, "generated equilibrium missing from exhaustive enumeration @" + std::to_string(idx),
             &inst.game, &inst.state_s, nullptr);
  }
}

}  // namespace

VerifySummary verify_suite(const std::string& corpus_dir, uint64_t seed, long count) {
  SuiteState st;

  if (!corpus_dir.empty()) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir))
      if (entry.path().extension() == ".json") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      Game g = load_game_file(path);  // ParseError propagates with the file name
      SplitMix64 rng(seed);
      check_ratio_identity(st, g, rng, -1);
      check_equilibrium_tables(st, g, -1);
    }
  }

  for (long i = 0; i < count; ++i) {
    SplitMix64 rng(seed + static_cast<uint64_t>(i) * 0x9e3779b97f4a7c15ULL);
    Game g = random_game(rng);
    check_ratio_identity(st, g, rng, i);
    check_equilibrium_tables(st, g, i);
    if (i % 5 == 0) check_generator(st, rng, i);
  }
  return st.summary;
}

}  // namespace anarchia
