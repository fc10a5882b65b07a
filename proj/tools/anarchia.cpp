// Command-line front end: analyze latency curves, brute-force small games,
// generate lower-bound instances, run player-count sweeps, and run the
// seeded verification suite.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "anarchia/bounds.hpp"
#include "anarchia/corpus.hpp"
#include "anarchia/decomposition.hpp"
#include "anarchia/equilibrium.hpp"
#include "anarchia/game_io.hpp"
#include "anarchia/lower_bound.hpp"

namespace {

using anarchia::BoundValue;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitCapExceeded = 3;
constexpr int kExitNoEquilibrium = 4;

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("ANARCHIA_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

std::vector<double> parse_params(const std::string& csv, const std::string& family) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stod(tok));
  if (out.empty() && family == "poly_sum") return {0.0, 1.0};  // default: l(x) = x
  return out;
}

ordered_json bound_value_json(const BoundValue& v) {
  if (v.infinite || v.log_value > 700.0) return "inf";
  if (std::isinf(v.log_value)) return "none";  // empty maximization, e.g. no triples exist
  return std::exp(v.log_value);
}

ordered_json witness_json(const BoundValue& v) {
  return {{"j", v.witness.j},
          {"t", v.witness.t},
          {"i", v.witness.i},
          {"t_nearest_achievable", v.witness.t_nearest_achievable}};
}

std::string format_ratio(double r) {
  if (std::isinf(r)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", r);
  return buf;
}

int cmd_analyze(const std::string& family, const std::string& params_csv, const std::string& w_str,
                double tmax, int grid) {
  anarchia::LatencyFunction f =
      anarchia::LatencyFunction::from_spec(family, parse_params(params_csv, family));
  anarchia::Rational w = anarchia::Rational::parse(w_str);

  anarchia::SearchDomain dom;
  dom.t_max = tmax;
  dom.grid_points = grid;
  anarchia::BoundReport rep = anarchia::analyze(f, w.to_double(), dom);

  ordered_json out;
  out["family"] = family;
  out["params"] = f.spec_params();
  out["w"] = w.str();
  out["g_star"] = bound_value_json(rep.g_star);
  out["g_hat"] = bound_value_json(rep.g_hat);
  out["poa_bound"] = bound_value_json(rep.poa);
  out["verdict"] = rep.verdict();
  out["witnesses"] = {{"g_star", witness_json(rep.g_star)},
                      {"g_hat", witness_json(rep.g_hat)},
                      {"poa_bound", witness_json(rep.poa)}};
  ordered_json triples = ordered_json::array();
  for (const auto& t : rep.triples)
    triples.push_back({{"x", t.x}, {"y", t.y}, {"z", t.z}, {"residual", t.residual}});
  out["triples"] = triples;
  if (rep.poa.infinite) {
    ordered_json trace = ordered_json::array();
    for (const auto& [cap, lv] : rep.poa.growth_trace)
      trace.push_back({{"t_max", cap}, {"log_max", lv}});
    out["growth_trace"] = trace;
  }
  out["degenerate_cells"] = rep.degenerate_cells;
  out["notes"] = {{"z_policy", "z fixed at the weight bound w (objective non-decreasing in z)"},
                  {"t_policy", "t ranges over free positive reals"}};
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_brute(const std::string& path, unsigned long long cap) {
  anarchia::Game g = anarchia::load_game_file(path);
  anarchia::EquilibriumReport rep;
  try {
    rep = anarchia::price_of_anarchy(g, cap);
  } catch (const anarchia::CapExceeded&) {
    std::cerr << "profile space exceeds --cap\n";
    return kExitCapExceeded;
  } catch (const anarchia::NoEquilibrium&) {
    std::cerr << "no pure Nash equilibrium\n";
    return kExitNoEquilibrium;
  }

  ordered_json out;
  out["nash_count"] = rep.nash_states.size();
  ordered_json nash = ordered_json::array();
  for (const auto& s : rep.nash_states) nash.push_back(anarchia::state_to_json(g, s));
  out["nash_states"] = nash;
  out["optimal_state"] = anarchia::state_to_json(g, rep.optimal_state);
  out["optimal_cost"] = rep.optimal_cost;
  out["worst_nash_state"] = anarchia::state_to_json(g, rep.worst_nash_state);
  out["worst_nash_cost"] = rep.worst_nash_cost;
  out["poa"] = rep.poa;
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_generate(const std::string& family, const std::string& params_csv, const std::string& w_str,
                 long alpha, long beta, long gamma, long delta, long zeta1, long zeta2, long kappa1,
                 long kappa2, const std::string& out_path) {
  anarchia::LBParams params{alpha,
                            beta,
                            gamma,
                            delta,
                            zeta1,
                            zeta2,
                            kappa1,
                            kappa2,
                            anarchia::Rational::parse(w_str),
                            anarchia::LatencyFunction::from_spec(family, parse_params(params_csv, family))};
  anarchia::LBInstance inst = anarchia::build(params);
  anarchia::LBVerify v = anarchia::verify_nash(inst);

  ordered_json game_json = anarchia::game_to_json(inst.game);
  ordered_json sidecar;
  sidecar["state_s"] = anarchia::state_to_json(inst.game, inst.state_s);
  sidecar["state_sbar"] = anarchia::state_to_json(inst.game, inst.state_sbar);
  sidecar["j1"] = inst.j1.str();
  sidecar["j2"] = inst.j2.str();
  sidecar["t1"] = inst.t1.str();
  sidecar["t2"] = inst.t2.str();
  sidecar["lambda1"] = inst.lambda1;
  sidecar["lambda2"] = inst.lambda2;
  sidecar["nash"] = v.nash;
  sidecar["worst_slack"] = v.worst_slack;
  sidecar["ratio"] = v.nash ? format_ratio(anarchia::ratio_lower_bound(inst)) : "n/a";

  if (out_path.empty()) {
    ordered_json combined = {{"game", game_json}, {"sidecar", sidecar}};
    std::cout << combined.dump(2) << "\n";
  } else {
    std::ofstream game_out(out_path);
    game_out << game_json.dump(2) << "\n";
    std::ofstream side_out(out_path + ".sidecar.json");
    side_out << sidecar.dump(2) << "\n";
    std::cout << "wrote " << out_path << " and " << out_path << ".sidecar.json\n";
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw anarchia::ParseError("cannot open " + config_path);
  nlohmann::json cfg;
  in >> cfg;

  anarchia::LatencyFunction f = anarchia::LatencyFunction::from_spec(
      cfg.at("latency").at("family").get<std::string>(),
      cfg.at("latency").value("params", std::vector<double>{}));
  anarchia::Rational w = cfg.at("w").is_string()
                             ? anarchia::Rational::parse(cfg.at("w").get<std::string>())
                             : anarchia::Rational(cfg.at("w").get<long long>());
  std::vector<long> n_values = cfg.at("n_values").get<std::vector<long>>();
  long budget = cfg.value("budget", n_values.empty() ? 0L : n_values.back());
  for (size_t k = 1; k < n_values.size(); ++k)
    if (n_values[k] <= n_values[k - 1])
      throw anarchia::ParseError("n_values must be strictly increasing");
  if (n_values.empty() || budget < n_values.back())
    throw anarchia::ParseError("budget must cover max(n_values)");
  std::string out_path = cfg.value("out", std::string{});

  std::ostringstream csv;
  csv << "n,best_ratio,predicted_lb,poa_bound,params\n";
  for (long n : n_values) {
    anarchia::LBSearchResult res = anarchia::search_params(f, w, n);
    anarchia::LBInstance inst = anarchia::build(res.params);

    double t1 = inst.t1.to_double(), t2 = inst.t2.to_double();
    double arg;
    switch (f.class_tag()) {
      case anarchia::LatencyClass::L1:
        arg = std::max(w.to_double(), t1 > 0 ? t1 : t2);
        break;
      case anarchia::LatencyClass::L2:
        arg = std::max({inst.j1.to_double(), inst.j2.to_double(), std::exp(1.0)});
        break;
      default:
        arg = 1.0;
    }
    double predicted = anarchia::predict_scaling(f, w.to_double(), {arg}).front().second;

    anarchia::SearchDomain dom;
    dom.t_max = std::max(4.0, static_cast<double>(n) * w.to_double());
    dom.grid_points = 128;
    BoundValue poa = anarchia::poa_bound(f, w.to_double(), dom);
    double poa_at_domain = poa.log_value > 700.0 ? INFINITY : std::exp(poa.log_value);

    csv << n << ',' << format_ratio(res.ratio) << ',' << format_ratio(predicted) << ','
        << format_ratio(poa_at_domain) << ',' << res.params.summary() << '\n';
  }

  std::cout << csv.str();
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << csv.str();
  }
  return kExitOk;
}

// One class-table CSV block per corpus game: worst equilibrium against the
// exact optimum when an equilibrium exists, otherwise the first profile.
void emit_corpus_tables(const std::string& corpus_dir, const std::string& out_path) {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(corpus_dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  std::ofstream out(out_path);
  for (const auto& path : files) {
    anarchia::Game g = anarchia::load_game_file(path);
    auto [opt, opt_cost] = anarchia::optimal_state(g);
    (void)opt_cost;
    anarchia::StateProfile state(g.num_players(), 0);
    bool have_nash = false;
    try {
      anarchia::EquilibriumReport rep = anarchia::price_of_anarchy(g);
      state = rep.worst_nash_state;
      have_nash = true;
    } catch (const anarchia::NoEquilibrium&) {
    }
    out << "# " << path << (have_nash ? " (worst equilibrium vs optimum)" : " (no equilibrium)")
        << "\n";
    anarchia::ClassTable table = anarchia::build_classes(g, state, opt, true);
    anarchia::write_class_table_csv(out, table);
  }
}

int cmd_verify(const std::string& corpus_dir, uint64_t seed, long count,
               const std::string& tables_path) {
  anarchia::VerifySummary summary = anarchia::verify_suite(corpus_dir, seed, count);
  if (!tables_path.empty() && !corpus_dir.empty()) emit_corpus_tables(corpus_dir, tables_path);
  std::cout << summary.text();
  return summary.failures == 0 ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"weighted congestion games: equilibria, price of anarchy, growth bounds"};
  app.require_subcommand(1);

  std::string family = "poly_sum", params_csv = "", w_str = "1";
  double tmax = 64.0;
  int grid = 192;
  auto* analyze = app.add_subcommand("analyze", "bound report for one latency curve");
  analyze->add_option("--family", family, "latency family name");
  analyze->add_option("--params", params_csv, "comma-separated parameters (poly_sum defaults to 0,1)");
  analyze->add_option("--w", w_str, "maximum player weight (rational)");
  analyze->add_option("--tmax", tmax, "search domain cap");
  analyze->add_option("--grid", grid, "grid points per axis");

  std::string game_path;
  unsigned long long cap = anarchia::kDefaultCap;
  auto* brute = app.add_subcommand("brute", "exhaustive equilibrium report for a game file");
  brute->add_option("game", game_path, "game JSON file")->required();
  brute->add_option("--cap", cap, "profile-count cap");

  long alpha = 1, beta = 0, gamma = 0, delta = 1, zeta1 = 3, zeta2 = 3, kappa1 = 1, kappa2 = 1;
  std::string out_path;
  auto* generate = app.add_subcommand("generate", "build a cyclic two-strategy instance");
  generate->add_option("--family", family, "latency family name");
  generate->add_option("--params", params_csv, "comma-separated parameters");
  generate->add_option("--w", w_str, "player weight (rational)");
  generate->add_option("--alpha", alpha, "");
  generate->add_option("--beta", beta, "");
  generate->add_option("--gamma", gamma, "");
  generate->add_option("--delta", delta, "");
  generate->add_option("--zeta1", zeta1, "");
  generate->add_option("--zeta2", zeta2, "");
  generate->add_option("--kappa1", kappa1, "");
  generate->add_option("--kappa2", kappa2, "");
  generate->add_option("--out", out_path, "output file (sidecar written alongside)");

  std::string config_path;
  auto* sweep = app.add_subcommand("sweep", "best lower-bound ratio as players increase");
  sweep->add_option("config", config_path, "sweep config JSON")->required();

  std::string corpus_dir, tables_path;
  uint64_t seed = 42;
  long count = 500;
  auto* verify = app.add_subcommand("verify", "seeded property suite");
  verify->add_option("--corpus", corpus_dir, "directory of fixed game files");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--count", count, "random instances");
  verify->add_option("--emit-tables", tables_path, "write per-resource-class CSV for corpus games");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(family, params_csv, w_str, tmax, grid);
    if (app.got_subcommand(brute)) return cmd_brute(game_path, cap);
    if (app.got_subcommand(generate))
      return cmd_generate(family, params_csv, w_str, alpha, beta, gamma, delta, zeta1, zeta2, kappa1,
                          kappa2, out_path);
    if (app.got_subcommand(sweep)) return cmd_sweep(config_path);
    if (app.got_subcommand(verify)) return cmd_verify(corpus_dir, seed, count, tables_path);
  } catch (const anarchia::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPropertyFailure;
  }
  return kExitOk;
}
