#include "anarchia/game_io.hpp"

#include <fstream>
#include <map>

namespace anarchia {

namespace {

Rational weight_from_json(const nlohmann::json& v) {
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
    return Rational::parse(buf);
  }
  throw ParseError("weight must be a string or number");
}

}  // namespace

Game game_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::string> player_ids;
    std::vector<Rational> weights;
    for (const auto& p : j.at("players")) {
      player_ids.push_back(p.at("id").get<std::string>());
      weights.push_back(weight_from_json(p.at("weight")));
    }

    std::vector<std::string> resource_ids = j.at("resources").get<std::vector<std::string>>();
    std::map<std::string, int> rindex;
    for (int r = 0; r < static_cast<int>(resource_ids.size()); ++r) rindex[resource_ids[r]] = r;

    std::vector<std::vector<std::vector<int>>> strategies;
    const auto& jstrat = j.at("strategies");
    for (const auto& pid : player_ids) {
      if (!jstrat.contains(pid)) throw ParseError("missing strategies for player " + pid);
      std::vector<std::vector<int>> per_player;
      for (const auto& s : jstrat.at(pid)) {
        std::vector<int> strat;
        for (const auto& rid : s) {
          auto it = rindex.find(rid.get<std::string>());
          if (it == rindex.end()) throw ParseError("strategy uses unknown resource " + rid.get<std::string>());
          strat.push_back(it->second);
        }
        per_player.push_back(std::move(strat));
      }
      strategies.push_back(std::move(per_player));
    }

    std::vector<LatencyFunction> latency;
    const auto& jlat = j.at("latency");
    for (const auto& rid : resource_ids) {
      if (!jlat.contains(rid)) throw ParseError("missing latency for resource " + rid);
      const auto& spec = jlat.at(rid);
      latency.push_back(LatencyFunction::from_spec(spec.at("family").get<std::string>(),
                                                   spec.value("params", std::vector<double>{})));
    }

    return Game(std::move(player_ids), std::move(weights), std::move(resource_ids),
                std::move(strategies), std::move(latency));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad game file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad game file: ") + e.what());
  }
}

Game load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return game_from_json(j);
}

nlohmann::ordered_json game_to_json(const Game& g) {
  nlohmann::ordered_json out;
  out["players"] = nlohmann::ordered_json::array();
  for (int p = 0; p < g.num_players(); ++p)
    out["players"].push_back({{"id", g.player_ids[p]}, {"weight", g.weights[p].str()}});
  out["resources"] = g.resource_ids;
  nlohmann::ordered_json strat;
  for (int p = 0; p < g.num_players(); ++p) {
    nlohmann::ordered_json per_player = nlohmann::ordered_json::array();
    for (const auto& s : g.strategies[p]) {
      nlohmann::ordered_json names = nlohmann::ordered_json::array();
      for (int r : s) names.push_back(g.resource_ids[r]);
      per_player.push_back(names);
    }
    strat[g.player_ids[p]] = per_player;
  }
  out["strategies"] = strat;
  nlohmann::ordered_json lat;
  for (int r = 0; r < g.num_resources(); ++r)
    lat[g.resource_ids[r]] = {{"family", g.latency[r].spec_family()},
                              {"params", g.latency[r].spec_params()}};
  out["latency"] = lat;
  return out;
}

nlohmann::ordered_json state_to_json(const Game& g, const StateProfile& s) {
  nlohmann::ordered_json out;
  for (int p = 0; p < g.num_players(); ++p) out[g.player_ids[p]] = s[p];
  return out;
}

StateProfile state_from_json(const Game& g, const nlohmann::json& j) {
  StateProfile s(g.num_players(), 0);
  for (int p = 0; p < g.num_players(); ++p) {
    if (!j.contains(g.player_ids[p])) throw ParseError("state missing player " + g.player_ids[p]);
    s[p] = j.at(g.player_ids[p]).get<int>();
  }
  if (!g.valid_state(s)) throw ParseError("state has out-of-range strategy index");
  return s;
}

}  // namespace anarchia
