#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "anarchia/game.hpp"

namespace anarchia {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Game file format:
//   {"players":[{"id":"p1","weight":"1/2"}, ...],
//    "resources":["r1", ...],
//    "strategies":{"p1":[["r1","r2"],["r3"]], ...},
//    "latency":{"r1":{"family":"poly_sum","params":[0,1]}, ...}}
// Weights are decimal or "num/den" strings (plain numbers also accepted).
Game game_from_json(const nlohmann::json& j);
Game load_game_file(const std::string& path);

nlohmann::ordered_json game_to_json(const Game& g);

nlohmann::ordered_json state_to_json(const Game& g, const StateProfile& s);
StateProfile state_from_json(const Game& g, const nlohmann::json& j);

}  // namespace anarchia
