#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anarchia/game.hpp"

namespace anarchia {

// Platform-stable generator so seeded runs are byte-identical everywhere.
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};

struct RandomGameOptions {
  int max_players = 4;
  int max_resources = 4;
  int max_strategies = 3;
  bool uniform_weights = false;   // all weights 1
  bool single_family = false;     // one cost curve shared by all resources
};

// Small polynomially-bounded game; exhaustive oracles stay fast.
Game random_game(SplitMix64& rng, const RandomGameOptions& opts = {});

StateProfile random_state(SplitMix64& rng, const Game& g);

struct VerifySummary {
  long checks = 0;
  long failures = 0;
  std::vector<std::string> failure_lines;
  std::string repro_path;  // first failing instance, written as JSON

  std::string text() const;
};

// Seeded property sweep: the decomposed-ratio identity, the equilibrium
// load constraint against the exact optimum, and the cyclic-family builder
// checks, plus a parse/brute pass over the fixed corpus directory.
VerifySummary verify_suite(const std::string& corpus_dir, uint64_t seed, long count);

}  // namespace anarchia
