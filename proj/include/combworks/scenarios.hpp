#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "combworks/process.hpp"
#include "combworks/thermo.hpp"

namespace combworks {

/// Registry entry: a named process builder parametrized by the qubit gap E
/// and temperature T, with closed-form reference values evaluated at runtime
/// and a note on where each value comes from.
struct Scenario {
  std::string name;
  std::string description;
  std::function<ProcessTensor(double energy, double temperature)> build;
  // Closed-form reference values (id -> value at (E, T)).
  std::map<std::string, std::function<double(double, double)>> expected;
};

const std::vector<Scenario>& scenario_registry();

struct ScenarioRequest {
  std::string name;
  double energy = 1.0;
  double temperature = 1.0;
  int steps = 2;            // for the random/saturating families
  int env_dim = 2;          // for dilation-random
  std::uint64_t seed = 42;  // for the random families
  bool thermal_env = true;  // dilation-random environment preparation
};

/// Builds a registered scenario or one of the random families
/// (markov-random, dilation-random). Throws on unknown names.
ProcessTensor build_scenario(const ScenarioRequest& req);

struct RandomProcessConfig {
  int steps = 2;
  int sys_dim = 2;
  int env_dim = 2;
  std::uint64_t seed = 42;
  bool thermal_env = true;
  double energy = 1.0;
  double temperature = 1.0;
};

/// Seeded random dilation process: Haar step unitaries from QR of Gaussian
/// matrices, thermal (or Haar-random pure) environment preparation.
ProcessTensor random_process(const RandomProcessConfig& cfg);

/// Seeded random Markov product of Stinespring-random channels.
ProcessTensor random_markov_process(int steps, int sys_dim, std::uint64_t seed);

}  // namespace combworks
