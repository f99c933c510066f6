#include "combworks/scenarios.hpp"

#include <cmath>
#include <stdexcept>

#include "combworks/control_comb.hpp"
#include "combworks/rng.hpp"

namespace combworks {

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

// CNOT with the control on the second slot (environment) and target on the
// first (system), in big-endian (system, environment) indexing.
ComplexMatrix cnot_env_control() {
  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  // |s,e>: e = 0 leaves s, e = 1 flips s.
  u(0, 0) = 1;  // |00> -> |00>
  u(3, 1) = 1;  // |01> -> |11>
  u(2, 2) = 1;  // |10> -> |10>
  u(1, 3) = 1;  // |11> -> |01>
  return u;
}

double thermal_entropy(double energy, double temperature) {
  const double w = std::exp(-energy / temperature);
  const double z = 1.0 + w;
  const double p0 = 1.0 / z, p1 = w / z;
  return -p0 * std::log(p0) - p1 * std::log(p1);
}

double log_z(double energy, double temperature) {
  return std::log(1.0 + std::exp(-energy / temperature));
}

ProcessTensor build_swap_memory(double energy, double temperature) {
  // Qubit environment prepared thermally; step 1 swaps system and
  // environment, step 2 flips the environment and swaps again.
  Dilation dil;
  dil.env_dim = 2;
  dil.env_init = gibbs_state(Hamiltonian::qubit(energy), temperature);
  const ComplexMatrix swap = swap_operator(2);
  const ComplexMatrix flip_env = tensor_product(ComplexMatrix::Identity(2, 2), pauli_x());
  dil.step_unitaries = {swap, swap * flip_env};
  return ProcessTensor::from_dilation(std::move(dil), 2, 2);
}

ProcessTensor build_pure_collision(double energy, double temperature) {
  // Two environment qubits jointly pure but locally thermal; each step swaps
  // the system with one of them.
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = 1.0;
  psi(3) = std::exp(-energy / (2.0 * temperature));
  Dilation dil;
  dil.env_dim = 4;
  dil.env_init = DensityMatrix::pure(psi);
  const ComplexMatrix swap = swap_operator(2);
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  // System occupies slot 0; the environment qubits are slots 1 and 2 of the
  // (system, env1, env2) product. Unitaries act on (system, env) as a whole.
  const ComplexMatrix swap_e1 = embed_on_slots(swap, {2, 2, 2}, {0, 1});
  const ComplexMatrix swap_e2 = embed_on_slots(swap, {2, 2, 2}, {0, 2});
  (void)id2;
  dil.step_unitaries = {swap_e1, swap_e2};
  return ProcessTensor::from_dilation(std::move(dil), 2, 2);
}

ProcessTensor build_cnot_memory(double energy, double temperature) {
  // Thermal qubit environment controlling CNOTs on the system; the second
  // step appends a system flip. Feeding the first output straight back in
  // uncomputes the correlation and leaves the flipped input.
  Dilation dil;
  dil.env_dim = 2;
  dil.env_init = gibbs_state(Hamiltonian::qubit(energy), temperature);
  const ComplexMatrix cnot = cnot_env_control();
  const ComplexMatrix flip_sys = tensor_product(pauli_x(), ComplexMatrix::Identity(2, 2));
  dil.step_unitaries = {cnot, flip_sys * cnot};
  return ProcessTensor::from_dilation(std::move(dil), 2, 2);
}

ProcessTensor build_top_level_saturating(double energy, double temperature, int steps) {
  (void)temperature;
  std::vector<QuantumChannel> channels(
      static_cast<size_t>(steps),
      QuantumChannel::fixed_output(2, DensityMatrix::basis_state(2, 1)));
  (void)energy;
  return ProcessTensor::markov_product(std::move(channels));
}

}  // namespace

const std::vector<Scenario>& scenario_registry() {
  static const std::vector<Scenario> registry = [] {
    std::vector<Scenario> r;

    Scenario a;
    a.name = "fig2a";
    a.description =
        "swap-memory process: thermal qubit environment, SWAP then flip-and-SWAP; "
        "work investment pays off at the second step";
    a.build = build_swap_memory;
    a.expected["sequential"] = [](double e, double t) {
      // kT S(X gamma X || gamma) = E (1 - exp(-E/kT)) / (1 + exp(-E/kT))
      const double w = std::exp(-e / t);
      return e * (1.0 - w) / (1.0 + w);
    };
    a.expected["joint"] = [](double e, double) { return e; };
    r.push_back(std::move(a));

    Scenario b;
    b.name = "fig2b";
    b.description =
        "collision with a globally pure, locally thermal environment pair; all work "
        "sits in the cross-time output correlations";
    b.build = build_pure_collision;
    b.expected["sequential"] = [](double, double) { return 0.0; };
    b.expected["joint"] = [](double, double) { return 0.0; };
    b.expected["global"] = [](double e, double t) { return 2.0 * t * thermal_entropy(e, t); };
    b.expected["nm"] = [](double e, double t) { return 2.0 * thermal_entropy(e, t); };
    r.push_back(std::move(b));

    Scenario c;
    c.name = "fig2c";
    c.description =
        "environment-controlled CNOT memory; feeding outputs straight through "
        "uncomputes the correlations and beats any storage strategy";
    c.build = build_cnot_memory;
    c.expected["comb_lower"] = [](double e, double) { return e; };
    c.expected["global_cap"] = [](double e, double t) {
      const double w = std::exp(-e / t);
      return 2.0 * e * w / (1.0 + w);  // 2 gamma_1 E
    };
    r.push_back(std::move(c));

    Scenario s;
    s.name = "markov-saturating";
    s.description =
        "independent channels with the top energy eigenstate as fixed output; "
        "sequential extraction with free thermal inputs reaches the global cap";
    s.build = [](double e, double t) { return build_top_level_saturating(e, t, 2); };
    s.expected["sequential"] = [](double e, double t) { return 2.0 * (e + t * log_z(e, t)); };
    r.push_back(std::move(s));

    return r;
  }();
  return registry;
}

ProcessTensor random_process(const RandomProcessConfig& cfg) {
  if (cfg.steps < 1 || cfg.sys_dim < 1 || cfg.env_dim < 1)
    throw std::invalid_argument("random_process: dims must be >= 1");
  Dilation dil;
  dil.env_dim = cfg.env_dim;
  if (cfg.thermal_env) {
    dil.env_init = cfg.env_dim == 1
                       ? DensityMatrix::maximally_mixed(1)
                       : gibbs_state(Hamiltonian::diagonal([&] {
                           std::vector<double> lv(cfg.env_dim);
                           for (int i = 0; i < cfg.env_dim; ++i)
                             lv[i] = cfg.energy * i;
                           return lv;
                         }()),
                                     cfg.temperature);
  } else {
    Rng rng(cfg.seed ^ 0xabcdef12345ULL);
    ComplexVector psi(cfg.env_dim);
    for (int i = 0; i < cfg.env_dim; ++i) psi(i) = Complex(rng.gaussian(), rng.gaussian());
    dil.env_init = DensityMatrix::pure(psi);
  }
  for (int k = 0; k < cfg.steps; ++k)
    dil.step_unitaries.push_back(
        random_unitary(cfg.sys_dim * cfg.env_dim, cfg.seed * 1000003ULL + k));
  return ProcessTensor::from_dilation(std::move(dil), cfg.steps, cfg.sys_dim);
}

ProcessTensor random_markov_process(int steps, int sys_dim, std::uint64_t seed) {
  std::vector<QuantumChannel> channels;
  for (int k = 0; k < steps; ++k)
    channels.push_back(QuantumChannel::random(sys_dim, sys_dim, seed * 7919ULL + k));
  return ProcessTensor::markov_product(std::move(channels));
}

ProcessTensor build_scenario(const ScenarioRequest& req) {
  for (const auto& s : scenario_registry())
    if (s.name == req.name) return s.build(req.energy, req.temperature);
  if (req.name == "markov-random")
    return random_markov_process(req.steps, 2, req.seed);
  if (req.name == "dilation-random") {
    RandomProcessConfig cfg;
    cfg.steps = req.steps;
    cfg.sys_dim = 2;
    cfg.env_dim = req.env_dim;
    cfg.seed = req.seed;
    cfg.thermal_env = req.thermal_env;
    cfg.energy = req.energy;
    cfg.temperature = req.temperature;
    return random_process(cfg);
  }
  throw std::invalid_argument("unknown scenario '" + req.name + "'");
}

}  // namespace combworks
