// combworks command-line interface: scenario work reports, non-Markovianity
// brackets, bound verification, random process generation, and process-file
// export in the combworks-process-v1 schema.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "combworks/verify.hpp"

namespace {

using namespace combworks;

struct CommonFlags {
  double energy = 1.0;
  double temperature = 1.0;
  int steps = 2;
  int env_dim = 2;
  std::uint64_t seed = 42;
  int restarts = 32;
  double tol = 1e-6;
  std::string format = "json";
  int ancilla_dim = 0;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--energy", f.energy, "qubit energy gap E");
  cmd->add_option("--temperature", f.temperature, "bath temperature T (k = 1)");
  cmd->add_option("--steps", f.steps, "step count for random scenario families");
  cmd->add_option("--env-dim", f.env_dim, "environment dimension for dilation-random");
  cmd->add_option("--seed", f.seed, "deterministic seed");
  cmd->add_option("--restarts", f.restarts, "optimizer restarts");
  cmd->add_option("--tol", f.tol, "reported optimizer tolerance");
  cmd->add_option("--format", f.format, "report format: json or csv");
  cmd->add_option("--ancilla-dim", f.ancilla_dim, "control-comb ancilla dimension (0 = d^2)");
  cmd->add_option("--out", f.out_path, "write the report to this file instead of stdout");
}

AnalysisOptions make_options(const CommonFlags& f) {
  AnalysisOptions o;
  o.opt.restarts = f.restarts;
  o.opt.seed = f.seed;
  o.opt.opt_tol = f.tol;
  o.nm.opt = o.opt;
  o.nm.ancilla_dim = f.ancilla_dim;
  return o;
}

struct ResolvedTarget {
  ProcessTensor process;
  ThermalContext ctx;
  std::string name;
  bool is_scenario = false;
};

bool known_scenario(const std::string& name) {
  for (const auto& s : scenario_registry())
    if (s.name == name) return true;
  return name == "markov-random" || name == "dilation-random";
}

ResolvedTarget resolve_target(const std::string& target, const CommonFlags& f) {
  if (known_scenario(target)) {
    ScenarioRequest req;
    req.name = target;
    req.energy = f.energy;
    req.temperature = f.temperature;
    req.steps = f.steps;
    req.env_dim = f.env_dim;
    req.seed = f.seed;
    return ResolvedTarget{build_scenario(req),
                          ThermalContext(Hamiltonian::qubit(f.energy), f.temperature), target,
                          true};
  }
  std::ifstream in(target);
  if (!in) throw std::runtime_error("target '" + target + "' is neither a scenario nor a file");
  std::stringstream buf;
  buf << in.rdbuf();
  ParsedProcess parsed = parse_process(buf.str());
  Hamiltonian h = parsed.metadata.hamiltonian_diag.empty()
                      ? Hamiltonian::qubit(f.energy)
                      : Hamiltonian::diagonal(parsed.metadata.hamiltonian_diag);
  const double temperature =
      parsed.metadata.temperature > 0 ? parsed.metadata.temperature : f.temperature;
  return ResolvedTarget{std::move(parsed.process), ThermalContext(std::move(h), temperature),
                        parsed.metadata.name.empty() ? target : parsed.metadata.name, false};
}

void write_out(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

ProcessMetadata metadata_for(const ResolvedTarget& t, const CommonFlags& f) {
  ProcessMetadata m;
  m.name = t.name;
  m.hamiltonian_diag = {0.0, f.energy};
  m.temperature = f.temperature;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multitime quantum process work extraction and non-Markovianity toolkit"};
  app.set_config("--config", "", "key=value configuration file (flags override)");
  app.require_subcommand(1);

  CommonFlags f;
  std::string target;

  auto* work = app.add_subcommand("work", "protocol ladder and gap report for a target");
  work->add_option("target", target, "scenario name or process file")->required();
  add_common(work, f);

  auto* nm = app.add_subcommand("nm", "non-Markovianity bracket for a target");
  nm->add_option("target", target, "scenario name or process file")->required();
  add_common(nm, f);

  auto* verify = app.add_subcommand("verify", "run the bound verification suite");
  verify->add_option("target", target, "scenario name or process file")->required();
  add_common(verify, f);

  auto* random = app.add_subcommand("random", "generate a seeded random dilation process");
  add_common(random, f);

  auto* export_cmd = app.add_subcommand("export", "serialize a scenario to a process file");
  export_cmd->add_option("target", target, "scenario name")->required();
  add_common(export_cmd, f);

  CLI11_PARSE(app, argc, argv);

  try {
    if (random->parsed()) {
      RandomProcessConfig cfg;
      cfg.steps = f.steps;
      cfg.env_dim = f.env_dim;
      cfg.seed = f.seed;
      cfg.energy = f.energy;
      cfg.temperature = f.temperature;
      const ProcessTensor p = random_process(cfg);
      ProcessMetadata meta;
      meta.name = "dilation-random";
      meta.hamiltonian_diag = {0.0, f.energy};
      meta.temperature = f.temperature;
      write_out(serialize_process(p, meta), f.out_path);
      return 0;
    }

    const ResolvedTarget t = resolve_target(target, f);
    const AnalysisOptions options = make_options(f);
    const ReportFormat format = parse_format(f.format);

    if (work->parsed()) {
      const ProcessAnalysis a = analyze_process(t.process, t.ctx, options);
      write_out(emit_analysis(a, t.name, format), f.out_path);
      return 0;
    }
    if (nm->parsed()) {
      const NMBracket bracket = nm_bracket(t.process, t.ctx, options.nm);
      write_out(emit_nm(bracket, t.name, format), f.out_path);
      return 0;
    }
    if (verify->parsed()) {
      const std::vector<VerificationRecord> records =
          verify_suite(t.process, t.ctx, options, t.is_scenario ? t.name : "");
      write_out(emit_report(records, format), f.out_path);
      return all_pass(records) ? 0 : 1;
    }
    if (export_cmd->parsed()) {
      write_out(serialize_process(t.process, metadata_for(t, f)), f.out_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
