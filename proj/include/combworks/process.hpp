#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "combworks/channel.hpp"
#include "combworks/matrix_core.hpp"

namespace combworks {

/// System-environment circuit realizing a process: an environment state
/// threaded through one joint unitary per step, traced out at the end.
/// Unitaries act on (system, environment) with the system slot first.
struct Dilation {
  int env_dim = 1;
  DensityMatrix env_init = DensityMatrix::maximally_mixed(1);
  std::vector<ComplexMatrix> step_unitaries;
};

struct CombLevelCheck {
  int step = 0;          // 0 is the overall normalization level
  double residual = 0.0;
  bool pass = false;
};

struct CombValidationReport {
  bool pass = false;
  double herm_dev = 0.0;
  double min_eigenvalue = 0.0;
  double max_residual = 0.0;
  std::vector<CombLevelCheck> levels;
  std::string summary() const;
};

/// n-step quantum comb over interleaved spaces (in_1, out_1, ..., in_n, out_n),
/// all of system dimension d. The Choi matrix is always materialized; when the
/// comb came from a dilation or from an explicit channel list, that record is
/// kept and used for exact, cheap contraction.
class ProcessTensor {
 public:
  static ProcessTensor from_dilation(Dilation dil, int steps, int sys_dim);
  /// Comb of independent per-step channels (no memory).
  static ProcessTensor markov_product(std::vector<QuantumChannel> channels);
  /// Raw Choi; validates the comb constraints unless told otherwise.
  static ProcessTensor from_choi(int steps, int sys_dim, ComplexMatrix choi,
                                 bool validate = true);

  int steps() const { return steps_; }
  int sys_dim() const { return sys_dim_; }
  const ComplexMatrix& choi() const { return choi_; }
  const std::optional<Dilation>& dilation() const { return dilation_; }
  const std::optional<std::vector<QuantumChannel>>& markov_channels() const {
    return markov_channels_;
  }

  /// Channel of step i (1-based) given the states fed at steps 1..i-1, whose
  /// outputs are discarded. For i = 1 the prefix is empty and the channel is
  /// unconditional.
  QuantumChannel conditional_channel(int step, std::span<const DensityMatrix> prefix) const;

  /// Joint n-partite output when each step receives inputs[i] and every
  /// output is stored (slots ordered out_1, ..., out_n).
  DensityMatrix global_output(std::span<const DensityMatrix> inputs) const;

 private:
  ProcessTensor(int steps, int sys_dim, ComplexMatrix choi)
      : steps_(steps), sys_dim_(sys_dim), choi_(std::move(choi)) {}

  // Choi with slots after step i removed (traced and normalized away).
  ComplexMatrix truncated_choi(int upto_step) const;

  int steps_;
  int sys_dim_;
  ComplexMatrix choi_;
  std::optional<Dilation> dilation_;
  std::optional<std::vector<QuantumChannel>> markov_channels_;
};

/// PSD plus the recursive trace conditions, one residual per level.
CombValidationReport validate_comb(const ProcessTensor& p);

struct ProcessMetadata {
  std::string name;
  std::vector<double> hamiltonian_diag;
  double temperature = 1.0;
};

/// Text document in the `combworks-process-v1` schema, reals at 17
/// significant digits.
std::string serialize_process(const ProcessTensor& p, const ProcessMetadata& meta);

struct ParsedProcess {
  ProcessTensor process;
  ProcessMetadata metadata;
};

/// Parses and validates; throws std::runtime_error on malformed documents,
/// unknown versions, or comb-invariant violations (naming the failed level).
ParsedProcess parse_process(const std::string& text);

}  // namespace combworks
