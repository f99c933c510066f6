#pragma once

#include <span>
#include <vector>

#include "combworks/process.hpp"

namespace combworks {

/// Experimenter-side comb in dilated form: an initial state on
/// (system (x) ancilla) plus one link channel on (system (x) ancilla) between
/// consecutive steps. The system half of the state is fed into the process;
/// after the last step the ancilla is kept or traced per the discard policy.
struct ControlComb {
  int sys_dim = 1;
  int ancilla_dim = 1;
  DensityMatrix init_state = DensityMatrix::maximally_mixed(1);  // on sys (x) anc
  std::vector<QuantumChannel> link_channels;                     // length steps - 1
  bool retain_final_ancilla = false;
};

/// Feed r[i] into step i, discarding each step's output (the link channels
/// ignore their input and prepare the next state).
ControlComb product_input_comb(std::span<const DensityMatrix> r);

/// Feed r[i] into step i and swap every output into a fresh ancilla register,
/// so the final state is the joint n-partite output ordered (out_1, ..., out_n).
ControlComb global_storage_comb(std::span<const DensityMatrix> r);

/// Prepare `init` once and pass each output straight into the next step.
ControlComb identity_feedthrough_comb(const DensityMatrix& init, int steps);

/// Comb built from an initial (sys, anc) state and per-link unitaries.
ControlComb unitary_link_comb(const DensityMatrix& init_sys_anc, int ancilla_dim,
                              std::span<const ComplexMatrix> link_unitaries);

/// Final state sigma of the process driven by the control comb, on
/// (system, ancilla) when the ancilla is retained, system alone otherwise.
/// For global_storage_comb the ancilla registers hold outputs 1..n-1, so the
/// raw slot order is (out_n, out_1, ..., out_{n-1}).
DensityMatrix apply_control_comb(const ProcessTensor& p, const ControlComb& s);

/// apply_control_comb for a global_storage_comb, reordered to (out_1, ..., out_n).
DensityMatrix storage_comb_output(const ProcessTensor& p, std::span<const DensityMatrix> r);

/// Final (system, ancilla) state for a comb with unitary links; dispatches to
/// a conjugation chain for dilation- and channel-backed processes, which is
/// the hot path inside the comb searches.
DensityMatrix apply_unitary_link_comb(const ProcessTensor& p, const DensityMatrix& init_sys_anc,
                                      int ancilla_dim, std::span<const ComplexMatrix> links);

/// SWAP unitary on two dim-d factors.
ComplexMatrix swap_operator(int d);

}  // namespace combworks
