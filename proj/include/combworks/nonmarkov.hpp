#pragma once

#include <vector>

#include "combworks/control_comb.hpp"
#include "combworks/nonmarkov_types.hpp"
#include "combworks/process.hpp"

namespace combworks {

struct NMOptions {
  OptimizerConfig opt;        // lower-bound input search
  int ancilla_dim = 0;        // inner comb ancilla; 0 means sys_dim^2
  int inner_restarts = 2;     // comb local search inside the inner maximization
  int inner_max_iters = 600;
  int sample_inputs = 12;     // deterministic storage-comb sample batch
  int refine_sweeps = 1;      // coordinate-descent sweeps over candidate channels
  int refine_max_iters = 200; // simplex budget per channel during refinement
};

struct NMLowerResult {
  double value = 0.0;
  std::vector<DensityMatrix> witness;
  OptDiagnostics diag;
};

/// The deterministic product-input batch the inner maximization always
/// evaluates; exposed so consistency tests can sample the same family.
std::vector<std::vector<DensityMatrix>> nm_inner_sample_inputs(int sys_dim, int steps,
                                                               const NMOptions& options);

/// Certified lower bound: the largest multipartite mutual information of the
/// stored joint output over product-input strategies. Any feasible input
/// vector certifies a true bound, so seeding only ever helps.
NMLowerResult nm_lower_bound(const ProcessTensor& p, const ThermalContext& ctx,
                             const OptimizerConfig& opt,
                             const std::vector<std::vector<DensityMatrix>>& extra_seeds = {});

struct ProcessRelEntropyResult {
  ExtReal value = ExtReal::finite(0.0);
  bool exact = false;  // restriction argument applies (two steps, ancilla at cap)
  OptDiagnostics diag;
};

/// Restricted process relative entropy: max over control combs (initial
/// system-ancilla state plus unitary links, no final post-processing, final
/// ancilla kept) of S(P(S) || Q(S)). A lower estimate of the true maximum in
/// general; the deterministic storage-comb batch plus any supplied seed
/// vectors are always evaluated exactly.
ProcessRelEntropyResult process_rel_entropy(
    const ProcessTensor& p, const ProcessTensor& q, const ThermalContext& ctx,
    const NMOptions& options,
    const std::vector<std::vector<DensityMatrix>>& seed_vectors = {});

struct NMUpperResult {
  double value = 0.0;
  std::vector<QuantumChannel> channels;  // argmin Markov candidate
  bool exact = false;
  OptDiagnostics diag;
};

/// Heuristic upper estimate: minimum of the (inner) process relative entropy
/// over Markov candidates seeded from the process's own conditional channels
/// and refined by coordinate descent over Stinespring-parametrized channels.
/// Valid as an upper bound on the non-Markovianity only insofar as the inner
/// maximization is exact; the flag mirrors that caveat.
NMUpperResult nm_upper_estimate(const ProcessTensor& p, const ThermalContext& ctx,
                                const NMOptions& options,
                                const std::vector<std::vector<DensityMatrix>>& seed_vectors = {});

/// The argmin candidate behind nm_upper_estimate, exposed for bound checks.
NMUpperResult closest_markov_search(const ProcessTensor& p, const ThermalContext& ctx,
                                    const NMOptions& options);

/// Lower and upper edges assembled with shared witnesses; the upper side is
/// seeded with the lower witness so the bracket cannot invert.
NMBracket nm_bracket(const ProcessTensor& p, const ThermalContext& ctx, const NMOptions& options,
                     const std::vector<std::vector<DensityMatrix>>& extra_lower_seeds = {});

}  // namespace combworks
