#pragma once

#include <vector>

#include "combworks/channel.hpp"
#include "combworks/matrix_core.hpp"
#include "combworks/thermo.hpp"

namespace combworks {

/// Two-sided estimate of the non-Markovianity of a process. The lower edge
/// is certified (any feasible input vector gives a true lower bound); the
/// upper edge is exact only when the `exact` flag is set, otherwise it is a
/// heuristic estimate whose inner maximization may be incomplete.
struct NMBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<DensityMatrix> lower_witness;    // input vector achieving the lower edge
  std::vector<QuantumChannel> markov_witness;  // closest Markov candidate found
  bool exact = false;
  OptDiagnostics diag;
};

}  // namespace combworks
