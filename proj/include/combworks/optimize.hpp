#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace combworks {

/// Knobs for the multi-start simplex search. Always passed down explicitly;
/// there is no global optimizer state.
struct OptimizerConfig {
  int restarts = 32;
  int max_iters = 2000;
  std::uint64_t seed = 42;
  double tol = 1e-9;       // per-restart convergence tolerance on the objective
  double opt_tol = 1e-6;   // tolerance quoted for reported optima / tie-breaking
  double step = 0.5;       // initial simplex edge length
};

struct RestartOutcome {
  Eigen::VectorXd x;
  double value = 0.0;
  int index = 0;       // deterministic tie-break key
  bool converged = false;
  bool from_seed = false;
};

struct SearchOutcome {
  RestartOutcome best;
  std::vector<RestartOutcome> all;  // ordered by restart index
  bool converged = false;           // best restart converged
  int restarts_used = 0;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Maximize `f` over R^dim with Nelder-Mead from `restarts` deterministic
/// starting points. The first starts are the supplied seeds (also reported
/// as exact candidate evaluations), the rest are Gaussian draws from the
/// config seed. The merge is deterministic: highest value wins, ties go to
/// the lowest restart index, independent of evaluation order.
SearchOutcome maximize_multistart(const Objective& f, int dim, const OptimizerConfig& config,
                                  const std::vector<Eigen::VectorXd>& seeds = {});

/// Run fn(i) for i in [0, count) on up to COMBWORKS_THREADS workers
/// (hardware concurrency by default). Results must be written into
/// index-addressed storage by the caller; completion order is not observable.
void parallel_for_index(int count, const std::function<void(int)>& fn);

int effective_thread_count();

}  // namespace combworks
