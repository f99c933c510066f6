#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "combworks/channel.hpp"
#include "combworks/ext_real.hpp"
#include "combworks/matrix_core.hpp"
#include "combworks/optimize.hpp"

namespace combworks {

/// Hermitian operator with energy units. Boltzmann's constant is fixed to 1,
/// so temperatures share the energy unit and kT = temperature.
struct Hamiltonian {
  explicit Hamiltonian(ComplexMatrix m);
  static Hamiltonian qubit(double energy_gap);  // diag(0, E)
  static Hamiltonian diagonal(const std::vector<double>& levels);
  static Hamiltonian zero(int dim);

  int dim() const { return static_cast<int>(matrix.rows()); }
  ComplexMatrix matrix;
};

DensityMatrix gibbs_state(const Hamiltonian& h, double kT);

/// System Hamiltonian and temperature with the derived thermal data cached:
/// the Gibbs state, its smallest eigenvalue, and the top energy level.
class ThermalContext {
 public:
  ThermalContext(Hamiltonian h, double temperature);

  const Hamiltonian& hamiltonian() const { return h_; }
  double temperature() const { return temperature_; }
  double kT() const { return temperature_; }
  const DensityMatrix& gibbs() const { return gibbs_; }
  double gamma_min() const { return gamma_min_; }
  double max_energy() const { return max_energy_; }
  int dim() const { return h_.dim(); }

  /// Context for n independent copies (H = sum of local terms).
  ThermalContext n_copies(int n) const;
  /// Joint context with another system at the same temperature.
  ThermalContext join(const ThermalContext& other) const;
  /// Same temperature, trivial Hamiltonian (H = 0) of the given dimension.
  ThermalContext trivial_ancilla(int dim) const;

 private:
  Hamiltonian h_;
  double temperature_;
  DensityMatrix gibbs_;
  double gamma_min_;
  double max_energy_;
};

/// Work figure together with the input achieving it, where applicable.
struct WorkValue {
  double value = 0.0;
  std::optional<DensityMatrix> achiever;
};

struct OptDiagnostics {
  bool converged = true;
  int restarts_used = 0;
};

struct ChannelWorkResult {
  WorkValue work;
  OptDiagnostics diag;
};

/// Asymptotically distillable work of a state: kT * S(rho || gamma).
/// Finite by construction since the Gibbs state is full rank.
double distillable_work(const DensityMatrix& rho, const ThermalContext& ctx);

/// Work gain of feeding rho through the channel: W(E(rho)) - W(rho).
double channel_work_at(const QuantumChannel& e, const DensityMatrix& rho,
                       const ThermalContext& ctx);

/// max_rho { W(E(rho)) - W(rho) } by seeded multi-start simplex search.
/// The Gibbs input is always a candidate, so the result is >= W(E(gamma)).
/// Ties within opt_tol prefer the cheapest input (lowest W(rho)), then the
/// lowest restart index. Non-convergence is flagged, never fatal.
ChannelWorkResult channel_work(const QuantumChannel& e, const ThermalContext& ctx,
                               const OptimizerConfig& opt,
                               const std::vector<DensityMatrix>& extra_seeds = {});

/// Exact work of a unitary channel: max eigenvalue of U^dag H U - H.
double unitary_channel_work(const ComplexMatrix& u, const ThermalContext& ctx);

/// Largest single-copy work content, kT * ln(1/gamma_min).
double f_max(const ThermalContext& ctx);

/// Prefactor of the work-investment continuity bound:
/// 2^{1/4} [ sqrt(2) ln 2 + S(Pi_Emax || gamma) ] (n - 1).
double work_investment_prefactor(const ThermalContext& ctx, int n);

/// Prefactor of the system-environment-correlation continuity bound:
/// 2^{1/4} [ sqrt(2) ln 2 + (2n - 1) S(Pi_Emax || gamma) ].
double env_correlation_prefactor(const ThermalContext& ctx, int n);

/// Two sides of the relative-entropy continuity bound:
///   lhs = |S(rho1||sigma) - S(rho2||sigma)|
///   rhs = 2^{1/4} (ln 2 + ln(1/m)/sqrt(2)) (sqrt(S(rho1||tau)) + sqrt(S(rho2||tau)))^{1/2}
/// with m the smallest (clipped) eigenvalue of sigma. Infinite entropies make
/// the rhs infinite, so the bound holds trivially there.
std::pair<ExtReal, ExtReal> entropy_continuity_bound(const DensityMatrix& rho1,
                                                     const DensityMatrix& rho2,
                                                     const DensityMatrix& sigma,
                                                     const DensityMatrix& tau);

}  // namespace combworks
