#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "combworks/matrix_core.hpp"

namespace combworks {

/// Number of real parameters for a d-dimensional state (rho = AA^dag / tr).
inline int state_param_count(int d) { return 2 * d * d; }
/// Number of real parameters for a d-dimensional unitary (exp of iH).
inline int unitary_param_count(int d) { return d * d; }

/// Unconstrained parametrization of states: rho = A A^dag / tr(A A^dag) with
/// A an arbitrary complex d x d matrix. Surjective onto the state set and
/// full-rank capable.
DensityMatrix params_to_state(std::span<const double> p, int d);

/// Inverse map used for seeding: A = sqrt(rho), so the round trip is exact
/// up to eigensolver noise.
Eigen::VectorXd state_to_params(const DensityMatrix& rho);

/// Vector of n states from concatenated parameters.
std::vector<DensityMatrix> params_to_states(const Eigen::VectorXd& p, int d, int n);
Eigen::VectorXd states_to_params(std::span<const DensityMatrix> states);

/// Unitary from d^2 real parameters via U = exp(i H(p)), H Hermitian.
ComplexMatrix params_to_unitary(std::span<const double> p, int d);

/// Hermitian matrix from d^2 real parameters (diagonal then off-diagonal
/// re/im pairs, row-major upper triangle).
ComplexMatrix params_to_hermitian(std::span<const double> p, int d);

}  // namespace combworks
