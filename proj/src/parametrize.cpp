#include "combworks/parametrize.hpp"

#include <cmath>
#include <stdexcept>

namespace combworks {

DensityMatrix params_to_state(std::span<const double> p, int d) {
  if (static_cast<int>(p.size()) != state_param_count(d))
    throw std::invalid_argument("params_to_state: parameter count mismatch");
  ComplexMatrix a(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      a(i, j) = Complex(p[k], p[k + 1]);
      k += 2;
    }
  ComplexMatrix r = a * a.adjoint();
  const double tr = r.trace().real();
  if (!(tr > 1e-30) || !r.allFinite()) return DensityMatrix::maximally_mixed(d);
  r /= tr;
  r = hermitize(r);
  return DensityMatrix(std::move(r));
}

Eigen::VectorXd state_to_params(const DensityMatrix& rho) {
  const int d = rho.dim();
  const Spectrum sp = hermitian_eig(rho.matrix());
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double lam = std::max(0.0, sp.eigenvalues(i));
    a += std::sqrt(lam) * sp.eigenvectors.col(i) * sp.eigenvectors.col(i).adjoint();
  }
  Eigen::VectorXd p(state_param_count(d));
  int k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      p(k) = a(i, j).real();
      p(k + 1) = a(i, j).imag();
      k += 2;
    }
  return p;
}

std::vector<DensityMatrix> params_to_states(const Eigen::VectorXd& p, int d, int n) {
  const int per = state_param_count(d);
  if (p.size() != static_cast<long>(per) * n)
    throw std::invalid_argument("params_to_states: parameter count mismatch");
  std::vector<DensityMatrix> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back(params_to_state(std::span<const double>(p.data() + i * per, per), d));
  return out;
}

Eigen::VectorXd states_to_params(std::span<const DensityMatrix> states) {
  if (states.empty()) return Eigen::VectorXd();
  const int per = state_param_count(states[0].dim());
  Eigen::VectorXd p(per * static_cast<long>(states.size()));
  for (size_t i = 0; i < states.size(); ++i)
    p.segment(i * per, per) = state_to_params(states[i]);
  return p;
}

ComplexMatrix params_to_hermitian(std::span<const double> p, int d) {
  if (static_cast<int>(p.size()) != unitary_param_count(d))
    throw std::invalid_argument("params_to_hermitian: parameter count mismatch");
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i) h(i, i) = p[k++];
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      h(i, j) = Complex(p[k], p[k + 1]);
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  return h;
}

ComplexMatrix params_to_unitary(std::span<const double> p, int d) {
  const ComplexMatrix h = params_to_hermitian(p, d);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  ComplexVector phases(d);
  for (int i = 0; i < d; ++i)
    phases(i) = std::polar(1.0, es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace combworks
