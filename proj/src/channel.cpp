#include "combworks/channel.hpp"

#include <stdexcept>
#include <string>

#include "combworks/rng.hpp"

namespace combworks {

QuantumChannel::QuantumChannel(int dim_in, int dim_out, ComplexMatrix choi, bool validate)
    : dim_in_(dim_in), dim_out_(dim_out), choi_(std::move(choi)) {
  const long expected = static_cast<long>(dim_in) * dim_out;
  if (choi_.rows() != expected || choi_.cols() != expected)
    throw std::invalid_argument("QuantumChannel: Choi size mismatch");
  if (validate) {
    const ChannelValidation v = validation();
    if (!v.pass)
      throw std::invalid_argument(
          "QuantumChannel: CPTP violation (herm " + std::to_string(v.herm_dev) + ", min eig " +
          std::to_string(v.min_eigenvalue) + ", tp " + std::to_string(v.tp_dev) + ")");
  }
}

ChannelValidation QuantumChannel::validation() const {
  ChannelValidation v;
  v.herm_dev = hermiticity_deviation(choi_);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((choi_ + choi_.adjoint()) / 2.0,
                                                  Eigen::EigenvaluesOnly);
  v.min_eigenvalue = es.eigenvalues()(0);
  const ComplexMatrix tin = partial_trace(choi_, {dim_in_, dim_out_}, {0});
  v.tp_dev = (tin - ComplexMatrix::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff();
  v.pass = v.herm_dev <= kHermTol && v.min_eigenvalue >= -kPsdTol && v.tp_dev <= kCombTol;
  return v;
}

QuantumChannel QuantumChannel::identity(int d) {
  return QuantumChannel(d, d, max_entangled_op(d), false);
}

QuantumChannel QuantumChannel::from_unitary(const ComplexMatrix& u) {
  const int d = static_cast<int>(u.rows());
  if ((u * u.adjoint() - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("from_unitary: input not unitary");
  return from_function(d, d, [&](const ComplexMatrix& m) { return u * m * u.adjoint(); });
}

QuantumChannel QuantumChannel::fixed_output(int dim_in, const DensityMatrix& out) {
  const ComplexMatrix c =
      tensor_product(ComplexMatrix::Identity(dim_in, dim_in), out.matrix());
  return QuantumChannel(dim_in, out.dim(), c, false);
}

QuantumChannel QuantumChannel::from_stinespring(const ComplexMatrix& isometry, int dim_out) {
  const int din = static_cast<int>(isometry.cols());
  const long rows = isometry.rows();
  if (rows % dim_out != 0)
    throw std::invalid_argument("from_stinespring: row count not divisible by dim_out");
  const int denv = static_cast<int>(rows / dim_out);
  if ((isometry.adjoint() * isometry - ComplexMatrix::Identity(din, din)).cwiseAbs().maxCoeff() >
      1e-9)
    throw std::invalid_argument("from_stinespring: not an isometry");
  return from_function(din, dim_out, [&](const ComplexMatrix& m) {
    const ComplexMatrix big = isometry * m * isometry.adjoint();  // on (out, env)
    return partial_trace(big, {dim_out, denv}, {0});
  });
}

QuantumChannel QuantumChannel::from_function(
    int dim_in, int dim_out, const std::function<ComplexMatrix(const ComplexMatrix&)>& e) {
  const long total = static_cast<long>(dim_in) * dim_out;
  ComplexMatrix choi = ComplexMatrix::Zero(total, total);
  ComplexMatrix unit = ComplexMatrix::Zero(dim_in, dim_in);
  for (int j = 0; j < dim_in; ++j)
    for (int k = 0; k < dim_in; ++k) {
      unit(j, k) = 1.0;
      const ComplexMatrix block = e(unit);
      unit(j, k) = 0.0;
      choi.block(static_cast<long>(j) * dim_out, static_cast<long>(k) * dim_out, dim_out,
                 dim_out) = block;
    }
  return QuantumChannel(dim_in, dim_out, choi, false);
}

ComplexMatrix random_unitary(int d, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double a = std::abs(rii);
    q.col(i) *= (a > 0.0) ? rii / a : Complex(1.0, 0.0);
  }
  return q;
}

QuantumChannel QuantumChannel::random(int d, int env_dim, std::uint64_t seed) {
  // Isometry = first d columns of a Haar unitary on d * env_dim.
  const ComplexMatrix u = random_unitary(d * env_dim, seed);
  return from_stinespring(u.leftCols(d), d);
}

DensityMatrix QuantumChannel::apply(const DensityMatrix& rho) const {
  ComplexMatrix out = apply_matrix(rho.matrix());
  out = hermitize(out);
  const double tr = out.trace().real();
  if (tr > 0.0) out /= tr;  // strip residual trace noise
  return DensityMatrix(std::move(out));
}

ComplexMatrix QuantumChannel::apply_matrix(const ComplexMatrix& m) const {
  if (m.rows() != dim_in_ || m.cols() != dim_in_)
    throw std::invalid_argument("QuantumChannel::apply: dimension mismatch");
  // E(m) = tr_in[ (m^T (x) I) C ]
  const ComplexMatrix lifted =
      tensor_product(m.transpose(), ComplexMatrix::Identity(dim_out_, dim_out_));
  return partial_trace(lifted * choi_, {dim_in_, dim_out_}, {1});
}

QuantumChannel QuantumChannel::compose_after(const QuantumChannel& first) const {
  if (first.dim_out_ != dim_in_)
    throw std::invalid_argument("compose_after: dimension mismatch");
  const QuantumChannel& second = *this;
  return from_function(first.dim_in_, second.dim_out_, [&](const ComplexMatrix& m) {
    return second.apply_matrix(first.apply_matrix(m));
  });
}

QuantumChannel QuantumChannel::tensor_with(const QuantumChannel& other) const {
  // Choi slots (in1, out1) (x) (in2, out2) -> permute to (in1 in2, out1 out2).
  ComplexMatrix c = tensor_product(choi_, other.choi_);
  c = permute_systems(c, {dim_in_, dim_out_, other.dim_in_, other.dim_out_}, {0, 2, 1, 3});
  return QuantumChannel(dim_in_ * other.dim_in_, dim_out_ * other.dim_out_, std::move(c), false);
}

double QuantumChannel::choi_distance(const QuantumChannel& other) const {
  if (dim_in_ != other.dim_in_ || dim_out_ != other.dim_out_)
    throw std::invalid_argument("choi_distance: shape mismatch");
  return (choi_ - other.choi_).cwiseAbs().maxCoeff();
}

std::vector<ComplexMatrix> kraus_operators(const QuantumChannel& e) {
  const int din = e.dim_in(), dout = e.dim_out();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((e.choi() + e.choi().adjoint()) / 2.0);
  std::vector<ComplexMatrix> ks;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam <= 1e-12) continue;
    ComplexMatrix k(dout, din);
    for (int j = 0; j < din; ++j)
      for (int o = 0; o < dout; ++o)
        k(o, j) = std::sqrt(lam) * es.eigenvectors()(static_cast<long>(j) * dout + o, i);
    ks.push_back(std::move(k));
  }
  return ks;
}

ComplexMatrix apply_channel_on_slots(const ComplexMatrix& state, const std::vector<int>& dims,
                                     const QuantumChannel& e, const std::vector<int>& slots) {
  if (e.dim_in() != e.dim_out())
    throw std::invalid_argument("apply_channel_on_slots: channel must be square");
  ComplexMatrix out = ComplexMatrix::Zero(state.rows(), state.cols());
  for (const ComplexMatrix& k : kraus_operators(e)) {
    const ComplexMatrix lifted = embed_on_slots(k, dims, slots);
    out += lifted * state * lifted.adjoint();
  }
  return out;
}

}  // namespace combworks
