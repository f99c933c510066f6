#include "combworks/process.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace combworks {

namespace {

std::vector<int> uniform_dims(int count, int d) { return std::vector<int>(count, d); }

std::vector<int> range_slots(int first, int count) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = first + i;
  return v;
}

}  // namespace

std::string CombValidationReport::summary() const {
  std::ostringstream os;
  os << (pass ? "pass" : "fail") << " (herm " << herm_dev << ", min eig " << min_eigenvalue
     << ", max residual " << max_residual << ")";
  for (const auto& l : levels)
    if (!l.pass) os << "; level " << l.step << " residual " << l.residual;
  return os.str();
}

ProcessTensor ProcessTensor::from_dilation(Dilation dil, int steps, int sys_dim) {
  if (static_cast<int>(dil.step_unitaries.size()) != steps)
    throw std::invalid_argument("from_dilation: unitary count != steps");
  if (dil.env_init.dim() != dil.env_dim)
    throw std::invalid_argument("from_dilation: environment state dimension mismatch");
  const long joint = static_cast<long>(sys_dim) * dil.env_dim;
  for (const auto& u : dil.step_unitaries) {
    if (u.rows() != joint || u.cols() != joint)
      throw std::invalid_argument("from_dilation: unitary dimension mismatch");
    if ((u * u.adjoint() - ComplexMatrix::Identity(joint, joint)).cwiseAbs().maxCoeff() > kHermTol)
      throw std::invalid_argument("from_dilation: step operator not unitary");
  }

  // Thread the environment: tensor in an entangled (reference, input) pair per
  // step, act with the joint unitary on (input, environment), keep the evolved
  // system leg as that step's output slot.
  ComplexMatrix w = dil.env_init.matrix();
  std::vector<int> dims = {dil.env_dim};  // slot 0 stays the environment
  const ComplexMatrix phi = max_entangled_op(sys_dim);
  for (int k = 0; k < steps; ++k) {
    w = tensor_product(w, phi);
    dims.push_back(sys_dim);  // in_k reference
    dims.push_back(sys_dim);  // system leg, becomes out_k
    const int sys_slot = static_cast<int>(dims.size()) - 1;
    w = conjugate_on_slots(w, dims, dil.step_unitaries[k], {sys_slot, 0});
  }
  ComplexMatrix choi = partial_trace(w, dims, range_slots(1, 2 * steps));

  ProcessTensor p(steps, sys_dim, std::move(choi));
  p.dilation_ = std::move(dil);
  return p;
}

ProcessTensor ProcessTensor::markov_product(std::vector<QuantumChannel> channels) {
  if (channels.empty()) throw std::invalid_argument("markov_product: empty channel list");
  const int d = channels[0].dim_in();
  for (const auto& c : channels)
    if (c.dim_in() != d || c.dim_out() != d)
      throw std::invalid_argument("markov_product: channels must share the system dimension");
  ComplexMatrix choi = channels[0].choi();
  for (size_t k = 1; k < channels.size(); ++k) choi = tensor_product(choi, channels[k].choi());
  ProcessTensor p(static_cast<int>(channels.size()), d, std::move(choi));
  p.markov_channels_ = std::move(channels);
  return p;
}

ProcessTensor ProcessTensor::from_choi(int steps, int sys_dim, ComplexMatrix choi,
                                       bool validate) {
  long expected = 1;
  for (int i = 0; i < 2 * steps; ++i) expected *= sys_dim;
  if (choi.rows() != expected || choi.cols() != expected)
    throw std::invalid_argument("from_choi: Choi size mismatch");
  ProcessTensor p(steps, sys_dim, std::move(choi));
  if (validate) {
    const CombValidationReport r = validate_comb(p);
    if (!r.pass) throw std::runtime_error("from_choi: comb validation failed: " + r.summary());
  }
  return p;
}

ComplexMatrix ProcessTensor::truncated_choi(int upto_step) const {
  const int d = sys_dim_;
  ComplexMatrix m = partial_trace(choi_, uniform_dims(2 * steps_, d),
                                  range_slots(0, 2 * upto_step));
  const double scale = std::pow(static_cast<double>(d), steps_ - upto_step);
  return m / scale;
}

QuantumChannel ProcessTensor::conditional_channel(int step,
                                                  std::span<const DensityMatrix> prefix) const {
  if (step < 1 || step > steps_)
    throw std::invalid_argument("conditional_channel: step out of range");
  if (static_cast<int>(prefix.size()) != step - 1)
    throw std::invalid_argument("conditional_channel: prefix length must be step - 1");
  const int d = sys_dim_;
  for (const auto& r : prefix)
    if (r.dim() != d) throw std::invalid_argument("conditional_channel: prefix dimension mismatch");

  if (markov_channels_) return (*markov_channels_)[step - 1];

  if (dilation_) {
    const Dilation& dil = *dilation_;
    ComplexMatrix env = dil.env_init.matrix();
    for (int k = 0; k < step - 1; ++k) {
      ComplexMatrix joint = tensor_product(prefix[k].matrix(), env);
      joint = dil.step_unitaries[k] * joint * dil.step_unitaries[k].adjoint();
      env = partial_trace(joint, {d, dil.env_dim}, {1});
    }
    ComplexMatrix big = tensor_product(max_entangled_op(d), env);
    big = conjugate_on_slots(big, {d, d, dil.env_dim}, dil.step_unitaries[step - 1], {1, 2});
    return QuantumChannel(d, d, partial_trace(big, {d, d, dil.env_dim}, {0, 1}), false);
  }

  // Choi route: drop the future, contract earlier inputs, trace earlier outputs.
  ComplexMatrix m = truncated_choi(step);
  std::vector<ComplexMatrix> factors;
  for (int k = 0; k < step - 1; ++k) {
    factors.push_back(prefix[k].matrix().transpose());
    factors.push_back(ComplexMatrix::Identity(d, d));
  }
  factors.push_back(ComplexMatrix::Identity(d, d));
  factors.push_back(ComplexMatrix::Identity(d, d));
  const ComplexMatrix lifted = tensor_all(factors);
  const std::vector<int> dims = uniform_dims(2 * step, d);
  ComplexMatrix choi = partial_trace(lifted * m, dims, {2 * (step - 1), 2 * step - 1});
  choi = hermitize(choi);
  return QuantumChannel(d, d, std::move(choi), false);
}

DensityMatrix ProcessTensor::global_output(std::span<const DensityMatrix> inputs) const {
  if (static_cast<int>(inputs.size()) != steps_)
    throw std::invalid_argument("global_output: need one input per step");
  const int d = sys_dim_;
  for (const auto& r : inputs)
    if (r.dim() != d) throw std::invalid_argument("global_output: input dimension mismatch");

  if (markov_channels_) {
    ComplexMatrix out = (*markov_channels_)[0].apply(inputs[0]).matrix();
    for (int k = 1; k < steps_; ++k)
      out = tensor_product(out, (*markov_channels_)[k].apply(inputs[k]).matrix());
    return DensityMatrix(std::move(out));
  }

  if (dilation_) {
    const Dilation& dil = *dilation_;
    // State over (out_1, ..., out_{k-1}, current system, env); the current
    // system leg becomes out_k after the step unitary.
    ComplexMatrix state = tensor_product(inputs[0].matrix(), dil.env_init.matrix());
    std::vector<int> dims = {d, dil.env_dim};
    state = conjugate_on_slots(state, dims, dil.step_unitaries[0], {0, 1});
    for (int k = 1; k < steps_; ++k) {
      // Insert the fresh input between the stored outputs and the environment.
      state = tensor_product(state, inputs[k].matrix());
      dims.push_back(d);
      std::vector<int> perm;
      for (int i = 0; i < static_cast<int>(dims.size()) - 2; ++i) perm.push_back(i);
      perm.push_back(static_cast<int>(dims.size()) - 1);  // new system leg
      perm.push_back(static_cast<int>(dims.size()) - 2);  // environment last
      state = permute_systems(state, dims, perm);
      dims = uniform_dims(k + 1, d);
      dims.push_back(dil.env_dim);
      state = conjugate_on_slots(state, dims, dil.step_unitaries[k], {k, k + 1});
    }
    ComplexMatrix out = partial_trace(state, dims, range_slots(0, steps_));
    out = hermitize(out);
    return DensityMatrix(std::move(out));
  }

  std::vector<ComplexMatrix> factors;
  std::vector<int> keep;
  for (int k = 0; k < steps_; ++k) {
    factors.push_back(inputs[k].matrix().transpose());
    factors.push_back(ComplexMatrix::Identity(d, d));
    keep.push_back(2 * k + 1);
  }
  const ComplexMatrix lifted = tensor_all(factors);
  ComplexMatrix out = partial_trace(lifted * choi_, uniform_dims(2 * steps_, d), keep);
  out = hermitize(out);
  return DensityMatrix(std::move(out));
}

CombValidationReport validate_comb(const ProcessTensor& p) {
  const int d = p.sys_dim();
  const int n = p.steps();
  CombValidationReport report;
  report.herm_dev = hermiticity_deviation(p.choi());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((p.choi() + p.choi().adjoint()) / 2.0,
                                                  Eigen::EigenvaluesOnly);
  report.min_eigenvalue = es.eigenvalues()(0);

  // Telescoping causality: tracing out_k must leave I_{in_k} (x) C_{k-1}.
  ComplexMatrix level = p.choi();
  bool chain_ok = true;
  for (int k = n; k >= 1; --k) {
    const std::vector<int> dims = uniform_dims(2 * k, d);
    std::vector<int> keep_t = range_slots(0, 2 * k - 1);
    const ComplexMatrix t = partial_trace(level, dims, keep_t);
    const std::vector<int> dims_t = uniform_dims(2 * k - 1, d);
    ComplexMatrix lower = partial_trace(t, dims_t, range_slots(0, 2 * (k - 1)));
    lower /= static_cast<double>(d);
    const ComplexMatrix expected = tensor_product(
        lower, ComplexMatrix::Identity(d, d));  // note: in_k is the trailing slot of t
    // t carries slots (i1,o1,...,i_k); in_k is last, so compare against
    // C_{k-1} (x) I on (prefix, i_k).
    const double residual = (t - expected).cwiseAbs().maxCoeff();
    CombLevelCheck lc{k, residual, residual <= kCombTol};
    chain_ok = chain_ok && lc.pass;
    report.levels.push_back(lc);
    report.max_residual = std::max(report.max_residual, residual);
    level = std::move(lower);
  }
  const double norm_residual = std::abs(level(0, 0).real() - 1.0) + std::abs(level(0, 0).imag());
  report.levels.push_back(CombLevelCheck{0, norm_residual, norm_residual <= kCombTol});
  chain_ok = chain_ok && report.levels.back().pass;
  report.max_residual = std::max(report.max_residual, norm_residual);

  report.pass = report.herm_dev <= kHermTol && report.min_eigenvalue >= -kPsdTol && chain_ok;
  return report;
}

}  // namespace combworks
