#include "combworks/control_comb.hpp"

#include <stdexcept>

namespace combworks {

namespace {

DensityMatrix with_trivial_ancilla(const DensityMatrix& sys_state) { return sys_state; }

std::vector<int> uniform_dims(int count, int d) { return std::vector<int>(count, d); }

}  // namespace

ComplexMatrix swap_operator(int d) {
  ComplexMatrix s = ComplexMatrix::Zero(static_cast<long>(d) * d, static_cast<long>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(static_cast<long>(i) * d + j, static_cast<long>(j) * d + i) = 1.0;
  return s;
}

ControlComb product_input_comb(std::span<const DensityMatrix> r) {
  if (r.empty()) throw std::invalid_argument("product_input_comb: empty input vector");
  const int d = r[0].dim();
  ControlComb s;
  s.sys_dim = d;
  s.ancilla_dim = 1;
  s.init_state = with_trivial_ancilla(r[0]);
  for (size_t k = 1; k < r.size(); ++k)
    s.link_channels.push_back(QuantumChannel::fixed_output(d, r[k]));
  s.retain_final_ancilla = false;
  return s;
}

ControlComb global_storage_comb(std::span<const DensityMatrix> r) {
  if (r.empty()) throw std::invalid_argument("global_storage_comb: empty input vector");
  const int n = static_cast<int>(r.size());
  const int d = r[0].dim();
  int anc = 1;
  for (int i = 1; i < n; ++i) anc *= d;

  ControlComb s;
  s.sys_dim = d;
  s.ancilla_dim = anc;
  ComplexMatrix init = r[0].matrix();
  for (int i = 1; i < n; ++i)
    init = tensor_product(init, DensityMatrix::basis_state(d, 0).matrix());
  s.init_state = DensityMatrix(std::move(init));
  s.retain_final_ancilla = true;

  // Link k: park the step-k output in register k, then load r[k+1] into the
  // system. Registers are dim-d factors of the ancilla.
  std::vector<int> dims = uniform_dims(n, d);  // (sys, reg_1, ..., reg_{n-1})
  for (int k = 1; k <= n - 1; ++k) {
    const ComplexMatrix park = embed_on_slots(swap_operator(d), dims, {0, k});
    const QuantumChannel park_ch = QuantumChannel::from_unitary(park);
    QuantumChannel load = QuantumChannel::fixed_output(d, r[k]);
    for (int i = 1; i < n; ++i) load = load.tensor_with(QuantumChannel::identity(d));
    s.link_channels.push_back(load.compose_after(park_ch));
  }
  return s;
}

ControlComb identity_feedthrough_comb(const DensityMatrix& init, int steps) {
  ControlComb s;
  s.sys_dim = init.dim();
  s.ancilla_dim = 1;
  s.init_state = init;
  for (int k = 1; k < steps; ++k) s.link_channels.push_back(QuantumChannel::identity(init.dim()));
  s.retain_final_ancilla = false;
  return s;
}

ControlComb unitary_link_comb(const DensityMatrix& init_sys_anc, int ancilla_dim,
                              std::span<const ComplexMatrix> link_unitaries) {
  ControlComb s;
  if (init_sys_anc.dim() % ancilla_dim != 0)
    throw std::invalid_argument("unitary_link_comb: ancilla does not divide the joint dimension");
  s.sys_dim = init_sys_anc.dim() / ancilla_dim;
  s.ancilla_dim = ancilla_dim;
  s.init_state = init_sys_anc;
  for (const auto& u : link_unitaries) s.link_channels.push_back(QuantumChannel::from_unitary(u));
  s.retain_final_ancilla = true;
  return s;
}

namespace {

DensityMatrix finalize(ComplexMatrix state, int sys_dim, int anc_dim, bool retain) {
  if (!retain && anc_dim > 1)
    state = partial_trace(state, {sys_dim, anc_dim}, {0});
  state = hermitize(state);
  const double tr = state.trace().real();
  if (tr > 0.0) state /= tr;
  return DensityMatrix(std::move(state));
}

DensityMatrix apply_via_dilation(const ProcessTensor& p, const ControlComb& s) {
  const Dilation& dil = *p.dilation();
  const int d = p.sys_dim();
  const std::vector<int> dims = {d, s.ancilla_dim, dil.env_dim};
  ComplexMatrix state = tensor_product(s.init_state.matrix(), dil.env_init.matrix());
  for (int k = 0; k < p.steps(); ++k) {
    state = conjugate_on_slots(state, dims, dil.step_unitaries[k], {0, 2});
    if (k + 1 < p.steps())
      state = apply_channel_on_slots(state, dims, s.link_channels[k], {0, 1});
  }
  state = partial_trace(state, dims, {0, 1});
  return finalize(std::move(state), d, s.ancilla_dim, s.retain_final_ancilla);
}

DensityMatrix apply_via_channels(const ProcessTensor& p, const ControlComb& s) {
  const std::vector<QuantumChannel>& steps = *p.markov_channels();
  const int d = p.sys_dim();
  const std::vector<int> dims = {d, s.ancilla_dim};
  ComplexMatrix state = s.init_state.matrix();
  for (int k = 0; k < p.steps(); ++k) {
    state = apply_channel_on_slots(state, dims, steps[k], {0});
    if (k + 1 < p.steps())
      state = apply_channel_on_slots(state, dims, s.link_channels[k], {0, 1});
  }
  return finalize(std::move(state), d, s.ancilla_dim, s.retain_final_ancilla);
}

DensityMatrix apply_via_choi(const ProcessTensor& p, const ControlComb& s) {
  const int d = p.sys_dim();
  const int da = s.ancilla_dim;
  const int n = p.steps();

  // Glue the strategy into the comb Choi left to right. After gluing the
  // initial state the running operator carries slots
  // (anc, o_k, i_{k+1}, o_{k+1}, ..., o_n); every link consumes
  // (o_k, anc, i_{k+1}) and emits a fresh ancilla slot in front.
  ComplexMatrix current =
      link_contract(s.init_state.matrix(), {d, da}, {0}, p.choi(),
                    std::vector<int>(2 * n, d), {0});
  std::vector<int> dims;
  dims.push_back(da);
  for (int i = 0; i < 2 * n - 1; ++i) dims.push_back(d);

  for (int k = 0; k + 1 < n; ++k) {
    const QuantumChannel& link = s.link_channels[k];
    current = link_contract(link.choi(), {d, da, d, da}, {0, 1, 2}, current, dims, {1, 0, 2});
    dims.erase(dims.begin() + 1, dims.begin() + 3);  // consumed o_k and i_{k+1}
  }
  // Remaining slots: (anc, o_n) -> reorder to (sys, anc).
  current = permute_systems(current, {da, d}, {1, 0});
  return finalize(std::move(current), d, da, s.retain_final_ancilla);
}

}  // namespace

DensityMatrix apply_control_comb(const ProcessTensor& p, const ControlComb& s) {
  if (s.sys_dim != p.sys_dim())
    throw std::invalid_argument("apply_control_comb: system dimension mismatch");
  if (static_cast<int>(s.link_channels.size()) != p.steps() - 1)
    throw std::invalid_argument("apply_control_comb: link channel count must be steps - 1");
  const long joint = static_cast<long>(s.sys_dim) * s.ancilla_dim;
  if (s.init_state.dim() != joint)
    throw std::invalid_argument("apply_control_comb: initial state dimension mismatch");
  for (const auto& l : s.link_channels)
    if (l.dim_in() != joint || l.dim_out() != joint)
      throw std::invalid_argument("apply_control_comb: link channel dimension mismatch");

  if (p.dilation()) return apply_via_dilation(p, s);
  if (p.markov_channels()) return apply_via_channels(p, s);
  return apply_via_choi(p, s);
}

DensityMatrix apply_unitary_link_comb(const ProcessTensor& p, const DensityMatrix& init_sys_anc,
                                      int ancilla_dim, std::span<const ComplexMatrix> links) {
  const int d = p.sys_dim();
  if (static_cast<int>(links.size()) != p.steps() - 1)
    throw std::invalid_argument("apply_unitary_link_comb: link count must be steps - 1");

  if (p.dilation()) {
    const Dilation& dil = *p.dilation();
    const std::vector<int> dims = {d, ancilla_dim, dil.env_dim};
    ComplexMatrix state = tensor_product(init_sys_anc.matrix(), dil.env_init.matrix());
    for (int k = 0; k < p.steps(); ++k) {
      state = conjugate_on_slots(state, dims, dil.step_unitaries[k], {0, 2});
      if (k + 1 < p.steps()) state = conjugate_on_slots(state, dims, links[k], {0, 1});
    }
    ComplexMatrix out = partial_trace(state, dims, {0, 1});
    return finalize(std::move(out), d, ancilla_dim, true);
  }
  if (p.markov_channels()) {
    const std::vector<int> dims = {d, ancilla_dim};
    ComplexMatrix state = init_sys_anc.matrix();
    for (int k = 0; k < p.steps(); ++k) {
      state = apply_channel_on_slots(state, dims, (*p.markov_channels())[k], {0});
      if (k + 1 < p.steps()) state = conjugate_on_slots(state, dims, links[k], {0, 1});
    }
    return finalize(std::move(state), d, ancilla_dim, true);
  }
  return apply_control_comb(p, unitary_link_comb(init_sys_anc, ancilla_dim, links));
}

DensityMatrix storage_comb_output(const ProcessTensor& p, std::span<const DensityMatrix> r) {
  const int n = p.steps();
  const int d = p.sys_dim();
  const DensityMatrix raw = apply_control_comb(p, global_storage_comb(r));
  if (n == 1) return raw;
  // Raw order is (out_n, out_1, ..., out_{n-1}).
  std::vector<int> perm;
  for (int i = 1; i < n; ++i) perm.push_back(i);
  perm.push_back(0);
  return DensityMatrix(permute_systems(raw.matrix(), std::vector<int>(n, d), perm));
}

}  // namespace combworks
