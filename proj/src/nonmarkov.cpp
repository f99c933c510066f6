#include "combworks/nonmarkov.hpp"

#include <algorithm>
#include <cmath>

#include "combworks/parametrize.hpp"
#include "combworks/rng.hpp"

namespace combworks {

namespace {

std::vector<std::vector<DensityMatrix>> standard_vectors(const ThermalContext& ctx, int n) {
  const int d = ctx.dim();
  std::vector<std::vector<DensityMatrix>> seeds;
  seeds.emplace_back(n, ctx.gibbs());
  seeds.emplace_back(n, DensityMatrix::maximally_mixed(d));
  long combos = 1;
  for (int i = 0; i < n; ++i) combos *= d;
  combos = std::min<long>(combos, 16);
  for (long c = 0; c < combos; ++c) {
    std::vector<DensityMatrix> v;
    long rem = c;
    for (int i = 0; i < n; ++i) {
      v.push_back(DensityMatrix::basis_state(d, static_cast<int>(rem % d)));
      rem /= d;
    }
    seeds.push_back(std::move(v));
  }
  return seeds;
}

ExtReal storage_rel_entropy(const ProcessTensor& p, const ProcessTensor& q,
                            std::span<const DensityMatrix> r) {
  return rel_entropy(p.global_output(r), q.global_output(r));
}

// Markov candidate from the process's own conditional channels along a fixed
// prefix trajectory.
std::vector<QuantumChannel> marginal_channels(const ProcessTensor& p,
                                              const std::vector<DensityMatrix>& trajectory) {
  std::vector<QuantumChannel> ch;
  for (int i = 1; i <= p.steps(); ++i)
    ch.push_back(
        p.conditional_channel(i, std::span<const DensityMatrix>(trajectory.data(), i - 1)));
  return ch;
}

QuantumChannel stinespring_from_params(std::span<const double> params, int d) {
  const ComplexMatrix u = params_to_unitary(params, d * d);
  ComplexMatrix v(d * d, d);
  for (int j = 0; j < d; ++j) v.col(j) = u.col(static_cast<long>(j) * d);
  return QuantumChannel::from_stinespring(v, d);
}

}  // namespace

std::vector<std::vector<DensityMatrix>> nm_inner_sample_inputs(int sys_dim, int steps,
                                                               const NMOptions& options) {
  std::vector<std::vector<DensityMatrix>> out;
  Rng rng(options.opt.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int s = 0; s < options.sample_inputs; ++s) {
    std::vector<DensityMatrix> v;
    for (int i = 0; i < steps; ++i) {
      Eigen::VectorXd x(state_param_count(sys_dim));
      for (int k = 0; k < x.size(); ++k) x(k) = rng.gaussian();
      v.push_back(params_to_state(std::span<const double>(x.data(), x.size()), sys_dim));
    }
    out.push_back(std::move(v));
  }
  return out;
}

NMLowerResult nm_lower_bound(const ProcessTensor& p, const ThermalContext& ctx,
                             const OptimizerConfig& opt,
                             const std::vector<std::vector<DensityMatrix>>& extra_seeds) {
  const int d = p.sys_dim();
  const int n = p.steps();
  const std::vector<int> out_dims(n, d);

  std::vector<std::vector<DensityMatrix>> seed_vectors = standard_vectors(ctx, n);
  seed_vectors.insert(seed_vectors.end(), extra_seeds.begin(), extra_seeds.end());
  std::vector<Eigen::VectorXd> seeds;
  for (const auto& v : seed_vectors) seeds.push_back(states_to_params(v));

  const Objective obj = [&](const Eigen::VectorXd& x) {
    const std::vector<DensityMatrix> r = params_to_states(x, d, n);
    return multi_mutual_info(p.global_output(r), out_dims);
  };
  const SearchOutcome search = maximize_multistart(obj, n * state_param_count(d), opt, seeds);

  NMLowerResult out;
  out.value = std::max(0.0, search.best.value);
  out.witness = params_to_states(search.best.x, d, n);
  out.diag.converged = search.converged;
  out.diag.restarts_used = search.restarts_used;
  return out;
}

ProcessRelEntropyResult process_rel_entropy(
    const ProcessTensor& p, const ProcessTensor& q, const ThermalContext& ctx,
    const NMOptions& options, const std::vector<std::vector<DensityMatrix>>& seed_vectors) {
  if (p.steps() != q.steps() || p.sys_dim() != q.sys_dim())
    throw std::invalid_argument("process_rel_entropy: shape mismatch");
  const int d = p.sys_dim();
  const int n = p.steps();
  const int da = options.ancilla_dim > 0 ? options.ancilla_dim : d * d;

  ProcessRelEntropyResult res;
  res.exact = (n == 2 && da >= d * d);

  // Exactly evaluated storage strategies: supplied witnesses, the standard
  // batch, and the deterministic random sample.
  ExtReal best = ExtReal::finite(0.0);
  auto take = [&](const ExtReal& v) {
    if (best < v) best = v;
  };
  for (const auto& v : seed_vectors) take(storage_rel_entropy(p, q, v));
  for (const auto& v : standard_vectors(ctx, n)) take(storage_rel_entropy(p, q, v));
  for (const auto& v : nm_inner_sample_inputs(d, n, options)) take(storage_rel_entropy(p, q, v));
  if (!best.is_finite()) {
    res.value = best;
    return res;
  }

  // Local refinement over ancilla-threaded combs with unitary links.
  if (options.inner_restarts > 0 && options.inner_max_iters > 0) {
    const int joint_dim = d * da;
    const int init_params = state_param_count(joint_dim);
    const int link_params = unitary_param_count(joint_dim);
    const int total_params = init_params + (n - 1) * link_params;
    const Objective obj = [&](const Eigen::VectorXd& x) {
      const DensityMatrix init =
          params_to_state(std::span<const double>(x.data(), init_params), joint_dim);
      std::vector<ComplexMatrix> links;
      for (int k = 0; k < n - 1; ++k)
        links.push_back(params_to_unitary(
            std::span<const double>(x.data() + init_params + k * link_params, link_params),
            joint_dim));
      const ExtReal v = rel_entropy(apply_unitary_link_comb(p, init, da, links),
                                    apply_unitary_link_comb(q, init, da, links));
      return std::min(v.value_or_inf(), 1e9);
    };
    std::vector<Eigen::VectorXd> starts;
    {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(total_params);
      const DensityMatrix init = DensityMatrix(
          tensor_product(ctx.gibbs().matrix(), DensityMatrix::maximally_mixed(da).matrix()));
      x.head(init_params) = state_to_params(init);
      starts.push_back(x);
    }
    OptimizerConfig inner = options.opt;
    inner.restarts = options.inner_restarts;
    inner.max_iters = options.inner_max_iters;
    const SearchOutcome search = maximize_multistart(obj, total_params, inner, starts);
    if (std::isfinite(search.best.value))
      take(ExtReal::finite(std::max(0.0, search.best.value)));
    res.diag.converged = search.converged;
    res.diag.restarts_used = search.restarts_used;
  }

  res.value = best;
  return res;
}

namespace {

NMUpperResult upper_over_candidates(const ProcessTensor& p, const ThermalContext& ctx,
                                    const NMOptions& options,
                                    const std::vector<std::vector<DensityMatrix>>& seed_vectors) {
  const int d = p.sys_dim();
  const int n = p.steps();

  struct Candidate {
    std::vector<QuantumChannel> channels;
    double value = 0.0;
  };
  std::vector<Candidate> candidates;

  const auto inner = [&](const std::vector<QuantumChannel>& ch) -> double {
    const ProcessTensor q = ProcessTensor::markov_product(ch);
    return process_rel_entropy(p, q, ctx, options, seed_vectors).value.value_or_inf();
  };

  // Candidate: the process's own conditional channels along a thermal
  // trajectory; for Markov inputs this recovers the process itself.
  candidates.push_back({marginal_channels(p, std::vector<DensityMatrix>(n, ctx.gibbs())), 0.0});
  // Candidate: conditionals along the first supplied witness trajectory.
  if (!seed_vectors.empty() && static_cast<int>(seed_vectors[0].size()) == n) {
    auto ch = marginal_channels(p, seed_vectors[0]);
    bool differs = false;
    for (size_t i = 0; i < ch.size(); ++i)
      differs = differs || ch[i].choi_distance(candidates[0].channels[i]) > 1e-9;
    if (differs) candidates.push_back({std::move(ch), 0.0});
  }
  for (auto& c : candidates) c.value = inner(c.channels);
  int best = 0;
  for (size_t i = 1; i < candidates.size(); ++i)
    if (candidates[i].value < candidates[best].value) best = static_cast<int>(i);

  // Coordinate descent over Stinespring-parametrized channels, scored with
  // the exact storage batch only; the winner gets a full inner pass below.
  if (options.refine_sweeps > 0 && options.refine_max_iters > 0) {
    const auto batch = nm_inner_sample_inputs(d, n, options);
    const auto cheap_inner = [&](const std::vector<QuantumChannel>& ch) -> double {
      const ProcessTensor q = ProcessTensor::markov_product(ch);
      ExtReal worst = ExtReal::finite(0.0);
      auto take = [&](const ExtReal& v) {
        if (worst < v) worst = v;
      };
      for (const auto& v : seed_vectors) take(storage_rel_entropy(p, q, v));
      for (const auto& v : standard_vectors(ctx, n)) take(storage_rel_entropy(p, q, v));
      for (const auto& v : batch) take(storage_rel_entropy(p, q, v));
      return worst.value_or_inf();
    };

    std::vector<QuantumChannel> current = candidates[best].channels;
    double current_value = cheap_inner(current);
    const int params = unitary_param_count(d * d);
    for (int sweep = 0; sweep < options.refine_sweeps; ++sweep) {
      for (int c = 0; c < n; ++c) {
        const Objective obj = [&](const Eigen::VectorXd& x) {
          std::vector<QuantumChannel> trial = current;
          trial[c] = stinespring_from_params(std::span<const double>(x.data(), x.size()), d);
          return -cheap_inner(trial);
        };
        OptimizerConfig refine = options.opt;
        refine.restarts = 2;
        refine.max_iters = options.refine_max_iters;
        const SearchOutcome s = maximize_multistart(obj, params, refine, {});
        if (-s.best.value < current_value - 1e-9) {
          current[c] = stinespring_from_params(
              std::span<const double>(s.best.x.data(), s.best.x.size()), d);
          current_value = -s.best.value;
        }
      }
    }
    Candidate refined{std::move(current), 0.0};
    refined.value = inner(refined.channels);
    candidates.push_back(std::move(refined));
    for (size_t i = 0; i < candidates.size(); ++i)
      if (candidates[i].value < candidates[best].value) best = static_cast<int>(i);
  }

  NMUpperResult out;
  out.value = std::max(0.0, candidates[best].value);
  out.channels = candidates[best].channels;
  const int da = options.ancilla_dim > 0 ? options.ancilla_dim : d * d;
  out.exact = (n == 2 && da >= d * d);
  out.diag.converged = true;
  out.diag.restarts_used = static_cast<int>(candidates.size());
  return out;
}

}  // namespace

NMUpperResult nm_upper_estimate(const ProcessTensor& p, const ThermalContext& ctx,
                                const NMOptions& options,
                                const std::vector<std::vector<DensityMatrix>>& seed_vectors) {
  return upper_over_candidates(p, ctx, options, seed_vectors);
}

NMUpperResult closest_markov_search(const ProcessTensor& p, const ThermalContext& ctx,
                                    const NMOptions& options) {
  const NMLowerResult lower = nm_lower_bound(p, ctx, options.opt);
  return upper_over_candidates(p, ctx, options, {lower.witness});
}

NMBracket nm_bracket(const ProcessTensor& p, const ThermalContext& ctx, const NMOptions& options,
                     const std::vector<std::vector<DensityMatrix>>& extra_lower_seeds) {
  NMBracket b;
  const NMLowerResult lower = nm_lower_bound(p, ctx, options.opt, extra_lower_seeds);
  b.lower = lower.value;
  b.lower_witness = lower.witness;

  // The lower witness always enters the inner maximization, which pins the
  // bracket order: the inner value at the witness dominates its mutual
  // information.
  std::vector<std::vector<DensityMatrix>> seeds = {lower.witness};
  seeds.insert(seeds.end(), extra_lower_seeds.begin(), extra_lower_seeds.end());
  const NMUpperResult upper = nm_upper_estimate(p, ctx, options, seeds);
  b.upper = upper.value;
  b.markov_witness = upper.channels;
  b.exact = upper.exact;
  b.diag.converged = lower.diag.converged && upper.diag.converged;
  b.diag.restarts_used = lower.diag.restarts_used + upper.diag.restarts_used;
  return b;
}

}  // namespace combworks
