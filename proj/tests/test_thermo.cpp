#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "combworks/parametrize.hpp"
#include "combworks/rng.hpp"
#include "combworks/thermo.hpp"

using namespace combworks;

namespace {

constexpr double kE = 1.0;
constexpr double kKt = 1.0;
const double kW = std::exp(-kE / kKt);
const double kZ = 1.0 + kW;
const double kLnZ = std::log(kZ);

ThermalContext qubit_ctx() { return ThermalContext(Hamiltonian::qubit(kE), kKt); }

DensityMatrix random_state(Rng& rng, int d) {
  Eigen::VectorXd x(state_param_count(d));
  for (int i = 0; i < x.size(); ++i) x(i) = rng.gaussian();
  return params_to_state(std::span<const double>(x.data(), x.size()), d);
}

DensityMatrix random_pure(Rng& rng, int d) {
  ComplexVector psi(d);
  for (int i = 0; i < d; ++i) psi(i) = Complex(rng.gaussian(), rng.gaussian());
  return DensityMatrix::pure(psi);
}

// Qubit state from Bloch angles and radius.
DensityMatrix bloch_state(double theta, double phi, double r) {
  ComplexMatrix m(2, 2);
  const double x = r * std::sin(theta) * std::cos(phi);
  const double y = r * std::sin(theta) * std::sin(phi);
  const double z = r * std::cos(theta);
  m(0, 0) = (1 + z) / 2;
  m(1, 1) = (1 - z) / 2;
  m(0, 1) = Complex(x, -y) / 2.0;
  m(1, 0) = Complex(x, y) / 2.0;
  return DensityMatrix(std::move(m));
}

OptimizerConfig fast_opt() {
  OptimizerConfig o;
  o.restarts = 10;
  o.max_iters = 1200;
  return o;
}

}  // namespace

TEST_CASE("gibbs state forms") {
  // H = 0 gives the maximally mixed state
  const DensityMatrix flat = gibbs_state(Hamiltonian::zero(3), 1.0);
  CHECK((flat.matrix() - ComplexMatrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-12);

  const DensityMatrix g = gibbs_state(Hamiltonian::qubit(kE), kKt);
  CHECK(g.matrix()(0, 0).real() == doctest::Approx(1.0 / kZ).epsilon(1e-12));
  CHECK(g.matrix()(1, 1).real() == doctest::Approx(kW / kZ).epsilon(1e-12));

  // high-temperature limit approaches I/2
  const DensityMatrix hot = gibbs_state(Hamiltonian::qubit(1.0), 1e6);
  CHECK((hot.matrix() - ComplexMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-6);

  // gibbs commutes with H
  Rng rng(3);
  ComplexMatrix h(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h(i, j) = Complex(rng.gaussian(), rng.gaussian());
  h = hermitize(h);
  const Hamiltonian ham(h);
  const DensityMatrix gg = gibbs_state(ham, 0.7);
  CHECK((gg.matrix() * h - h * gg.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("distillable work closed forms") {
  const ThermalContext ctx = qubit_ctx();
  CHECK(distillable_work(ctx.gibbs(), ctx) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(distillable_work(DensityMatrix::basis_state(2, 0), ctx) ==
        doctest::Approx(kKt * kLnZ).epsilon(1e-12));
  CHECK(distillable_work(DensityMatrix::basis_state(2, 1), ctx) ==
        doctest::Approx(kE + kKt * kLnZ).epsilon(1e-12));
}

TEST_CASE("free energy identity") {
  // W = tr[rho H] - kT S(rho) - (tr[gamma H] - kT S(gamma))
  const ThermalContext ctx = qubit_ctx();
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix rho = random_state(rng, 2);
    const double lhs = distillable_work(rho, ctx);
    const auto free_energy = [&](const DensityMatrix& s) {
      return (s.matrix() * ctx.hamiltonian().matrix).trace().real() - kKt * vn_entropy(s);
    };
    CHECK(lhs == doctest::Approx(free_energy(rho) - free_energy(ctx.gibbs())).epsilon(1e-9));
  }
}

TEST_CASE("channel work: identity channel is worthless and prefers gibbs") {
  const ThermalContext ctx = qubit_ctx();
  const ChannelWorkResult r = channel_work(QuantumChannel::identity(2), ctx, fast_opt());
  CHECK(std::abs(r.work.value) < 1e-9);
  REQUIRE(r.work.achiever.has_value());
  // tie-break picks the free input
  CHECK(distillable_work(*r.work.achiever, ctx) < 1e-5);
}

TEST_CASE("channel work: bit flip extracts the full gap") {
  const ThermalContext ctx = qubit_ctx();
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const ChannelWorkResult r = channel_work(QuantumChannel::from_unitary(x), ctx, fast_opt());
  CHECK(r.work.value == doctest::Approx(kE).epsilon(1e-9));
  // achiever is the ground state
  REQUIRE(r.work.achiever.has_value());
  CHECK(r.work.achiever->matrix()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("channel work: fixed thermal output means nothing to gain") {
  const ThermalContext ctx = qubit_ctx();
  const ChannelWorkResult r =
      channel_work(QuantumChannel::fixed_output(2, ctx.gibbs()), ctx, fast_opt());
  CHECK(std::abs(r.work.value) < 1e-9);
  CHECK(distillable_work(*r.work.achiever, ctx) < 1e-5);
}

TEST_CASE("channel work dominates the gibbs feasible point") {
  const ThermalContext ctx = qubit_ctx();
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    const QuantumChannel e = QuantumChannel::random(2, 2, rng.integer());
    const ChannelWorkResult r = channel_work(e, ctx, fast_opt());
    const double at_gibbs = distillable_work(e.apply(ctx.gibbs()), ctx);
    CHECK(r.work.value >= at_gibbs - 1e-9);
    CHECK(r.work.value >= -1e-12);
    // achiever reproduces the reported value
    CHECK(channel_work_at(e, *r.work.achiever, ctx) ==
          doctest::Approx(r.work.value).epsilon(1e-6));
  }
}

TEST_CASE("unitary channel work agrees with optimizer and Bloch grid") {
  const ThermalContext ctx = qubit_ctx();
  Rng rng(11);
  for (int t = 0; t < 3; ++t) {
    const ComplexMatrix u = random_unitary(2, rng.integer());
    const double exact = unitary_channel_work(u, ctx);

    // 1-degree Bloch sphere brute force; the objective is linear in the
    // state, so pure states suffice.
    double grid = 0.0;
    const ComplexMatrix shifted =
        u.adjoint() * ctx.hamiltonian().matrix * u - ctx.hamiltonian().matrix;
    for (int it = 0; it <= 180; ++it)
      for (int ip = 0; ip < 360; ++ip) {
        const DensityMatrix s = bloch_state(it * M_PI / 180.0, ip * M_PI / 180.0, 1.0);
        grid = std::max(grid, (s.matrix() * shifted).trace().real());
      }
    CHECK(exact == doctest::Approx(grid).epsilon(1e-3));

    const ChannelWorkResult opt = channel_work(QuantumChannel::from_unitary(u), ctx, fast_opt());
    CHECK(opt.work.value == doctest::Approx(exact).epsilon(1e-5));
  }
}

TEST_CASE("f_max closed forms and dominance over pure states") {
  const ThermalContext ctx = qubit_ctx();
  CHECK(f_max(ctx) == doctest::Approx(kE + kKt * kLnZ).epsilon(1e-12));

  const ThermalContext flat(Hamiltonian::zero(4), 1.0);
  CHECK(f_max(flat) == doctest::Approx(std::log(4.0)).epsilon(1e-12));

  const ThermalContext qutrit(Hamiltonian::diagonal({0, 1, 2}), 1.0);
  CHECK(f_max(qutrit) ==
        doctest::Approx(2.0 + std::log(1 + std::exp(-1.0) + std::exp(-2.0))).epsilon(1e-12));

  Rng rng(13);
  const double cap = f_max(ctx);
  for (int t = 0; t < 10000; ++t)
    CHECK(distillable_work(random_pure(rng, 2), ctx) <= cap + 1e-9);
}

TEST_CASE("bound prefactors") {
  const ThermalContext ctx = qubit_ctx();
  const double s_top = kE / kKt + kLnZ;
  CHECK(work_investment_prefactor(ctx, 1) == doctest::Approx(0.0));
  CHECK(work_investment_prefactor(ctx, 2) ==
        doctest::Approx(std::pow(2.0, 0.25) * (std::sqrt(2.0) * std::log(2.0) + s_top)));
  CHECK(work_investment_prefactor(ctx, 3) ==
        doctest::Approx(2.0 * work_investment_prefactor(ctx, 2)).epsilon(1e-12));

  CHECK(env_correlation_prefactor(ctx, 2) ==
        doctest::Approx(std::pow(2.0, 0.25) * (std::sqrt(2.0) * std::log(2.0) + 3.0 * s_top)));
  const ThermalContext flat(Hamiltonian::zero(2), 1.0);
  CHECK(env_correlation_prefactor(flat, 2) ==
        doctest::Approx(std::pow(2.0, 0.25) *
                        (std::sqrt(2.0) * std::log(2.0) + 3.0 * std::log(2.0))));
}

TEST_CASE("entropy continuity bound edge cases") {
  const ThermalContext ctx = qubit_ctx();
  const DensityMatrix g = ctx.gibbs();
  const DensityMatrix p0 = DensityMatrix::basis_state(2, 0);

  // identical states: lhs 0 <= rhs
  const auto [l1, r1] = entropy_continuity_bound(p0, p0, g, g);
  CHECK(l1.value() == doctest::Approx(0.0));
  CHECK(l1 <= r1);

  // rho1 = rho2 = tau: both sides vanish
  const auto [l2, r2] = entropy_continuity_bound(g, g, g, g);
  CHECK(l2.value() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r2.value() == doctest::Approx(0.0).epsilon(1e-6));

  // infinite radical makes the bound trivial
  const auto [l3, r3] = entropy_continuity_bound(p0, g, g, DensityMatrix::basis_state(2, 1));
  CHECK(r3.is_infinite());
  CHECK(l3 <= r3);
}

TEST_CASE("entropy continuity bound holds on 1000 random quadruples") {
  Rng rng(17);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const DensityMatrix r1 = random_state(rng, 2), r2 = random_state(rng, 2);
    const DensityMatrix sigma = random_state(rng, 2), tau = random_state(rng, 2);
    const auto [lhs, rhs] = entropy_continuity_bound(r1, r2, sigma, tau);
    if (rhs.is_infinite()) continue;
    ++checked;
    REQUIRE(lhs.is_finite());
    CHECK(lhs.value() <= rhs.value() + 1e-12);
  }
  CHECK(checked > 900);  // random states are almost surely full rank
}

TEST_CASE("composite contexts") {
  const ThermalContext ctx = qubit_ctx();
  const ThermalContext two = ctx.n_copies(2);
  CHECK(two.dim() == 4);
  const ComplexMatrix expected = tensor_product(ctx.gibbs().matrix(), ctx.gibbs().matrix());
  CHECK((two.gibbs().matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);

  const ThermalContext with_anc = ctx.join(ctx.trivial_ancilla(4));
  CHECK(with_anc.dim() == 8);
  // pure-system work is unchanged by an untouched maximally mixed ancilla
  Rng rng(19);
  const DensityMatrix rho = random_state(rng, 2);
  const DensityMatrix lifted(
      tensor_product(rho.matrix(), DensityMatrix::maximally_mixed(4).matrix()));
  CHECK(distillable_work(lifted, with_anc) ==
        doctest::Approx(distillable_work(rho, ctx)).epsilon(1e-9));
}
