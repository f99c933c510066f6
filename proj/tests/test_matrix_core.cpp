#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "combworks/channel.hpp"
#include "combworks/matrix_core.hpp"
#include "combworks/parametrize.hpp"
#include "combworks/rng.hpp"

using namespace combworks;

namespace {

DensityMatrix random_state(Rng& rng, int d) {
  Eigen::VectorXd x(state_param_count(d));
  for (int i = 0; i < x.size(); ++i) x(i) = rng.gaussian();
  return params_to_state(std::span<const double>(x.data(), x.size()), d);
}

ComplexMatrix random_hermitian(Rng& rng, int d) {
  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return (a + a.adjoint()) / 2.0;
}

DensityMatrix thermal_qubit(double e, double kt) {
  const double w = std::exp(-e / kt);
  ComplexMatrix g = ComplexMatrix::Zero(2, 2);
  g(0, 0) = 1.0 / (1.0 + w);
  g(1, 1) = w / (1.0 + w);
  return DensityMatrix(std::move(g));
}

DensityMatrix bell_state() {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  return DensityMatrix::pure(psi);
}

}  // namespace

TEST_CASE("tensor product basics") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK((tensor_product(i2, i2) - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  ComplexMatrix a = ComplexMatrix::Zero(2, 2), b = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  b(0, 0) = 0.3;
  b(1, 1) = 0.7;
  const ComplexMatrix t = tensor_product(a, b);
  CHECK(t(0, 0).real() == doctest::Approx(0.3));
  CHECK(t(1, 1).real() == doctest::Approx(0.7));
  CHECK(t(2, 2).real() == doctest::Approx(0.0));
  CHECK(t(3, 3).real() == doctest::Approx(0.0));
}

TEST_CASE("tensor product mixed-product property vs direct multiplication") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix a(2, 2), b(2, 2), c(2, 2), d(2, 2);
    for (auto* m : {&a, &b, &c, &d})
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) (*m)(i, j) = Complex(rng.gaussian(), rng.gaussian());
    const ComplexMatrix lhs = tensor_product(a, b) * tensor_product(c, d);
    const ComplexMatrix rhs = tensor_product(a * c, b * d);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("partial trace of a product state") {
  Rng rng(11);
  const DensityMatrix rho = random_state(rng, 2);
  const DensityMatrix sigma = random_state(rng, 3);
  const ComplexMatrix joint = tensor_product(rho.matrix(), sigma.matrix());
  const ComplexMatrix back = partial_trace(joint, {2, 3}, {0});
  CHECK((back - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  const ComplexMatrix other = partial_trace(joint, {2, 3}, {1});
  CHECK((other - sigma.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace of a Bell state is maximally mixed") {
  const ComplexMatrix m = partial_trace(bell_state().matrix(), {2, 2}, {1});
  CHECK((m - ComplexMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("locally thermal globally pure environment pair") {
  // |psi> ~ |00> + exp(-E/2kT) |11> has thermal single-qubit marginals.
  const double e = 1.0, kt = 1.0;
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = 1.0;
  psi(3) = std::exp(-e / (2 * kt));
  const DensityMatrix rho = DensityMatrix::pure(psi);
  const DensityMatrix gamma = thermal_qubit(e, kt);
  for (int slot : {0, 1}) {
    const ComplexMatrix marg = partial_trace(rho.matrix(), {2, 2}, {slot});
    CHECK((marg - gamma.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("partial trace preserves trace and rejects bad dims") {
  Rng rng(13);
  const DensityMatrix rho = random_state(rng, 6);
  const ComplexMatrix m = partial_trace(rho.matrix(), {2, 3}, {0});
  CHECK(std::abs(m.trace().real() - 1.0) < 1e-12);
  CHECK_THROWS(partial_trace(rho.matrix(), {2, 2}, {0}));
}

TEST_CASE("hermitian_eig on diagonal and Pauli-X") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.7;
  d(1, 1) = 0.3;
  const Spectrum s = hermitian_eig(d);
  CHECK(s.eigenvalues(0) == doctest::Approx(0.3));
  CHECK(s.eigenvalues(1) == doctest::Approx(0.7));

  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const Spectrum sx = hermitian_eig(x);
  CHECK(sx.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(sx.eigenvalues(1) == doctest::Approx(1.0));
  // eigenvectors (|0> -/+ |1>)/sqrt(2) up to phase
  for (int c : {0, 1})
    CHECK(std::abs(std::abs(sx.eigenvectors(0, c)) - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("hermitian_eig reconstruction oracle across sizes") {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + static_cast<int>(rng.integer() % 15);  // up to 16
    const ComplexMatrix m = random_hermitian(rng, d);
    const Spectrum s = hermitian_eig(m);
    const ComplexMatrix back =
        s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.adjoint();
    CHECK((back - m).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((s.eigenvectors.adjoint() * s.eigenvectors - ComplexMatrix::Identity(d, d))
              .cwiseAbs()
              .maxCoeff() < 1e-8);
    for (int i = 1; i < d; ++i) CHECK(s.eigenvalues(i) >= s.eigenvalues(i - 1));
  }
  CHECK_THROWS(hermitian_eig(ComplexMatrix::Random(3, 3)));
}

TEST_CASE("von Neumann entropy basics") {
  CHECK(vn_entropy(DensityMatrix::basis_state(2, 0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(vn_entropy(DensityMatrix::maximally_mixed(2)) == doctest::Approx(std::log(2.0)));
  // thermal qubit closed form at E = kT = 1
  const double w = std::exp(-1.0);
  const double p1 = w / (1 + w), p0 = 1 / (1 + w);
  CHECK(vn_entropy(thermal_qubit(1, 1)) ==
        doctest::Approx(-p0 * std::log(p0) - p1 * std::log(p1)).epsilon(1e-12));
}

TEST_CASE("relative entropy values and infinity") {
  Rng rng(19);
  const DensityMatrix rho = random_state(rng, 3);
  CHECK(rel_entropy(rho, rho).value() == doctest::Approx(0.0).epsilon(1e-9));

  // S(|1><1| || gamma) = E/kT + ln(1 + exp(-E/kT))
  const DensityMatrix gamma = thermal_qubit(1, 1);
  const ExtReal s = rel_entropy(DensityMatrix::basis_state(2, 1), gamma);
  CHECK(s.is_finite());
  CHECK(s.value() == doctest::Approx(1.0 + std::log(1.0 + std::exp(-1.0))).epsilon(1e-12));

  const ExtReal inf =
      rel_entropy(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1));
  CHECK(inf.is_infinite());
  CHECK(ExtReal::finite(1e12) < inf);
  CHECK((inf + ExtReal::finite(1.0)).is_infinite());
}

TEST_CASE("trace distance basics and Pinsker") {
  Rng rng(23);
  const DensityMatrix a = random_state(rng, 2);
  CHECK(trace_distance(a, a) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(trace_distance(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1)) ==
        doctest::Approx(2.0));
  // ||rho - tau||^2 / 2 <= S(rho || tau) on random pairs
  for (int t = 0; t < 200; ++t) {
    const DensityMatrix rho = random_state(rng, 2);
    const DensityMatrix tau = random_state(rng, 2);
    const double td = trace_distance(rho, tau);
    const ExtReal s = rel_entropy(rho, tau);
    CHECK(td * td / 2.0 <= s.value_or_inf() + 1e-9);
  }
}

TEST_CASE("trace distance symmetry and triangle inequality") {
  Rng rng(29);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix a = random_state(rng, 3), b = random_state(rng, 3),
                        c = random_state(rng, 3);
    CHECK(trace_distance(a, b) == doctest::Approx(trace_distance(b, a)));
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12);
  }
}

TEST_CASE("multipartite mutual information") {
  Rng rng(31);
  const DensityMatrix r1 = random_state(rng, 2), r2 = random_state(rng, 2);
  const DensityMatrix prod(tensor_product(r1.matrix(), r2.matrix()));
  CHECK(multi_mutual_info(prod, {2, 2}) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(multi_mutual_info(bell_state(), {2, 2}) == doctest::Approx(2.0 * std::log(2.0)));

  // globally pure, locally thermal pair: I = 2 S(gamma)
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = 1.0;
  psi(3) = std::exp(-0.5);
  const double sg = vn_entropy(thermal_qubit(1, 1));
  CHECK(multi_mutual_info(DensityMatrix::pure(psi), {2, 2}) ==
        doctest::Approx(2 * sg).epsilon(1e-10));

  // two formulas agree: I = S(rho || prod of marginals)
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho = random_state(rng, 4);
    const ComplexMatrix m1 = partial_trace(rho.matrix(), {2, 2}, {0});
    const ComplexMatrix m2 = partial_trace(rho.matrix(), {2, 2}, {1});
    const ExtReal s = rel_entropy(rho, DensityMatrix(tensor_product(m1, m2)));
    CHECK(std::abs(multi_mutual_info(rho, {2, 2}) - s.value_or_inf()) < 1e-8);
  }
}

TEST_CASE("data processing inequality under random channels") {
  Rng rng(37);
  for (int t = 0; t < 200; ++t) {
    const DensityMatrix rho = random_state(rng, 2);
    const DensityMatrix sigma = random_state(rng, 2);
    const QuantumChannel e = QuantumChannel::random(2, 2, rng.integer());
    const ExtReal before = rel_entropy(rho, sigma);
    const ExtReal after = rel_entropy(e.apply(rho), e.apply(sigma));
    if (before.is_finite()) CHECK(after.value_or_inf() <= before.value() + 1e-8);
  }
}

TEST_CASE("relative entropy additivity and decomposition") {
  Rng rng(41);
  for (int t = 0; t < 40; ++t) {
    const DensityMatrix r1 = random_state(rng, 2), r2 = random_state(rng, 2);
    const DensityMatrix s1 = random_state(rng, 2), s2 = random_state(rng, 2);
    const ExtReal joint = rel_entropy(DensityMatrix(tensor_product(r1.matrix(), r2.matrix())),
                                      DensityMatrix(tensor_product(s1.matrix(), s2.matrix())));
    const double split = rel_entropy(r1, s1).value_or_inf() + rel_entropy(r2, s2).value_or_inf();
    if (joint.is_finite()) CHECK(joint.value() == doctest::Approx(split).epsilon(1e-9));
  }
  // S(rho12 || s1 (x) s2) = S(rho1||s1) + S(rho2||s2) + I(1:2)
  for (int t = 0; t < 40; ++t) {
    const DensityMatrix rho = random_state(rng, 4);
    const DensityMatrix s1 = random_state(rng, 2), s2 = random_state(rng, 2);
    const DensityMatrix m1(partial_trace(rho.matrix(), {2, 2}, {0}));
    const DensityMatrix m2(partial_trace(rho.matrix(), {2, 2}, {1}));
    const ExtReal lhs = rel_entropy(rho, DensityMatrix(tensor_product(s1.matrix(), s2.matrix())));
    const double rhs = rel_entropy(m1, s1).value_or_inf() + rel_entropy(m2, s2).value_or_inf() +
                       multi_mutual_info(rho, {2, 2});
    if (lhs.is_finite() && std::isfinite(rhs))
      CHECK(lhs.value() == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("entropy is unitarily invariant") {
  Rng rng(43);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix rho = random_state(rng, 3);
    const ComplexMatrix u = random_unitary(3, rng.integer());
    const DensityMatrix rotated(u * rho.matrix() * u.adjoint());
    CHECK(vn_entropy(rotated) == doctest::Approx(vn_entropy(rho)).epsilon(1e-9));
  }
}

TEST_CASE("permute and embed helpers") {
  Rng rng(47);
  const DensityMatrix a = random_state(rng, 2), b = random_state(rng, 3);
  const ComplexMatrix ab = tensor_product(a.matrix(), b.matrix());
  const ComplexMatrix ba = permute_systems(ab, {2, 3}, {1, 0});
  CHECK((ba - tensor_product(b.matrix(), a.matrix())).cwiseAbs().maxCoeff() < 1e-12);

  // embedding a swap on slots (0, 2) of a three-qubit space
  const ComplexMatrix rho3 =
      tensor_product(tensor_product(a.matrix(), b.matrix().topLeftCorner(2, 2)), a.matrix());
  (void)rho3;
  const ComplexMatrix x = [] {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
  }();
  const ComplexMatrix lifted = embed_on_slots(x, {2, 2, 2}, {1});
  const ComplexMatrix expect =
      tensor_product(tensor_product(ComplexMatrix::Identity(2, 2), x),
                     ComplexMatrix::Identity(2, 2));
  CHECK((lifted - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("link contract reproduces channel application") {
  Rng rng(53);
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix rho = random_state(rng, 2);
    const QuantumChannel e = QuantumChannel::random(2, 2, rng.integer());
    const ComplexMatrix out =
        link_contract(rho.matrix(), {2}, {0}, e.choi(), {2, 2}, {0});
    CHECK((out - e.apply(rho).matrix()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("density matrix construction rejects invalid input") {
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);  // trace 2
  CHECK_THROWS(DensityMatrix(bad));
  ComplexMatrix nonherm(2, 2);
  nonherm << 0.5, 0.5, -0.5, 0.5;
  CHECK_THROWS(DensityMatrix(nonherm));
}
