#include <doctest.h>

#include <cmath>

#include "qplab/metrics.hpp"
#include "qplab/random.hpp"
#include "qplab/serialize.hpp"
#include "qplab/state.hpp"
#include "test_oracles.hpp"

using namespace qplab;

namespace {

PureState plus_state() {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return PureState(1, v);
}

}  // namespace

TEST_CASE("tensor products") {
  const PureState zero = PureState::zero(1);
  const PureState zz = tensor(zero, zero);
  CHECK(zz.amplitudes()(0) == cxd(1.0, 0.0));
  CHECK(zz.amplitudes().tail(3).norm() == doctest::Approx(0.0));

  const PureState pz = tensor(plus_state(), zero);
  CHECK(pz.amplitudes()(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(pz.amplitudes()(1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(pz.amplitudes()(2)) == doctest::Approx(0.0));

  // random 1-qubit pair against the double-loop Kronecker oracle
  for (int s = 0; s < 10; ++s) {
    const DensityMatrix a = random_density(1, 100 + s);
    const DensityMatrix b = random_density(1, 200 + s);
    const Matrix expect = oracle::naive_kron(a.matrix(), b.matrix());
    CHECK((tensor(a, b).matrix() - expect).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("partial trace") {
  // Tr_B of the maximally entangled pair is I/2.
  Vector bell(4);
  bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  const DensityMatrix reduced = partial_trace(PureState(2, bell), {0});
  CHECK((reduced.matrix() - Matrix::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff() < 1e-12);

  // Product case: Tr_B(rho (x) sigma) = rho.
  const DensityMatrix rho = random_density(1, 7);
  const DensityMatrix sigma = random_density(2, 8);
  const DensityMatrix back = partial_trace(tensor(rho, sigma), {0});
  CHECK((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);

  // Random 3-qubit pure state against the index-summation oracle.
  for (int s = 0; s < 8; ++s) {
    const PureState psi = haar_state(3, 33 + s);
    const DensityMatrix full = DensityMatrix::from_pure(psi);
    const DensityMatrix got = partial_trace(full, {0, 2});
    const Matrix expect = oracle::naive_partial_trace(full.matrix(), 3, {0, 2});
    CHECK((got.matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(got.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(partial_trace(rho, {3}), PreconditionError);
  CHECK_THROWS_AS(partial_trace(sigma, std::vector<int>{0, 0}), PreconditionError);
}

TEST_CASE("trace distance") {
  const DensityMatrix rho = random_density(2, 5);
  CHECK(trace_distance(rho, rho) == doctest::Approx(0.0).epsilon(1e-12));

  const DensityMatrix p0 = DensityMatrix::from_pure(PureState::basis(1, 0));
  const DensityMatrix p1 = DensityMatrix::from_pure(PureState::basis(1, 1));
  CHECK(trace_distance(p0, p1) == doctest::Approx(1.0));

  // Uniform state on a half-dimensional subspace vs maximally mixed: 1/2.
  for (int lambda = 1; lambda <= 3; ++lambda) {
    const Matrix u = haar_unitary(lambda, 17 + lambda);
    const DensityMatrix is =
        DensityMatrix::uniform_on_subspace(lambda, u.leftCols((1L << lambda) / 2));
    CHECK(trace_distance(is, DensityMatrix::maximally_mixed(lambda)) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }

  CHECK_THROWS_AS(trace_distance(p0, random_density(2, 1)), PreconditionError);
}

TEST_CASE("fidelity") {
  const DensityMatrix rho = random_density(2, 9);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fidelity(PureState::zero(1), DensityMatrix::from_pure(plus_state())) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));

  // Pure pair: F^2 = 1 - TD^2.
  for (int s = 0; s < 25; ++s) {
    const PureState a = haar_state(2, 300 + s);
    const PureState b = haar_state(2, 400 + s);
    const double f = fidelity(DensityMatrix::from_pure(a), DensityMatrix::from_pure(b));
    const double td = trace_distance(a, b);
    CHECK(f * f + td * td == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("metric axioms on random triples") {
  for (int s = 0; s < 40; ++s) {
    const DensityMatrix a = random_density(2, 1000 + s);
    const DensityMatrix b = random_density(2, 2000 + s);
    const DensityMatrix c = random_density(2, 3000 + s);
    const double tab = trace_distance(a, b);
    const double tbc = trace_distance(b, c);
    const double tac = trace_distance(a, c);
    CHECK(tac <= tab + tbc + 1e-8);
    const double f = fidelity(a, b);
    CHECK(1.0 - f <= tab + 1e-8);
    CHECK(tab <= std::sqrt(std::max(0.0, 1.0 - f * f)) + 1e-8);
    // F(rho,sigma)^2 + F(sigma,xi)^2 <= 1 + F(rho,xi)
    CHECK(fidelity(a, b) * fidelity(a, b) + fidelity(b, c) * fidelity(b, c) <=
          1.0 + fidelity(a, c) + 1e-8);
  }
}

TEST_CASE("fidelity monotone under partial trace") {
  for (int s = 0; s < 30; ++s) {
    const DensityMatrix a = random_density(2, 5000 + s);
    const DensityMatrix b = random_density(2, 6000 + s);
    CHECK(fidelity(partial_trace(a, {0}), partial_trace(b, {0})) >= fidelity(a, b) - 1e-8);
  }
}

TEST_CASE("tensor power distance sandwich") {
  for (int s = 0; s < 20; ++s) {
    const DensityMatrix a = random_density(1, 7000 + s);
    const DensityMatrix b = random_density(1, 8000 + s);
    const double eps = trace_distance(a, b);
    for (int l = 2; l <= 6; l += 2) {
      const double td = trace_distance(tensor_power(a, l), tensor_power(b, l));
      CHECK(td > 1.0 - std::exp(-l * eps * eps) - 1e-10);
      CHECK(td <= l * eps + 1e-10);
    }
  }
}

TEST_CASE("uhlmann unitary") {
  // phi = psi: identity already achieves overlap 1.
  const PureState phi = haar_state(4, 11);
  UhlmannResult same = uhlmann_unitary(phi, phi);
  CHECK(same.achieved_overlap == doctest::Approx(1.0).epsilon(1e-10));

  // Two purifications of I/2 have overlap 1 under the right unitary.
  Vector bell(4);
  bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  const PureState epr(2, bell);
  std::vector<int> b_qubits{1};
  const PureState other(2, apply_on_qubits(haar_unitary(1, 21), b_qubits, bell));
  UhlmannResult res = uhlmann_unitary(epr, other);
  CHECK(res.achieved_overlap == doctest::Approx(1.0).epsilon(1e-10));

  // Random 4-qubit pair: achieved overlap equals the reduced-state fidelity.
  for (int s = 0; s < 10; ++s) {
    const PureState x = haar_state(4, 900 + s);
    const PureState y = haar_state(4, 950 + s);
    UhlmannResult r = uhlmann_unitary(x, y);
    CHECK(r.achieved_overlap == doctest::Approx(r.reduced_fidelity).epsilon(1e-8));
    CHECK((r.unitary * r.unitary.adjoint() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("helstrom measurement") {
  const DensityMatrix rho = random_density(2, 31);
  CHECK(helstrom_success_probability(rho, rho) == doctest::Approx(0.5));
  CHECK(helstrom_success_probability(DensityMatrix::from_pure(PureState::basis(1, 0)),
                                     DensityMatrix::from_pure(PureState::basis(1, 1))) ==
        doctest::Approx(1.0));

  // TD = 1/2 pair: success exactly 3/4.
  const Matrix u = haar_unitary(2, 77);
  const DensityMatrix is = DensityMatrix::uniform_on_subspace(2, u.leftCols(2));
  CHECK(helstrom_success_probability(is, DensityMatrix::maximally_mixed(2)) ==
        doctest::Approx(0.75).epsilon(1e-12));

  // Success probability always matches 1/2 + TD/2.
  for (int s = 0; s < 10; ++s) {
    const DensityMatrix a = random_density(2, 1100 + s);
    const DensityMatrix b = random_density(2, 1200 + s);
    CHECK(helstrom_success_probability(a, b) ==
          doctest::Approx(0.5 + 0.5 * trace_distance(a, b)).epsilon(1e-10));
  }
}

TEST_CASE("pretty good measurement") {
  // Symmetric case: both elements are half the support projector.
  const DensityMatrix rho = random_density(2, 41);
  TwoOutcomePovm same = pgm(rho, rho);
  const Matrix supp = support_projector(rho.matrix());
  CHECK((same.e0 - 0.5 * supp).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((same.e0 + same.e1 - supp).cwiseAbs().maxCoeff() < 1e-9);

  // Orthogonal pure states are discriminated exactly.
  const DensityMatrix p0 = DensityMatrix::from_pure(PureState::basis(1, 0));
  const DensityMatrix p1 = DensityMatrix::from_pure(PureState::basis(1, 1));
  CHECK(pgm_error_probability(p0, p1) == doctest::Approx(0.0).epsilon(1e-12));

  // Error at most F/2 on random pairs.
  for (int s = 0; s < 20; ++s) {
    const DensityMatrix a = random_density(2, 1300 + s);
    const DensityMatrix b = random_density(2, 1400 + s);
    CHECK(pgm_error_probability(a, b) <= 0.5 * fidelity(a, b) + 1e-8);
  }
}

TEST_CASE("haar sampling and min eigenpair") {
  const PureState s1 = haar_state(3, 123);
  const PureState s2 = haar_state(3, 123);
  CHECK((s1.amplitudes() - s2.amplitudes()).norm() == 0.0);

  Matrix h = Matrix::Identity(2, 2);
  h(0, 0) = 0.0;  // I - |0><0|
  auto [e0, v0] = min_eigenpair(HermitianOperator(1, h));
  CHECK(e0 == doctest::Approx(0.0));
  CHECK(std::abs(v0.amplitudes()(0)) == doctest::Approx(1.0));

  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  auto [ez, vz] = min_eigenpair(HermitianOperator(1, z));
  CHECK(ez == doctest::Approx(-1.0));
  CHECK(std::abs(vz.amplitudes()(1)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(haar_state(kMaxQubits + 1, 1), PreconditionError);
}

TEST_CASE("state construction guards") {
  Vector bad(2);
  bad << 1.0, 1.0;  // unnormalized
  CHECK_THROWS_AS(PureState(1, bad), PreconditionError);

  Matrix nz(2, 2);
  nz << cxd(0.5, 0.0), cxd(0.0, 0.3), cxd(0.0, 0.1), cxd(0.5, 0.0);
  CHECK_THROWS_AS(DensityMatrix(1, nz), PreconditionError);  // not Hermitian

  Matrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityMatrix(1, neg), PreconditionError);  // negative eigenvalue
}

TEST_CASE("json round trips") {
  const PureState psi = haar_state(2, 55);
  const PureState psi2 = pure_state_from_json(to_json(psi));
  CHECK((psi.amplitudes() - psi2.amplitudes()).norm() < 1e-15);

  const DensityMatrix rho = random_density(2, 56);
  const DensityMatrix rho2 = density_from_json(to_json(rho));
  CHECK((rho.matrix() - rho2.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  nlohmann::json j = to_json(rho);
  j["version"] = "qplab-0";
  CHECK_THROWS(density_from_json(j));
}

TEST_CASE("rng determinism and splitting") {
  Rng a(99), b(99);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng parent(7);
  Rng c1 = parent.child(1);
  Rng c2 = parent.child(2);
  CHECK(c1.next_u64() != c2.next_u64());
}
