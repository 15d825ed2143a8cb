#include <doctest.h>

#include <cmath>

#include "qplab/gates.hpp"
#include "qplab/measure.hpp"
#include "qplab/metrics.hpp"
#include "qplab/random.hpp"

using namespace qplab;

TEST_CASE("swap test probabilities") {
  const PureState psi = haar_state(2, 1);
  CHECK(swap_test(DensityMatrix::from_pure(psi), DensityMatrix::from_pure(psi))
            .probability_of("0") == doctest::Approx(1.0).epsilon(1e-12));

  const DensityMatrix p0 = DensityMatrix::from_pure(PureState::basis(1, 0));
  const DensityMatrix p1 = DensityMatrix::from_pure(PureState::basis(1, 1));
  CHECK(swap_test(p0, p1).probability_of("0") == doctest::Approx(0.5));

  // Pure vs mixed: 1/2 + F(rho, phi)^2 / 2.
  for (int s = 0; s < 20; ++s) {
    const PureState phi = haar_state(2, 100 + s);
    const DensityMatrix rho = random_density(2, 200 + s);
    const double f = fidelity(phi, rho);
    const MeasurementOutcomeDist dist = swap_test(DensityMatrix::from_pure(phi), rho);
    CHECK(dist.probability_of("0") == doctest::Approx(0.5 + 0.5 * f * f).epsilon(1e-10));
    // Full-circuit law: 1/2 + Tr(ab)/2 for any pair.
    const DensityMatrix sigma = random_density(2, 300 + s);
    CHECK(swap_test(rho, sigma).probability_of("0") ==
          doctest::Approx(swap_test_pass_probability(rho, sigma)).epsilon(1e-10));
  }
}

TEST_CASE("swap test post states come from the circuit") {
  const DensityMatrix a = random_density(1, 5);
  const DensityMatrix b = random_density(1, 6);
  const MeasurementOutcomeDist dist = swap_test(a, b);
  double total = 0.0;
  for (const MeasurementOutcome& o : dist.outcomes()) {
    total += o.probability;
    if (o.post_state) {
      CHECK(o.post_state->matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(o.post_state->n_qubits() == 2);
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("partial swap test") {
  // phi = |psi>|G>: accept with certainty.
  const PureState psi = haar_state(1, 11);
  const PureState garbage = haar_state(2, 12);
  CHECK(partial_swap_accept_probability(tensor(psi, garbage), psi) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // phi orthogonal to psi on B: accept probability exactly 1/2.
  const PureState zero = PureState::zero(1);
  const PureState one = PureState::basis(1, 1);
  CHECK(partial_swap_accept_probability(tensor(one, garbage), zero) == doctest::Approx(0.5));

  // Random phi: accept = 1/2 + ||(P_psi (x) I) phi||^2 / 2 (projection oracle).
  for (int s = 0; s < 20; ++s) {
    const PureState phi = haar_state(3, 400 + s);
    const PureState target = haar_state(1, 500 + s);
    const Vector proj = apply_on_qubits(target.projector(), {0}, phi.amplitudes());
    const double expected = 0.5 + 0.5 * proj.squaredNorm();
    CHECK(partial_swap_accept_probability(phi, target) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("hadamard overlap test") {
  const PureState a = haar_state(2, 21);
  std::vector<int> all{0, 1};
  // Equal branches: summed X expectation is 1.
  double ex = 0.0;
  for (long e = 0; e < 4; ++e) ex += hadamard_x_expectation(a, a, all, e);
  CHECK(ex == doctest::Approx(1.0).epsilon(1e-10));

  // Orthogonal branches: 0.
  const PureState b(2, [&] {
    Vector v = haar_state(2, 22).amplitudes();
    v -= a.amplitudes().dot(v) * a.amplitudes();
    return Vector(v / v.norm());
  }());
  double ex2 = 0.0;
  for (long e = 0; e < 4; ++e) ex2 += hadamard_x_expectation(a, b, all, e);
  CHECK(ex2 == doctest::Approx(0.0).epsilon(1e-10));

  // Against a brute-force expansion of the five-step controlled circuit.
  for (int s = 0; s < 10; ++s) {
    const PureState b0 = haar_state(2, 600 + s);
    const PureState b1 = haar_state(2, 700 + s);
    // Build |Phi> = (|0>|b0> + |1>|b1>)/sqrt(2) on 3 qubits, control lowest.
    Vector full = Vector::Zero(8);
    for (long x = 0; x < 4; ++x) {
      full(2 * x) = b0.amplitudes()(x) / std::sqrt(2.0);
      full(2 * x + 1) = b1.amplitudes()(x) / std::sqrt(2.0);
    }
    // Hadamard the control, then read joint probabilities directly.
    full = apply_on_qubits(gate_matrix(GateKind::H), {0}, full);
    for (long e = 0; e < 4; ++e) {
      double p_plus = 0.0, p_e = 0.0;
      for (long x = 0; x < 8; ++x) {
        if (((x >> 1) & 3) != e) continue;
        p_e += std::norm(full(x));
        if ((x & 1) == 0) p_plus += std::norm(full(x));
      }
      const double brute = 2.0 * p_plus - p_e;
      CHECK(hadamard_x_expectation(b0, b1, {0, 1}, e) == doctest::Approx(brute).epsilon(1e-10));
      const MeasurementOutcomeDist dist = hadamard_overlap_test(b0, b1, {0, 1});
      CHECK(dist.probability_of("+|" + std::to_string(e)) ==
            doctest::Approx(p_plus).epsilon(1e-10));
    }
  }
}

TEST_CASE("sequential measurements and the union bound") {
  const DensityMatrix rho = random_density(2, 31);
  // All tests = I: accept with certainty, state untouched.
  std::vector<HermitianOperator> eye(3, HermitianOperator::identity(2));
  SequentialMeasureResult triv = sequential_measure(rho, eye);
  CHECK(triv.accept_probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(triv.post_trace_distance == doctest::Approx(0.0).epsilon(1e-10));

  // Single near-certain projector: accept = 1 - eps >= 1 - 4 eps.
  const PureState psi = haar_state(2, 32);
  SequentialMeasureResult one =
      sequential_measure(DensityMatrix::from_pure(psi),
                         {HermitianOperator(2, psi.projector())});
  CHECK(one.accept_probability == doctest::Approx(1.0).epsilon(1e-10));

  // Five random near-certain projectors: union bound and disturbance bound.
  for (int s = 0; s < 10; ++s) {
    const PureState base = haar_state(2, 800 + s);
    std::vector<HermitianOperator> tests;
    for (int i = 0; i < 5; ++i) {
      Vector dir = haar_state(2, 900 + 10 * s + i).amplitudes();
      dir -= base.amplitudes().dot(dir) * base.amplitudes();
      dir /= dir.norm();
      // projector onto span{base, small tilt of dir}: near-certain on base
      Vector tilted = std::sqrt(0.999) * base.amplitudes() + std::sqrt(0.001) * dir;
      Matrix basis(4, 2);
      basis.col(0) = tilted;
      Vector second = dir - tilted.dot(dir) * tilted;
      basis.col(1) = second / second.norm();
      tests.emplace_back(2, Matrix(basis * basis.adjoint()));
    }
    SequentialMeasureResult res = sequential_measure(DensityMatrix::from_pure(base), tests);
    double sum_eps = 0.0;
    for (double e : res.epsilons) sum_eps += std::max(0.0, e);
    CHECK(res.accept_probability >= 1.0 - 4.0 * sum_eps - 1e-10);
    CHECK(res.post_trace_distance <= std::sqrt(sum_eps) + 1e-10);
  }

  // Non-projector input is rejected.
  Matrix half = 0.5 * Matrix::Identity(4, 4);
  CHECK_THROWS_AS(sequential_measure(rho, {HermitianOperator(2, half)}), PreconditionError);
}

TEST_CASE("trajectory sampling") {
  std::vector<MeasurementOutcome> outs;
  outs.push_back({"0", 1.0, DensityMatrix::maximally_mixed(1)});
  outs.push_back({"1", 0.0, std::nullopt});
  const MeasurementOutcomeDist sure(std::move(outs));
  for (const std::string& label : sample_trajectory(sure, 100, 3)) CHECK(label == "0");

  std::vector<MeasurementOutcome> coin;
  coin.push_back({"0", 0.5, DensityMatrix::maximally_mixed(1)});
  coin.push_back({"1", 0.5, DensityMatrix::maximally_mixed(1)});
  const MeasurementOutcomeDist fair(std::move(coin));
  const auto run1 = sample_trajectory(fair, 100000, 77);
  const auto run2 = sample_trajectory(fair, 100000, 77);
  CHECK(run1 == run2);
  long heads = 0;
  for (const std::string& label : run1)
    if (label == "0") ++heads;
  CHECK(std::abs(heads / 100000.0 - 0.5) < 0.01);
}

TEST_CASE("monte carlo matches analytic swap test within Hoeffding band") {
  const long n = 20000;
  const double band = 3.0 * hoeffding_half_width(n, 1e-3);
  for (int s = 0; s < 5; ++s) {
    const DensityMatrix a = random_density(1, 1500 + s);
    const DensityMatrix b = random_density(1, 1600 + s);
    const MeasurementOutcomeDist dist = swap_test(a, b);
    long pass = 0;
    for (const std::string& label : sample_trajectory(dist, n, 42 + s))
      if (label == "0") ++pass;
    CHECK(std::abs(pass / static_cast<double>(n) - dist.probability_of("0")) < band);
  }
}

TEST_CASE("non-interference of orthogonal conditional branches") {
  // Isometry F|i>_A = sum_x beta_i^x |x>_B |c_{i,x}>_C with the conditional
  // post states |c_{i,x}> pairwise orthonormal: measuring B on the input
  // superposition sum_i alpha_i |i> gives p^x = sum_i alpha_i^2 p_i^x.
  Rng rng(9);
  for (int trial = 0; trial < 6; ++trial) {
    double beta[2][2];
    for (int i = 0; i < 2; ++i) {
      const double t = rng.uniform();
      beta[i][0] = std::sqrt(t);
      beta[i][1] = std::sqrt(1.0 - t);
    }
    const double a0 = std::sqrt(rng.uniform());
    const double a1 = std::sqrt(1.0 - a0 * a0);
    // Output register: B (1 qubit, low) then C (2 qubits, basis |i + 2x>).
    Vector out = Vector::Zero(8);
    const double alpha[2] = {a0, a1};
    for (int i = 0; i < 2; ++i)
      for (int x = 0; x < 2; ++x) out(x + 2 * (i + 2 * x)) += alpha[i] * beta[i][x];
    const PureState state(3, out / out.norm());
    for (int x = 0; x < 2; ++x) {
      double px = 0.0;
      for (long idx = 0; idx < 8; ++idx)
        if ((idx & 1) == x) px += std::norm(state.amplitudes()(idx));
      const double expected = a0 * a0 * beta[0][x] * beta[0][x] +
                              a1 * a1 * beta[1][x] * beta[1][x];
      CHECK(px == doctest::Approx(expected).epsilon(1e-8));
    }
  }
}
