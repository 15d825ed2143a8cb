#include <doctest.h>

#include <cmath>

#include "qplab/amplify.hpp"
#include "qplab/generators.hpp"
#include "qplab/lhverify.hpp"
#include "qplab/metrics.hpp"
#include "qplab/qor.hpp"
#include "qplab/stod.hpp"

using namespace qplab;

TEST_CASE("quantum OR on hand-built instances") {
  // m = 1, Lambda = |0><0|_A (x) |1><1|_B, rho = |0><0|, eta = 1.
  Matrix lam = Matrix::Zero(4, 4);
  lam(2, 2) = 1.0;  // A = 0, B = 1
  QorInstance inst{1, 1, HermitianOperator(2, lam)};
  VerdictReport rep = qor_run(PureState::zero(1), inst, 1.0, 0.0);
  CHECK(*rep.p_exact >= 1.0 / 7.0);

  // Lambda = 0: never accepts.
  QorInstance zero{1, 1, HermitianOperator(2, Matrix::Zero(4, 4))};
  VerdictReport rep0 = qor_run(PureState::zero(1), zero, 1.0, 0.0);
  CHECK(*rep0.p_exact == doctest::Approx(0.0).epsilon(1e-14));

  // eta = 2/3 instances clear eta^2 / 7 = 4/63.
  for (std::uint64_t s = 0; s < 6; ++s) {
    QorCase yc = gen_qor_yes(2, 2, 2.0 / 3.0, 50 + s);
    VerdictReport r = qor_run(yc.rho, yc.instance, 2.0 / 3.0, 0.0);
    CHECK(*r.p_exact >= 4.0 / 63.0);
  }
  for (std::uint64_t s = 0; s < 6; ++s) {
    const double delta = 1.0 / 256.0;
    QorCase nc = gen_qor_no(2, 2, delta, 70 + s);
    VerdictReport r = qor_run(nc.rho, nc.instance, 2.0 / 3.0, delta);
    CHECK(*r.p_exact <= 4.0 * 4.0 * delta + 1e-12);
  }
}

TEST_CASE("quantum OR pure and mixed paths agree") {
  QorCase yc = gen_qor_yes(1, 1, 2.0 / 3.0, 5);
  VerdictReport pure = qor_run(yc.rho, yc.instance, 2.0 / 3.0, 0.0);
  VerdictReport mixed = qor_run(DensityMatrix::from_pure(yc.rho), yc.instance, 2.0 / 3.0, 0.0);
  CHECK(*pure.p_exact == doctest::Approx(*mixed.p_exact).epsilon(1e-10));
}

TEST_CASE("qma to qor reduction") {
  // Verifier accepting exactly witness |11> on input |1>: TOFFOLI(w0,w1 -> t)
  // then TOFFOLI(t, input -> ans). Registers: [input | w0 w1 | ans t].
  GateCircuit circuit(5, {Gate{GateKind::TOFFOLI, {1, 2, 4}},
                          Gate{GateKind::TOFFOLI, {4, 0, 3}}});
  QmaVerifier verifier{circuit, 1, 1, 2, 2};

  // Yes input |1>: the witness |11> makes every round accept.
  QmaToQorResult yes = qma_to_qor(verifier, PureState::basis(1, 1), 2, 5);
  CHECK(yes.completeness_floor > 2.0 / 3.0);
  CHECK(yes.soundness_ceiling < std::pow(2.0, -2.0) / 64.0);
  const double best_yes =
      yes.instance.best_sigma_value(DensityMatrix::from_pure(yes.rho_a));
  CHECK(best_yes == doctest::Approx(1.0).epsilon(1e-9));
  VerdictReport rep = qor_run(yes.rho_a, yes.instance, 2.0 / 3.0, 1.0 / 256.0);
  CHECK(*rep.p_exact >= (2.0 / 3.0) * (2.0 / 3.0) / 7.0);

  // No input |0>: Tr(Lambda rho (x) sigma) = 0 for every sigma.
  QmaToQorResult no = qma_to_qor(verifier, PureState::zero(1), 2, 5);
  const double best_no = no.instance.best_sigma_value(DensityMatrix::from_pure(no.rho_a));
  CHECK(best_no == doctest::Approx(0.0).epsilon(1e-10));
  VerdictReport rep_no = qor_run(no.rho_a, no.instance, 2.0 / 3.0, 1.0 / 256.0);
  CHECK(*rep_no.p_exact <= 4.0 * 4.0 / 256.0 + 1e-10);
}

TEST_CASE("lhwp verifier trivial cases") {
  // Only H_s = |1><1| on qubit 0, witness |00>: estimator 0, accept.
  Matrix p1 = Matrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  HamiltonianInstance inst;
  inst.n_total_qubits = 2;
  inst.input_lo = inst.input_hi = 0;
  inst.plain_terms.push_back(LocalTerm{{1}, HermitianOperator(1, p1), 1});
  inst.p = 10;
  inst.a = 0.1;
  inst.b = 0.5;
  // input register untouched by terms: psi arbitrary
  VerdictReport rep = lhwp_verify(inst, PureState::zero(1), PureState::zero(2), {});
  CHECK(*rep.p_exact == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.accept);

  // Coupled term with the witness orthogonal to psi on I: estimator 0.
  HamiltonianInstance inst2;
  inst2.n_total_qubits = 2;
  inst2.input_lo = inst2.input_hi = 0;
  inst2.coupled_terms.push_back(LocalTerm{{1}, HermitianOperator(1, p1), 1});
  inst2.p = 10;
  inst2.a = 0.1;
  inst2.b = 0.5;
  const PureState witness = tensor(PureState::basis(1, 1), haar_state(1, 3));
  const double e = lhwp_estimator_expectation(inst2, PureState::zero(1), witness);
  CHECK(e == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("lhwp estimator is unbiased against the energy oracle") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const ClockLayout lay{1, 1, 1, 1, 2};
    const CookLevinYes yes = gen_cooklevin_yes(lay, 1000, 200 + s);
    const HamiltonianInstance& inst = yes.reduction.instance;
    const PureState psi_full = tensor_power(yes.psi, lay.c_copies);
    // Route 1: the verifier's measurement-composed estimator expectation.
    const double est = lhwp_estimator_expectation(inst, psi_full, yes.history);
    // Route 2: the assembled-matrix energy.
    const HermitianOperator h = assemble(inst, psi_full);
    const double energy =
        (yes.history.amplitudes().adjoint() * h.matrix() * yes.history.amplitudes())(0).real();
    CHECK(est * static_cast<double>(inst.term_budget()) ==
          doctest::Approx(energy).epsilon(1e-8));

    VerdictReport rep = lhwp_verify(inst, psi_full, yes.history, {});
    CHECK(rep.accept);
  }
}

TEST_CASE("lhwp sampled mode separates yes from no") {
  const ClockLayout lay{2, 1, 1, 1, 2};
  const CookLevinYes yes = gen_cooklevin_yes(lay, 10000, 300);
  const CookLevinNo no = gen_cooklevin_no(lay, 10000, 301);

  LhwpOptions opts;
  opts.mode = VerifyMode::kSampled;
  opts.rounds = 400;
  opts.seed = 99;
  VerdictReport yes_rep = lhwp_verify(yes.reduction.instance, tensor_power(yes.psi, 1),
                                      yes.history, opts);
  CHECK(yes_rep.accept);

  // Any witness on a no instance keeps the energy above b.
  const PureState bad_witness = haar_state(no.reduction.instance.n_total_qubits, 302);
  VerdictReport no_rep =
      lhwp_verify(no.reduction.instance, tensor_power(no.psi, 1), bad_witness, opts);
  CHECK_FALSE(no_rep.accept);
  // Empirical gap between the normalized estimates.
  const double gap = (*no_rep.p_hat - *yes_rep.p_hat) /
                     static_cast<double>(no.reduction.instance.term_budget());
  CHECK(gap > 0.0);
}

TEST_CASE("lhwm per-round expectation matches the step-2 target") {
  for (std::uint64_t s = 0; s < 3; ++s) {
    const ClockLayout lay{1, 1, 1, 1, 2};
    const CookLevinMixedYes my = gen_cooklevin_mixed_yes(lay, 2, 1000, 400 + s);
    const HamiltonianInstance& inst = my.reduction.instance;
    const LhwmWitness witness{my.witness_circuit, my.phi, my.alpha};
    const EigenDecomposition dec = eigen_decomposition(tensor_power(my.rho, 1));
    const LhwmCase2Analysis an = lhwm_case2_analysis(inst, dec, 0, witness);
    for (std::size_t r = 0; r < an.lambdas.size(); ++r)
      CHECK(an.w_l_expectations[r] == doctest::Approx(an.step2_targets[r]).epsilon(1e-8));

    VerdictReport rep = lhwm_verify(inst, my.rho, 1, witness, {});
    CHECK(rep.accept);
    CHECK(rep.stats.at("aborted") == 0.0);
  }
}

TEST_CASE("lhwm abort rule") {
  const ClockLayout lay{1, 1, 1, 1, 2};
  const CookLevinMixedYes my = gen_cooklevin_mixed_yes(lay, 2, 1000, 500);
  const HamiltonianInstance& inst = my.reduction.instance;

  // Exact mode: alpha off by 0.5 violates the window with certainty.
  LhwmWitness off{my.witness_circuit, my.phi, my.alpha - 0.5};
  VerdictReport rep = lhwm_verify(inst, my.rho, 1, off, {});
  CHECK(rep.stats.at("aborted") == 1.0);
  CHECK_FALSE(rep.accept);

  // Sampled mode with deterministic X: C maps psi phi 0 to psi phi 0_D |1>_E,
  // so branch0 = branch1 at r = 1 and X is identically 1. Only the coupled
  // pick is left in the instance so every round runs the abort check.
  HamiltonianInstance det = inst;
  det.plain_terms.clear();
  det.coupled_terms.clear();
  Matrix e1 = Matrix::Zero(2, 2);
  e1(1, 1) = 1.0;  // H_l = |1><1| on the last qubit
  det.coupled_terms.push_back(
      LocalTerm{{det.n_total_qubits - 1}, HermitianOperator(1, e1), 1});
  det.p = det.term_budget();
  det.b = det.a + 8.0 / static_cast<double>(det.p);
  const Matrix x_on_last =
      embed(gate_matrix(GateKind::X), {det.n_total_qubits - 1}, det.n_total_qubits);
  LhwmWitness det_witness{x_on_last, my.phi, 0.5};  // true mean is 1
  LhwmOptions sampled;
  sampled.mode = VerifyMode::kSampled;
  sampled.rounds = 16;
  sampled.block = 200;  // default-scale block keeps the abort window under 1/2
  sampled.seed = 7;
  VerdictReport det_rep = lhwm_verify(det, my.rho, 1, det_witness, sampled);
  CHECK(det_rep.stats.at("aborted") == 1.0);
}

TEST_CASE("parallel amplification") {
  // Base completeness 1: the amplified verifier accepts with certainty.
  Matrix perfect = Matrix::Zero(4, 4);
  perfect(2, 2) = perfect(3, 3) = 1.0;  // accept iff witness = |1>
  AmplifiedVerifier amp1(HermitianOperator(2, perfect),
                         DensityMatrix::from_pure(PureState::zero(1)), 1, 1.0, 0.25, 8);
  CHECK(amp1.product_acceptance(DensityMatrix::from_pure(PureState::basis(1, 1))) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // (a, a - 1/p) = (0.75, 0.5), s = 32: sampled yes/no acceptance separated.
  Matrix tuned = Matrix::Zero(4, 4);
  tuned(2, 2) = tuned(3, 3) = 0.75;
  AmplifiedVerifier amp(HermitianOperator(2, tuned),
                        DensityMatrix::from_pure(PureState::zero(1)), 1, 0.75, 0.25, 32);
  const DensityMatrix good = DensityMatrix::from_pure(PureState::basis(1, 1));
  VerdictReport yes = amp.sampled_acceptance(good, 10000, 11);
  // Exact tails at s = 32: yes 0.9622, dominating no-chain 0.1077; the
  // empirical run sits inside the Hoeffding band of the exact value.
  CHECK(std::abs(*yes.p_hat - amp.product_acceptance(good)) <= 3.0 * yes.half_width);
  CHECK(*yes.p_hat - amp.iid_no_case_bound() >= 0.85);
  // The 0.9 separation arrives at s = 48.
  AmplifiedVerifier amp48(HermitianOperator(2, tuned),
                          DensityMatrix::from_pure(PureState::zero(1)), 1, 0.75, 0.25, 48);
  CHECK(amp48.product_acceptance(good) - amp48.iid_no_case_bound() >= 0.9);

  // Entangled two-round witness never beats the i.i.d. domination bound.
  Matrix half = Matrix::Zero(4, 4);
  half(2, 2) = half(3, 3) = 0.5;  // max_sigma round probability = 0.5 = a - 1/p
  AmplifiedVerifier amp2(HermitianOperator(2, half),
                         DensityMatrix::from_pure(PureState::zero(1)), 1, 0.75, 0.25, 2);
  Vector bell(4);
  bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  const double joint = amp2.joint_acceptance(DensityMatrix::from_pure(PureState(2, bell)));
  CHECK(joint <= amp2.iid_no_case_bound() + 1e-8);

  // Product witnesses agree between the two exact routes.
  const double prod_route = amp2.product_acceptance(good);
  const DensityMatrix two_good = tensor(good, good);
  CHECK(amp2.joint_acceptance(two_good) == doctest::Approx(prod_route).epsilon(1e-10));
}

TEST_CASE("search to decision") {
  // Verifier accepting exactly 101.
  StodInstance si = gen_stod_instance(3, 12345);
  // Force the hidden witness by regenerating until it equals 101.
  std::uint64_t seed = 0;
  while (si.target_witness != "101") si = gen_stod_instance(3, ++seed);
  StodResult res = search_to_decision(si.verifier, si.input, 1.0, 0.4, 5);
  CHECK(res.witness == "101");
  CHECK(res.acceptance == doctest::Approx(1.0));
  for (int g : res.good_trace) CHECK(g == 1);

  // All-accepting verifier: ties broken toward the zero extension.
  ClassicalWitnessVerifier all{GateCircuit(5, {Gate{GateKind::X, {4}}}), 3, 1, 1, 1};
  StodResult res_all = search_to_decision(all, haar_state(1, 9), 1.0, 0.4, 6);
  CHECK(res_all.witness == "000");

  // No instance: promise check trips, or terminates when waived.
  ClassicalWitnessVerifier never{GateCircuit(5, {}), 3, 1, 1, 1};
  CHECK_THROWS_AS(search_to_decision(never, haar_state(1, 10), 1.0, 0.4, 7), PromiseViolation);
  StodResult res_no = search_to_decision(never, haar_state(1, 10), 1.0, 0.4, 7, false);
  CHECK(res_no.witness.size() == 3);
}

TEST_CASE("search to decision across seeded instances") {
  long good = 0;
  const long trials = 40;
  for (long t = 0; t < trials; ++t) {
    StodInstance si = gen_stod_instance(6, 9000 + t);
    StodResult res = search_to_decision(si.verifier, si.input, 1.0, 0.2, 700 + t);
    bool all_good = true;
    for (int g : res.good_trace) all_good = all_good && g == 1;
    CHECK(all_good);
    if (res.acceptance >= res.floor) ++good;
    CHECK(res.witness == si.target_witness);
  }
  CHECK(good == trials);
}

TEST_CASE("identify state") {
  // Singleton set.
  IdentifyResult one = identify_state(haar_state(1, 1), {haar_state(1, 1)}, 0);
  CHECK(one.index == 0);
  CHECK(one.success_probability == doctest::Approx(1.0));

  // Four orthogonal basis states: exact index with certainty.
  std::vector<PureState> basis;
  for (long i = 0; i < 4; ++i) basis.push_back(PureState::basis(2, i));
  canonical_sort(basis);
  for (int target = 0; target < 4; ++target) {
    IdentifyResult res = identify_state(basis[target], basis, 3);
    CHECK(res.index == target);
    CHECK(res.success_probability == doctest::Approx(1.0).epsilon(1e-12));
  }

  // Eight near-orthogonal states with per-test error 1e-3.
  const double eps = 1e-3;
  const Matrix u = haar_unitary(4, 55);
  std::vector<PureState> cands;
  for (int i = 0; i < 8; ++i) cands.emplace_back(4, Vector(u.col(i)));
  canonical_sort(cands);
  for (int target = 0; target < 8; target += 3) {
    // Perturb outside the candidate span so every test errs by exactly eps.
    Vector noisy =
        std::sqrt(1.0 - eps) * cands[target].amplitudes() + std::sqrt(eps) * u.col(8 + target);
    IdentifyResult res = identify_state(PureState(4, noisy), cands, 77);
    CHECK(res.success_probability >= 1.0 - 12.0 * eps);
    CHECK(res.union_bound_floor <= res.success_probability + 1e-12);
  }

  // Unsorted candidate sets are rejected.
  std::vector<PureState> unsorted{basis[2], basis[0], basis[1], basis[3]};
  CHECK_THROWS_AS(identify_state(basis[0], unsorted, 0), PreconditionError);
}
