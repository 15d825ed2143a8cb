// Acceptance suite: every numbered criterion below runs at its stated
// tolerance and prints one PASS/FAIL line. The full run stays inside the
// stated runtime budgets on a laptop-class machine.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "qplab/amplify.hpp"
#include "qplab/crypto.hpp"
#include "qplab/generators.hpp"
#include "qplab/lhverify.hpp"
#include "qplab/measure.hpp"
#include "qplab/metrics.hpp"
#include "qplab/protocols.hpp"
#include "qplab/qor.hpp"
#include "qplab/stod.hpp"

using namespace qplab;

namespace {

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(pass, "criterion ", criterion, ": ", detail);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

}  // namespace

TEST_CASE("criterion 1: swap test law") {
  const long shots = 10000;
  const double band = hoeffding_half_width(shots, 1e-3);
  double worst_exact = 0.0, worst_mc = 0.0;
  Rng seeds(20260801);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(seeds.uniform_int(3));
    const PureState phi = haar_state(n, seeds.next_u64());
    const DensityMatrix rho = random_density(n, seeds.next_u64());
    const DensityMatrix pure = DensityMatrix::from_pure(phi);
    const MeasurementOutcomeDist dist = swap_test(pure, rho);
    const double p_circuit = dist.probability_of("0");
    const double p_formula = 0.5 + 0.5 * (pure.matrix() * rho.matrix()).trace().real();
    const double f = fidelity(phi, rho);
    worst_exact = std::max(worst_exact, std::abs(p_circuit - p_formula));
    worst_exact = std::max(worst_exact, std::abs(p_circuit - (0.5 + 0.5 * f * f)));
    long pass = 0;
    for (const std::string& label : sample_trajectory(dist, shots, seeds.next_u64()))
      if (label == "0") ++pass;
    worst_mc = std::max(worst_mc,
                        std::abs(pass / static_cast<double>(shots) - p_circuit) - band);
  }
  report(1, worst_exact <= 1e-10 && worst_mc <= 0.0,
         "swap-test law on 200 pairs, exact dev " + fmt(worst_exact) +
             ", Monte-Carlo band slack " + fmt(worst_mc));
}

TEST_CASE("criterion 2: quantum OR bounds") {
  const double eta = 2.0 / 3.0;
  bool ok = true;
  double min_yes = 1.0, max_no = 0.0;
  const std::pair<int, int> sizes[] = {{1, 1}, {2, 1}, {2, 2}, {3, 2}, {4, 2}};
  for (int i = 0; i < 50; ++i) {
    const auto [na, m] = sizes[i % 5];
    const QorCase yc = gen_qor_yes(na, m, eta, 1000 + i);
    const VerdictReport rep = qor_run(yc.rho, yc.instance, eta, 0.0);
    min_yes = std::min(min_yes, *rep.p_exact);
    ok = ok && *rep.p_exact >= 4.0 / 63.0;
  }
  for (int i = 0; i < 50; ++i) {
    const auto [na, m] = sizes[i % 5];
    const double delta = 1.0 / (64.0 * std::pow(2.0, m));
    const QorCase nc = gen_qor_no(na, m, delta, 2000 + i);
    const VerdictReport rep = qor_run(nc.rho, nc.instance, eta, delta);
    max_no = std::max(max_no, *rep.p_exact);
    ok = ok && *rep.p_exact <= 4.0 * std::pow(2.0, m) * delta + 1e-12;
  }
  report(2, ok,
         "50+50 QOR instances, min yes acceptance " + fmt(min_yes) + " >= 4/63, max no " +
             fmt(max_no) + " <= 1/16");
}

TEST_CASE("criterion 3: clock Hamiltonian energy gap") {
  bool ok = true;
  double worst_yes_margin = 1.0, worst_no_margin = 1.0;
  const std::pair<int, int> yes_sizes[] = {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {2, 3}};
  for (int i = 0; i < 20; ++i) {
    const auto [n, m] = yes_sizes[i % 6];
    const ClockLayout lay{n, 1, 1, 1, m};
    const CookLevinYes yes = gen_cooklevin_yes(lay, 10000, 3000 + i);
    const double a = 1.0 / (std::pow(2.0, n + 1) * (m + 1));
    ok = ok && std::abs(yes.reduction.instance.a - a) < 1e-15;
    ok = ok && yes.history_energy <= a + 1e-12;
    worst_yes_margin = std::min(worst_yes_margin, a - yes.history_energy);
  }
  const std::pair<int, int> no_sizes[] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {2, 3}};
  for (int i = 0; i < 20; ++i) {
    const auto [n, m] = no_sizes[i % 5];
    const ClockLayout lay{n, 1, 1, 1, m};
    const CookLevinNo no = gen_cooklevin_no(lay, 10000, 4000 + i);
    const HamiltonianInstance& inst = no.reduction.instance;
    const double gap = inst.b - inst.a - 2.0 / static_cast<double>(inst.p);
    ok = ok && no.lambda_min >= inst.b - 1e-12 && gap > 0.0;
    worst_no_margin = std::min(worst_no_margin, gap);
  }
  report(3, ok,
         "20+20 clock reductions, yes-energy slack " + fmt(worst_yes_margin) +
             ", no-gap slack " + fmt(worst_no_margin));
}

TEST_CASE("criterion 4: LHwP verifier unbiasedness and separation") {
  bool ok = true;
  double worst_bias = 0.0;
  long yes_accepts = 0, no_accepts = 0, runs = 0;
  const std::pair<int, int> yes_sizes[] = {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {2, 3}};
  for (int i = 0; i < 20; ++i) {
    const auto [n, m] = yes_sizes[i % 6];
    const ClockLayout lay{n, 1, 1, 1, m};
    const CookLevinYes yes = gen_cooklevin_yes(lay, 10000, 3000 + i);
    const HamiltonianInstance& inst = yes.reduction.instance;
    const PureState psi_full = tensor_power(yes.psi, lay.c_copies);
    const double est = lhwp_estimator_expectation(inst, psi_full, yes.history);
    const HermitianOperator h = assemble(inst, psi_full);
    const double energy =
        (yes.history.amplitudes().adjoint() * h.matrix() * yes.history.amplitudes())(0).real();
    const double target = energy / static_cast<double>(inst.term_budget());
    worst_bias = std::max(worst_bias, std::abs(est - target));
    ok = ok && std::abs(est - target) <= 1e-8;
  }
  LhwpOptions sampled;
  sampled.mode = VerifyMode::kSampled;
  sampled.rounds = 400;
  const std::pair<int, int> no_sizes[] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {2, 3}};
  for (int i = 0; i < 10; ++i) {
    const auto [yn, ym] = yes_sizes[i % 6];
    const ClockLayout ylay{yn, 1, 1, 1, ym};
    const CookLevinYes yes = gen_cooklevin_yes(ylay, 10000, 3000 + i);
    sampled.seed = 5000 + i;
    if (lhwp_verify(yes.reduction.instance, tensor_power(yes.psi, 1), yes.history, sampled)
            .accept)
      ++yes_accepts;
    const auto [nn, nm] = no_sizes[i % 5];
    const ClockLayout nlay{nn, 1, 1, 1, nm};
    const CookLevinNo no = gen_cooklevin_no(nlay, 10000, 4100 + i);
    sampled.seed = 6000 + i;
    const PureState arbitrary = haar_state(no.reduction.instance.n_total_qubits, 7000 + i);
    if (lhwp_verify(no.reduction.instance, tensor_power(no.psi, 1), arbitrary, sampled).accept)
      ++no_accepts;
    ++runs;
  }
  const double gap = (yes_accepts - no_accepts) / static_cast<double>(runs);
  ok = ok && gap >= 0.3;
  report(4, ok,
         "estimator bias " + fmt(worst_bias) + " <= 1e-8; sampled accept gap " + fmt(gap) +
             " >= 0.3");
}

TEST_CASE("criterion 5: LHwM estimator and abort rule") {
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    const ClockLayout lay{1, 1, 1, 1, 1 + (i % 2)};  // m <= 2
    const CookLevinMixedYes my = gen_cooklevin_mixed_yes(lay, 2, 10000, 8000 + i);
    const HamiltonianInstance& inst = my.reduction.instance;
    const LhwmWitness honest{my.witness_circuit, my.phi, my.alpha};
    const EigenDecomposition dec = eigen_decomposition(tensor_power(my.rho, 1));
    const LhwmCase2Analysis an = lhwm_case2_analysis(inst, dec, 0, honest);
    for (std::size_t r = 0; r < an.lambdas.size(); ++r) {
      worst = std::max(worst, std::abs(an.w_l_expectations[r] - an.step2_targets[r]));
      ok = ok && std::abs(an.w_l_expectations[r] - an.step2_targets[r]) <= 1e-8;
    }
    VerdictReport good = lhwm_verify(inst, my.rho, 1, honest, {});
    ok = ok && good.accept && good.stats.at("aborted") == 0.0;

    // Shifted alpha must abort with certainty in exact mode.
    const LhwmWitness shifted{my.witness_circuit, my.phi, my.alpha - 0.5};
    VerdictReport bad = lhwm_verify(inst, my.rho, 1, shifted, {});
    ok = ok && bad.stats.at("aborted") == 1.0 && !bad.accept;

    // Deterministic-X sampled run: C sends the coupled register straight to
    // the lambda = 1 eigenvector, so X is identically 1 and a 0.5-off alpha
    // aborts with certainty.
    HamiltonianInstance det = inst;
    det.plain_terms.clear();
    det.coupled_terms.clear();
    Matrix e1 = Matrix::Zero(2, 2);
    e1(1, 1) = 1.0;
    det.coupled_terms.push_back(
        LocalTerm{{det.n_total_qubits - 1}, HermitianOperator(1, e1), 1});
    det.p = det.term_budget();
    det.b = det.a + 8.0 / static_cast<double>(det.p);
    const Matrix x_last =
        embed(gate_matrix(GateKind::X), {det.n_total_qubits - 1}, det.n_total_qubits);
    LhwmOptions srun;
    srun.mode = VerifyMode::kSampled;
    srun.rounds = 16;
    srun.block = 200;
    srun.seed = 9000 + i;
    VerdictReport det_rep = lhwm_verify(det, my.rho, 1, {x_last, my.phi, 0.5}, srun);
    ok = ok && det_rep.stats.at("aborted") == 1.0;
  }
  report(5, ok, "LHwM W_L expectation vs step-2 target dev " + fmt(worst) + "; abort certain");
}

TEST_CASE("criterion 6: quantum union bound") {
  bool ok = true;
  double worst_floor = 1.0, worst_td = 1.0;
  Rng seeds(606060);
  for (int i = 0; i < 100; ++i) {
    const int n = 2;
    const int count = 1 + static_cast<int>(seeds.uniform_int(6));
    const PureState base = haar_state(n, seeds.next_u64());
    std::vector<HermitianOperator> tests;
    for (int j = 0; j < count; ++j) {
      Vector dir = haar_state(n, seeds.next_u64()).amplitudes();
      dir -= base.amplitudes().dot(dir) * base.amplitudes();
      dir /= dir.norm();
      const double eps = 1e-4 + 4e-3 * seeds.uniform();
      Vector tilted = std::sqrt(1.0 - eps) * base.amplitudes() + std::sqrt(eps) * dir;
      tests.emplace_back(n, Matrix(tilted * tilted.adjoint()));
    }
    const SequentialMeasureResult res =
        sequential_measure(DensityMatrix::from_pure(base), tests);
    double sum_eps = 0.0;
    for (double e : res.epsilons) sum_eps += e;
    ok = ok && res.accept_probability >= 1.0 - 4.0 * sum_eps - 1e-12;
    ok = ok && res.post_trace_distance <= std::sqrt(sum_eps) + 1e-12;
    worst_floor = std::min(worst_floor,
                           res.accept_probability - (1.0 - 4.0 * sum_eps));
    worst_td = std::min(worst_td, std::sqrt(sum_eps) - res.post_trace_distance);
  }
  report(6, ok,
         "100 sequences, all-accept slack " + fmt(worst_floor) + ", disturbance slack " +
             fmt(worst_td));
}

TEST_CASE("criterion 7: search to decision") {
  long good = 0;
  bool good_sets = true;
  const long trials = 200;
  for (long t = 0; t < trials; ++t) {
    const StodInstance si = gen_stod_instance(6, 70000 + t);
    const StodResult res =
        search_to_decision(si.verifier, si.input, 1.0, 0.2, 71000 + t);
    if (res.acceptance >= res.floor) ++good;
    for (int g : res.good_trace) good_sets = good_sets && g == 1;
  }
  const double rate = good / static_cast<double>(trials);
  report(7, rate >= 0.95 && good_sets,
         "200 six-bit witness recoveries, success rate " + fmt(rate) + ", Good-set held");
}

TEST_CASE("criterion 8: protocol numbers") {
  bool ok = true;
  // Mixedness no case, t = 16: exact binomial tail to six digits.
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  const ProtocolTranscript no16 =
      mixedness_protocol(mixed, 16, mixedness_honest_prover(mixed), 1, RunMode::kExact);
  ok = ok && std::abs(no16.stats.at("p_exact") - 0.227249) < 5e-7;

  // Max entanglement: completeness 1 on purifications of I/2^lambda, and
  // per-round pass <= 7/8 on inputs at trace distance 1/2 from the property.
  for (std::uint64_t s = 0; s < 8; ++s) {
    const long d = 2;
    Vector epr = Vector::Zero(d * d);
    for (long j = 0; j < d; ++j) epr(j + d * j) = 1.0 / std::sqrt(2.0);
    const PureState phi(2, apply_on_qubits(haar_unitary(1, 100 + s), {1}, epr));
    const ProtocolTranscript yes =
        max_entangled_protocol(phi, 3, maxent_honest_prover(phi), 2, RunMode::kExact);
    ok = ok && std::abs(yes.stats.at("p_exact") - 1.0) < 1e-9;

    const PureState no_phi = tensor(PureState::zero(1), haar_state(1, 200 + s));
    const ProtocolTranscript no =
        max_entangled_protocol(no_phi, 1, maxent_honest_prover(no_phi), 3, RunMode::kExact);
    ok = ok && no.stats.at("best_response_per_round") <= 7.0 / 8.0 + 1e-12;
  }

  // Public coin: optimal cheat exactly 3/4 for orthogonal pure outputs.
  GateCircuit q0(2, {});
  GateCircuit q1(2, {Gate{GateKind::X, {0}}});
  const PurifiedPair orth = purified_outputs(q0, q1, PureState::zero(1), 1, {0});
  const PublicCoinCheatValue cheat = public_coin_optimal_cheat(orth, 5);
  ok = ok && std::abs(cheat.value - 0.75) <= 1e-8;

  // EFI no case: exactly 2^-t.
  Matrix m0 = Matrix::Zero(2, 2);
  m0(0, 0) = 0.95;
  m0(1, 1) = 0.05;
  Matrix m1 = Matrix::Zero(2, 2);
  m1(0, 0) = 0.05;
  m1(1, 1) = 0.95;
  const DensityMatrix r0(1, m0), r1(1, m1);
  for (int t : {4, 10}) {
    const ProtocolTranscript no =
        efi_protocol(r0, r0, t, efi_honest_prover(r0, r1), 4, RunMode::kExact);
    ok = ok && std::abs(no.stats.at("p_exact") - std::pow(2.0, -t)) < 1e-12;
  }
  report(8, ok,
         "mixedness tail 0.227249, maxent 1 vs <= 7/8, public-coin cheat 3/4, EFI 2^-t");
}

TEST_CASE("criterion 9: crypto games") {
  bool ok = true;
  // Commitment hiding: TD = 0 within 1e-10 for 50 random T at lambda <= 3, k <= 2.
  double worst_hiding = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int lambda = 1 + i % 3;
    const int k = 1 + i % 2;
    CommitmentSession session(lambda, k, haar_unitary(lambda, 90000 + i));
    worst_hiding = std::max(worst_hiding, session.hiding_check());
  }
  ok = ok && worst_hiding <= 1e-10;

  // R-only adversaries against HALF-type commitments: squared value <= 3/4.
  double worst_half = 0.0;
  for (std::uint64_t s = 0; s < 12; ++s) {
    const int lambda = 2;
    CommitmentSession session(lambda, 1, haar_unitary(lambda, 91000 + s));
    PureState half = half_state(lambda);
    Vector hv = apply_on_qubits(haar_unitary(lambda, 92000 + s), {0, 1}, half.amplitudes());
    hv = apply_on_qubits(haar_unitary(lambda, 93000 + s), {2, 3}, hv);
    const double v = b0_reveal_value(session, PureState(2 * lambda, hv),
                                     haar_unitary(lambda, 94000 + s), PureState::zero(0));
    worst_half = std::max(worst_half, v * v);
  }
  ok = ok && worst_half <= 0.75 + 1e-8;

  // PRS break: advantage at least 1/2 over 1000 trials at 4-bit keys.
  const PrsScheme prs(4, 4, 24, 95000);
  const PrsBreakResult prs_res = prs_oracle_break(prs, 1000, 96000);
  ok = ok && prs_res.advantage >= 0.5;

  // OWSG break: recovery rate at least 95% over 200 trials at 6-bit keys.
  const PrsScheme owsg(6, 6, 32, 97000);
  const OwsgBreakResult owsg_res = owsg_break(owsg, 200, 256, 98000);
  ok = ok && owsg_res.success_rate >= 0.95;

  report(9, ok,
         "hiding " + fmt(worst_hiding) + ", half-type cap " + fmt(worst_half) +
             ", PRS advantage " + fmt(prs_res.advantage) + ", OWSG rate " +
             fmt(owsg_res.success_rate));
}

TEST_CASE("criterion 10: metric property suite") {
  double worst = 0.0;
  Rng seeds(1010101);
  for (int i = 0; i < 500; ++i) {
    const DensityMatrix a = random_density(2, seeds.next_u64());
    const DensityMatrix b = random_density(2, seeds.next_u64());
    const DensityMatrix c = random_density(2, seeds.next_u64());
    const double tab = trace_distance(a, b), tbc = trace_distance(b, c),
                 tac = trace_distance(a, c);
    const double fab = fidelity(a, b), fbc = fidelity(b, c), fac = fidelity(a, c);
    worst = std::max(worst, tac - (tab + tbc));                         // triangle
    worst = std::max(worst, 1.0 - fab - tab);                          // FvdG lower
    worst = std::max(worst, tab - std::sqrt(std::max(0.0, 1.0 - fab * fab)));  // FvdG upper
    worst = std::max(worst,
                     fidelity(a, b) - fidelity(partial_trace(a, {0}), partial_trace(b, {0})));
    worst = std::max(worst, fab * fab + fbc * fbc - (1.0 + fac));      // fidelity inequality

    const DensityMatrix a1 = random_density(1, seeds.next_u64());
    const DensityMatrix b1 = random_density(1, seeds.next_u64());
    const double eps = trace_distance(a1, b1);
    const int l = 2 + static_cast<int>(seeds.uniform_int(5));  // l <= 6
    const double tdl = trace_distance(tensor_power(a1, l), tensor_power(b1, l));
    worst = std::max(worst, (1.0 - std::exp(-l * eps * eps)) - tdl);   // strict lower
    worst = std::max(worst, tdl - l * eps);                            // upper
  }
  report(10, worst <= 1e-8, "500 random instances per property, worst violation " + fmt(worst));
}
