#include "qplab/protocols.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qplab/amplify.hpp"
#include "qplab/measure.hpp"
#include "qplab/random.hpp"

namespace qplab {

using nlohmann::json;

json ProtocolTranscript::to_json() const {
  json msgs = json::array();
  for (const TranscriptMessage& m : messages)
    msgs.push_back(json{{"sender", m.sender}, {"kind", m.kind}, {"payload", m.payload}});
  json j{{"protocol", protocol},
         {"messages", std::move(msgs)},
         {"seed", seed},
         {"completed", completed},
         {"verdict", accept ? "accept" : "reject"}};
  for (const auto& [k, v] : stats) j["stats"][k] = v;
  return j;
}

namespace {

std::string state_note(int n_qubits, int count) {
  return "[" + std::to_string(count) + " state register(s) of " + std::to_string(n_qubits) +
         " qubit(s), elided]";
}

long threshold_5_8(int t) {
  return static_cast<long>(std::ceil(5.0 * static_cast<double>(t) / 8.0 - 1e-9));
}

}  // namespace

MixednessProver mixedness_honest_prover(const DensityMatrix& rho_in) {
  return MixednessProver{
      "honest-helstrom",
      helstrom_measurement(rho_in, DensityMatrix::maximally_mixed(rho_in.n_qubits()))};
}

MixednessProver mixedness_constant_zero_prover(int lambda_qubits) {
  const long d = dim_of(lambda_qubits);
  return MixednessProver{"constant-zero",
                         TwoOutcomePovm{Matrix::Identity(d, d), Matrix::Zero(d, d)}};
}

ProtocolTranscript mixedness_protocol(const DensityMatrix& rho_in, int t,
                                      const MixednessProver& prover, std::uint64_t seed,
                                      RunMode mode) {
  require(t >= 1, "need at least one round");
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(rho_in.n_qubits());
  ProtocolTranscript tr;
  tr.protocol = "mixedness";
  tr.seed = seed;

  // Per-round agreement probability for this prover's POVM.
  const double agree = 0.5 * (prover.povm.e0 * rho_in.matrix()).trace().real() +
                       0.5 * (prover.povm.e1 * mixed.matrix()).trace().real();
  tr.stats["round_agreement"] = agree;
  tr.stats["threshold_count"] = static_cast<double>(threshold_5_8(t));
  tr.stats["p_exact"] = binomial_tail(t, agree, threshold_5_8(t));

  if (mode == RunMode::kExact) {
    tr.completed = true;
    tr.accept = tr.stats["p_exact"] >= 0.5;
    return tr;
  }

  Rng rng(seed);
  std::string coins, replies;
  long agree_count = 0;
  for (int i = 0; i < t; ++i) {
    const int b = static_cast<int>(rng.uniform_int(2));
    const DensityMatrix& sent = b == 0 ? rho_in : mixed;
    const double p0 = (prover.povm.e0 * sent.matrix()).trace().real();
    const int reply = rng.uniform() < p0 ? 0 : 1;
    coins.push_back('0' + b);
    replies.push_back('0' + reply);
    if (reply == b) ++agree_count;
  }
  tr.messages.push_back({"verifier", "state", state_note(rho_in.n_qubits(), t)});
  tr.messages.push_back({"prover", "bits", replies});
  tr.stats["agree_count"] = static_cast<double>(agree_count);
  tr.completed = true;
  tr.accept = agree_count >= threshold_5_8(t);
  return tr;
}

MaxEntProver maxent_honest_prover(const PureState& phi_in) {
  require(phi_in.n_qubits() % 2 == 0, "phi_in must live on 2*lambda qubits");
  const int lambda = phi_in.n_qubits() / 2;
  // EPR pairs: |psi> = 2^(-lambda/2) sum_j |j>_A |j>_B.
  const long d = 1L << lambda;
  Vector epr = Vector::Zero(d * d);
  for (long j = 0; j < d; ++j) epr(j + d * j) = 1.0 / std::sqrt(static_cast<double>(d));
  const PureState epr_state(2 * lambda, std::move(epr));
  return MaxEntProver{"honest-uhlmann", uhlmann_unitary(epr_state, phi_in).unitary};
}

MaxEntProver maxent_identity_prover(int lambda_qubits) {
  const long d = dim_of(lambda_qubits);
  return MaxEntProver{"identity", Matrix::Identity(d, d)};
}

ProtocolTranscript max_entangled_protocol(const PureState& phi_in, int t,
                                          const MaxEntProver& prover, std::uint64_t seed,
                                          RunMode mode) {
  require(phi_in.n_qubits() % 2 == 0, "phi_in must live on 2*lambda qubits");
  const int lambda = phi_in.n_qubits() / 2;
  const long d = 1L << lambda;
  require(prover.unitary_on_b.rows() == d, "prover unitary width mismatch");

  Vector epr = Vector::Zero(d * d);
  for (long j = 0; j < d; ++j) epr(j + d * j) = 1.0 / std::sqrt(static_cast<double>(d));
  PureState epr_state(2 * lambda, std::move(epr));
  std::vector<int> b_qubits;
  for (int q = lambda; q < 2 * lambda; ++q) b_qubits.push_back(q);
  const PureState replied(2 * lambda,
                          apply_on_qubits(prover.unitary_on_b, b_qubits, epr_state.amplitudes()));

  const double per_round_pass = swap_test_pass_probability(replied, phi_in);
  std::vector<int> a_qubits;
  for (int q = 0; q < lambda; ++q) a_qubits.push_back(q);
  const double best_response =
      0.5 + 0.5 * std::pow(fidelity(DensityMatrix::maximally_mixed(lambda),
                                    partial_trace(phi_in, a_qubits)),
                           2.0);

  ProtocolTranscript tr;
  tr.protocol = "maxent";
  tr.seed = seed;
  tr.stats["per_round_pass"] = per_round_pass;
  tr.stats["best_response_per_round"] = best_response;
  tr.stats["p_exact"] = std::pow(per_round_pass, t);

  if (mode == RunMode::kExact) {
    tr.completed = true;
    tr.accept = tr.stats["p_exact"] >= 0.5;
    return tr;
  }
  Rng rng(seed);
  bool all = true;
  for (int i = 0; i < t && all; ++i) all = rng.uniform() < per_round_pass;
  tr.messages.push_back({"verifier", "state", state_note(lambda, t)});
  tr.messages.push_back({"prover", "state", state_note(lambda, t)});
  tr.completed = true;
  tr.accept = all;
  return tr;
}

DensityMatrix PurifiedPair::reduced(int which) const {
  require(which == 0 || which == 1, "which must be 0 or 1");
  return partial_trace(which == 0 ? phi0 : phi1, output_qubits);
}

PurifiedPair purified_outputs(const GateCircuit& q0, const GateCircuit& q1, const PureState& phi,
                              int n_ancilla, const std::vector<int>& output_qubits) {
  require(q0.n_qubits() == q1.n_qubits(), "circuits must share a register");
  require(q0.n_qubits() == phi.n_qubits() + n_ancilla, "circuit register mismatch");
  require(!output_qubits.empty(), "output register must be nonempty");
  const PureState in = tensor(phi, PureState::zero(n_ancilla));
  return PurifiedPair{q0.apply(in), q1.apply(in), output_qubits};
}

PurifiedPair polarize(const PurifiedPair& in, int xor_copies, int power_copies) {
  require(xor_copies >= 1 && power_copies >= 1, "polarize needs positive parameters");
  const int nb = in.phi0.n_qubits();

  // XOR gadget: 2^-((r-1)/2) sum_{parity(c)=b} (x)_i phi_{c_i} (x) |c>_label.
  const int r = xor_copies;
  const int xor_qubits = r * nb + r;
  dim_of(xor_qubits);
  Vector x0 = Vector::Zero(dim_of(xor_qubits));
  Vector x1 = Vector::Zero(dim_of(xor_qubits));
  const double amp = std::pow(2.0, -0.5 * (r - 1));
  for (long c = 0; c < (1L << r); ++c) {
    PureState blocks = ((c >> 0) & 1) ? in.phi1 : in.phi0;
    for (int i = 1; i < r; ++i) blocks = tensor(blocks, ((c >> i) & 1) ? in.phi1 : in.phi0);
    int parity = 0;
    for (int i = 0; i < r; ++i) parity ^= static_cast<int>((c >> i) & 1);
    Vector& target = parity == 0 ? x0 : x1;
    const long label_offset = c << (r * nb);
    for (long x = 0; x < blocks.dim(); ++x) target(x + label_offset) += amp * blocks.amplitudes()(x);
  }
  std::vector<int> xor_outputs;
  for (int i = 0; i < r; ++i)
    for (int q : in.output_qubits) xor_outputs.push_back(i * nb + q);
  PurifiedPair xored{PureState(xor_qubits, std::move(x0)), PureState(xor_qubits, std::move(x1)),
                     xor_outputs};

  if (power_copies == 1) return xored;

  // Direct product: l independent blocks with the same bit.
  const int l = power_copies;
  PureState p0 = xored.phi0;
  PureState p1 = xored.phi1;
  std::vector<int> outputs = xored.output_qubits;
  for (int i = 1; i < l; ++i) {
    p0 = tensor(p0, xored.phi0);
    p1 = tensor(p1, xored.phi1);
    for (int q : xored.output_qubits) outputs.push_back(i * xor_qubits + q);
  }
  return PurifiedPair{std::move(p0), std::move(p1), std::move(outputs)};
}

namespace {

std::vector<int> complement_qubits(int n, const std::vector<int>& subset) {
  std::vector<int> out;
  for (int q = 0; q < n; ++q)
    if (std::find(subset.begin(), subset.end(), q) == subset.end()) out.push_back(q);
  return out;
}

}  // namespace

QsdProver qsd_honest_prover(const PurifiedPair& pair) {
  const std::vector<int> b_qubits =
      complement_qubits(pair.phi0.n_qubits(), pair.output_qubits);
  return QsdProver{"honest-uhlmann",
                   uhlmann_unitary_on(pair.phi0, pair.phi1, b_qubits).unitary};
}

QsdProver qsd_identity_prover(const PurifiedPair& pair) {
  const std::vector<int> b_qubits =
      complement_qubits(pair.phi0.n_qubits(), pair.output_qubits);
  return QsdProver{"identity", Matrix::Identity(1L << b_qubits.size(), 1L << b_qubits.size())};
}

ProtocolTranscript coqsdwp_protocol(const PurifiedPair& pair, const QsdProver& prover,
                                    std::uint64_t seed, RunMode mode) {
  const std::vector<int> b_qubits =
      complement_qubits(pair.phi0.n_qubits(), pair.output_qubits);
  require(prover.unitary_on_b.rows() == (1L << b_qubits.size()), "prover unitary width mismatch");
  const PureState replied(
      pair.phi0.n_qubits(),
      apply_on_qubits(prover.unitary_on_b, b_qubits, pair.phi0.amplitudes()));
  const double pass = swap_test_pass_probability(replied, pair.phi1);
  const double f = fidelity(pair.reduced(0), pair.reduced(1));

  ProtocolTranscript tr;
  tr.protocol = "coqsdwp";
  tr.seed = seed;
  tr.stats["p_exact"] = pass;
  tr.stats["fidelity"] = f;
  tr.stats["soundness_bound"] = 0.5 + 0.5 * f * f;
  if (mode == RunMode::kExact) {
    tr.completed = true;
    tr.accept = pass >= 0.5;
    return tr;
  }
  Rng rng(seed);
  tr.messages.push_back({"verifier", "state", state_note(static_cast<int>(b_qubits.size()), 1)});
  tr.messages.push_back({"prover", "state", state_note(static_cast<int>(b_qubits.size()), 1)});
  tr.completed = true;
  tr.accept = rng.uniform() < pass;
  return tr;
}

ProtocolTranscript public_coin_qsd(const PurifiedPair& pair, const QsdProver& prover,
                                   std::uint64_t seed, RunMode mode) {
  const std::vector<int> b_qubits =
      complement_qubits(pair.phi0.n_qubits(), pair.output_qubits);
  require(prover.unitary_on_b.rows() == (1L << b_qubits.size()), "prover unitary width mismatch");
  // Honest play: send A of phi0; on coin 1 rotate B with U, else do nothing.
  const PureState rotated(
      pair.phi0.n_qubits(),
      apply_on_qubits(prover.unitary_on_b, b_qubits, pair.phi0.amplitudes()));
  const double pass0 = swap_test_pass_probability(pair.phi0, pair.phi0);
  const double pass1 = swap_test_pass_probability(rotated, pair.phi1);
  const double exact = 0.5 * pass0 + 0.5 * pass1;

  ProtocolTranscript tr;
  tr.protocol = "publiccoin";
  tr.seed = seed;
  tr.stats["p_exact"] = exact;
  tr.stats["pass_coin0"] = pass0;
  tr.stats["pass_coin1"] = pass1;
  if (mode == RunMode::kExact) {
    tr.completed = true;
    tr.accept = exact >= 0.5;
    return tr;
  }
  Rng rng(seed);
  const int coin = static_cast<int>(rng.uniform_int(2));
  tr.messages.push_back({"prover", "state", state_note(static_cast<int>(pair.output_qubits.size()), 1)});
  tr.messages.push_back({"verifier", "bits", std::string(1, '0' + coin)});
  tr.messages.push_back({"prover", "state", state_note(static_cast<int>(b_qubits.size()), 1)});
  tr.completed = true;
  tr.accept = rng.uniform() < (coin == 0 ? pass0 : pass1);
  return tr;
}

PublicCoinCheatValue public_coin_optimal_cheat(const PurifiedPair& pair, std::uint64_t seed) {
  const DensityMatrix sigma0 = pair.reduced(0);
  const DensityMatrix sigma1 = pair.reduced(1);
  const double f = fidelity(sigma0, sigma1);
  PublicCoinCheatValue out;
  out.analytic_bound = 0.75 + 0.25 * f;

  // The cheat value is 1/2 + max_rho (F(rho,sigma0)^2 + F(rho,sigma1)^2)/4.
  const long d = sigma0.dim();
  const bool pure0 = (sigma0.matrix() * sigma0.matrix()).trace().real() >= 1.0 - 1e-12;
  const bool pure1 = (sigma1.matrix() * sigma1.matrix()).trace().real() >= 1.0 - 1e-12;
  auto objective = [&](const DensityMatrix& rho) {
    // F(rho, pure)^2 = Tr(rho sigma): use the exact quadratic form when possible.
    const double f0sq = pure0 ? (rho.matrix() * sigma0.matrix()).trace().real()
                              : std::pow(fidelity(rho, sigma0), 2.0);
    const double f1sq = pure1 ? (rho.matrix() * sigma1.matrix()).trace().real()
                              : std::pow(fidelity(rho, sigma1), 2.0);
    return f0sq + f1sq;
  };

  // Analytic seed for (nearly) pure outputs: the top eigenvector of
  // sigma0 + sigma1 maximizes over pure first messages.
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma0.matrix() + sigma1.matrix());
  Matrix best_root = es.eigenvectors().col(d - 1);  // column vector as Cholesky-like factor
  double best = objective(DensityMatrix(sigma0.n_qubits(), best_root * best_root.adjoint()));

  // Gradient-free refinement over mixed states, parameterized rho = AA^d/tr.
  Rng rng(seed);
  Matrix a_mat = best_root;  // d x 1, grows to d x d below
  {
    Matrix full(d, d);
    for (long c = 0; c < d; ++c)
      for (long r = 0; r < d; ++r) full(r, c) = c == 0 ? best_root(r, 0) : cxd(0.0, 0.0);
    a_mat = full;
  }
  double step = 0.5;
  for (int iter = 0; iter < 400; ++iter) {
    Matrix cand = a_mat;
    for (int touches = 0; touches < 3; ++touches) {
      const long r = static_cast<long>(rng.uniform_int(d));
      const long c = static_cast<long>(rng.uniform_int(d));
      cand(r, c) += cxd(step * rng.gauss(), step * rng.gauss());
    }
    Matrix rho = cand * cand.adjoint();
    const double trace = rho.trace().real();
    if (trace < 1e-12) continue;
    rho /= trace;
    const double val = objective(DensityMatrix(sigma0.n_qubits(), std::move(rho)));
    if (val > best) {
      best = val;
      a_mat = cand;
    } else {
      step *= 0.995;
    }
  }
  out.value = 0.5 + 0.25 * best;
  return out;
}

EfiProver efi_honest_prover(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  return EfiProver{"honest-helstrom", helstrom_measurement(rho0, rho1)};
}

ProtocolTranscript efi_protocol(const DensityMatrix& rho_a, const DensityMatrix& rho_b, int t,
                                const EfiProver& prover, std::uint64_t seed, RunMode mode) {
  require(rho_a.n_qubits() == rho_b.n_qubits(), "EFI states must share a register");
  require(t >= 1, "need at least one round");

  // Outcome distributions of the prover's reference and pair measurements.
  const double p0_on_a = (prover.povm.e0 * rho_a.matrix()).trace().real();
  const double p0_on_b = (prover.povm.e0 * rho_b.matrix()).trace().real();

  // Reference: measure rho_a once; ans_a = outcome, ans_b = 1 - ans_a.
  // Round i with coin n_i: registers hold (rho_a, rho_b) or swapped; m_i = 1
  // iff either pair outcome disagrees with the reference.
  auto round_match_probability = [&](int ref, int coin) {
    const double pa = coin == 0 ? p0_on_a : p0_on_b;  // Pr[outcome 0 on A_i]
    const double pb = coin == 0 ? p0_on_b : p0_on_a;
    const double pr_a_matches = ref == 0 ? pa : 1.0 - pa;
    const double pr_b_matches = ref == 0 ? 1.0 - pb : pb;  // ans_b = 1 - ref
    const double m0 = pr_a_matches * pr_b_matches;         // Pr[m_i = 0]
    return coin == 0 ? m0 : 1.0 - m0;                      // Pr[m_i = n_i]
  };

  double p_exact = 0.0;
  for (int ref = 0; ref <= 1; ++ref) {
    const double p_ref = ref == 0 ? p0_on_a : 1.0 - p0_on_a;
    double prod = 1.0;
    for (int i = 0; i < t; ++i)
      prod *= 0.5 * round_match_probability(ref, 0) + 0.5 * round_match_probability(ref, 1);
    p_exact += p_ref * prod;
  }

  ProtocolTranscript tr;
  tr.protocol = "efi";
  tr.seed = seed;
  tr.stats["p_exact"] = p_exact;
  tr.stats["helstrom_error"] =
      1.0 - helstrom_success_probability(rho_a, rho_b);

  if (mode == RunMode::kExact) {
    tr.completed = true;
    tr.accept = p_exact >= 0.5;
    return tr;
  }

  Rng rng(seed);
  std::string coins, guesses;
  const int ref = rng.uniform() < p0_on_a ? 0 : 1;
  bool all_match = true;
  for (int i = 0; i < t; ++i) {
    const int coin = static_cast<int>(rng.uniform_int(2));
    coins.push_back('0' + coin);
    const double pa = coin == 0 ? p0_on_a : p0_on_b;
    const double pb = coin == 0 ? p0_on_b : p0_on_a;
    const int oa = rng.uniform() < pa ? 0 : 1;
    const int ob = rng.uniform() < pb ? 0 : 1;
    const int mi = (oa != ref || ob != (1 - ref)) ? 1 : 0;
    guesses.push_back('0' + mi);
    if (mi != coin) all_match = false;
  }
  tr.messages.push_back({"verifier", "state", state_note(rho_a.n_qubits(), 2 * t)});
  tr.messages.push_back({"prover", "bits", guesses});
  tr.completed = true;
  tr.accept = all_match;
  return tr;
}

SimulatorReport hv_simulate_mixedness(const DensityMatrix& rho_in, int t, int message_index) {
  require(message_index == 1 || message_index == 2, "mixedness has two messages");
  if (message_index == 1)
    return SimulatorReport{0.0, "first message reproduced by running the verifier's own step"};
  // Real view: coins b uniform, replies agree w.p. q; simulated: agree w.p. 3/4.
  const double q =
      helstrom_success_probability(rho_in, DensityMatrix::maximally_mixed(rho_in.n_qubits()));
  // Likelihood ratio depends only on the number of agreements.
  double td = 0.0;
  double coeff = 1.0;
  for (int k = 0; k <= t; ++k) {
    td += 0.5 * coeff * std::abs(std::pow(q, k) * std::pow(1.0 - q, t - k) -
                                 std::pow(0.75, k) * std::pow(0.25, t - k));
    coeff = coeff * static_cast<double>(t - k) / static_cast<double>(k + 1);
  }
  return SimulatorReport{td, "replies resampled with agreement probability 3/4"};
}

SimulatorReport hv_simulate_maxent(const PureState& phi_in, int t, int message_index) {
  require(message_index == 1 || message_index == 2, "maxent has two messages");
  if (message_index == 1)
    return SimulatorReport{0.0, "first message reproduced by preparing fresh EPR pairs"};
  const MaxEntProver honest = maxent_honest_prover(phi_in);
  const int lambda = phi_in.n_qubits() / 2;
  const long d = 1L << lambda;
  Vector epr = Vector::Zero(d * d);
  for (long j = 0; j < d; ++j) epr(j + d * j) = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<int> b_qubits;
  for (int q = lambda; q < 2 * lambda; ++q) b_qubits.push_back(q);
  const PureState replied(2 * lambda,
                          apply_on_qubits(honest.unitary_on_b, b_qubits, epr));
  const double ov = std::abs(replied.overlap(phi_in));
  const double td = std::sqrt(std::max(0.0, 1.0 - std::pow(ov, 2.0 * t)));
  return SimulatorReport{td, "pairs simulated by outputting phi_in directly"};
}

SimulatorReport hv_simulate_coqsdwp(const PurifiedPair& pair, int message_index) {
  require(message_index == 1 || message_index == 2, "coqsdwp has two messages");
  if (message_index == 1)
    return SimulatorReport{0.0, "first message reproduced by running R_0 on fresh inputs"};
  const QsdProver honest = qsd_honest_prover(pair);
  const std::vector<int> b_qubits =
      complement_qubits(pair.phi0.n_qubits(), pair.output_qubits);
  const PureState replied(
      pair.phi0.n_qubits(),
      apply_on_qubits(honest.unitary_on_b, b_qubits, pair.phi0.amplitudes()));
  const double ov = std::abs(replied.overlap(pair.phi1));
  return SimulatorReport{std::sqrt(std::max(0.0, 1.0 - ov * ov)),
                         "view simulated by computing R_1 on fresh inputs"};
}

SimulatorReport hv_simulate_public_coin(const PurifiedPair& pair, int message_index) {
  require(message_index >= 1 && message_index <= 3, "public coin has three messages");
  if (message_index <= 2) return SimulatorReport{0.0, "prover message and coin are exact"};
  const SimulatorReport base = hv_simulate_coqsdwp(pair, 2);
  return SimulatorReport{0.5 * base.trace_distance,
                         "coin-0 branch exact, coin-1 branch simulated by R_1"};
}

SimulatorReport hv_simulate_efi(const DensityMatrix& rho_a, const DensityMatrix& rho_b, int t,
                                int message_index) {
  require(message_index == 1 || message_index == 2, "efi has two messages");
  if (message_index == 1)
    return SimulatorReport{0.0, "first message reproduced by the verifier's own sampling"};
  const EfiProver honest = efi_honest_prover(rho_a, rho_b);
  const ProtocolTranscript tr = efi_protocol(rho_a, rho_b, t, honest, 0, RunMode::kExact);
  return SimulatorReport{1.0 - tr.stats.at("p_exact"), "second message simulated as m = n"};
}

}  // namespace qplab
