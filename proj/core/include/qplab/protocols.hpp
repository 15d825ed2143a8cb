#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qplab/gates.hpp"
#include "qplab/metrics.hpp"
#include "qplab/state.hpp"

namespace qplab {

enum class RunMode { kExact, kSampled };

struct TranscriptMessage {
  std::string sender;  // "verifier" | "prover"
  std::string kind;    // "state" | "bits"
  std::string payload; // bit strings verbatim; states elided to a size note
};

struct ProtocolTranscript {
  std::string protocol;
  std::vector<TranscriptMessage> messages;
  std::uint64_t seed = 0;
  bool completed = false;
  bool accept = false;
  std::map<std::string, double> stats;

  nlohmann::json to_json() const;
};

// Provers are structural: they only ever see message registers. Honest
// strategies are built from the exact input description (the unbounded-copy
// prover of the model knows the state classically).

// ---- Mixedness testing (is rho_in far from maximally mixed?) ----
struct MixednessProver {
  std::string label;
  TwoOutcomePovm povm;  // guess 0 = "input state", 1 = "maximally mixed"
};
MixednessProver mixedness_honest_prover(const DensityMatrix& rho_in);
MixednessProver mixedness_constant_zero_prover(int lambda_qubits);

// Verifier sends rho_in or I/2^lambda per coin, prover answers, accept when
// at least 5/8 of the answers match the coins.
ProtocolTranscript mixedness_protocol(const DensityMatrix& rho_in, int t,
                                      const MixednessProver& prover, std::uint64_t seed,
                                      RunMode mode);

// ---- Maximal-entanglement testing via EPR halves and swap tests ----
struct MaxEntProver {
  std::string label;
  Matrix unitary_on_b;
};
MaxEntProver maxent_honest_prover(const PureState& phi_in);
MaxEntProver maxent_identity_prover(int lambda_qubits);

ProtocolTranscript max_entangled_protocol(const PureState& phi_in, int t,
                                          const MaxEntProver& prover, std::uint64_t seed,
                                          RunMode mode);

// ---- Purified circuit outputs and polarization ----
struct PurifiedPair {
  PureState phi0;
  PureState phi1;
  std::vector<int> output_qubits;  // register A; the rest purifies

  DensityMatrix reduced(int which) const;
};

// Run Q_b on phi (x) |0^ancilla>; output register = `output_qubits`.
PurifiedPair purified_outputs(const GateCircuit& q0, const GateCircuit& q1, const PureState& phi,
                              int n_ancilla, const std::vector<int>& output_qubits);

// XOR gadget (trace distance -> TD^r) followed by an l-fold direct product;
// the standard polarization combination for 0 < alpha < beta^2 < 1.
PurifiedPair polarize(const PurifiedPair& in, int xor_copies, int power_copies);

// ---- coQSDwP: are the two circuit outputs close? ----
struct QsdProver {
  std::string label;
  Matrix unitary_on_b;
};
QsdProver qsd_honest_prover(const PurifiedPair& pair);
QsdProver qsd_identity_prover(const PurifiedPair& pair);

ProtocolTranscript coqsdwp_protocol(const PurifiedPair& pair, const QsdProver& prover,
                                    std::uint64_t seed, RunMode mode);

// ---- Public-coin variant with the coin between the prover's messages ----
struct PublicCoinCheatValue {
  double value = 0.0;        // best cheating acceptance found
  double analytic_bound = 0.0;  // 3/4 + F(sigma0, sigma1)/4
};

ProtocolTranscript public_coin_qsd(const PurifiedPair& pair, const QsdProver& prover,
                                   std::uint64_t seed, RunMode mode);
// Optimal malicious value: analytic for pure outputs, gradient-free search
// over the first-message state otherwise, cross-checked against the bound.
PublicCoinCheatValue public_coin_optimal_cheat(const PurifiedPair& pair, std::uint64_t seed);

// ---- EFI pair distinguishing game ----
struct EfiProver {
  std::string label;
  TwoOutcomePovm povm;  // reference discrimination of (rho0, rho1)
};
EfiProver efi_honest_prover(const DensityMatrix& rho0, const DensityMatrix& rho1);

// Verifier swaps each (A_i, B_i) pair per coin n_i; the prover reconstructs n
// from pairwise discrimination. Accepts iff m = n exactly.
ProtocolTranscript efi_protocol(const DensityMatrix& rho_a, const DensityMatrix& rho_b, int t,
                                const EfiProver& prover, std::uint64_t seed, RunMode mode);

// ---- Honest-verifier view simulators ----
struct SimulatorReport {
  double trace_distance = 0.0;  // exact TD(simulated view, real view)
  std::string note;
};

SimulatorReport hv_simulate_mixedness(const DensityMatrix& rho_in, int t, int message_index);
SimulatorReport hv_simulate_maxent(const PureState& phi_in, int t, int message_index);
SimulatorReport hv_simulate_coqsdwp(const PurifiedPair& pair, int message_index);
SimulatorReport hv_simulate_public_coin(const PurifiedPair& pair, int message_index);
SimulatorReport hv_simulate_efi(const DensityMatrix& rho_a, const DensityMatrix& rho_b, int t,
                                int message_index);

}  // namespace qplab
