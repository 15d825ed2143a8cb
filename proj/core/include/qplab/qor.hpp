#pragma once

#include "qplab/gates.hpp"
#include "qplab/report.hpp"
#include "qplab/state.hpp"

namespace qplab {

// Quantum OR instance: a projector Lambda on H_A (x) H_B with dim B = 2^m.
// Case (i): exists sigma on B with Tr(Lambda rho (x) sigma) >= eta;
// case (ii): for all sigma the trace is at most delta.
struct QorInstance {
  int n_a = 1;  // qubits of register A
  int m = 1;    // qubits of register B
  HermitianOperator lambda;

  void validate() const;
  // max_sigma Tr(Lambda rho (x) sigma): top eigenvalue of the B-side
  // conditional operator; classifies which promise case an instance is in.
  double best_sigma_value(const DensityMatrix& rho) const;
};

// One-copy Quantum OR algorithm: alternate the projective measurements
// {Pi, I - Pi} and {Delta, I - Delta} for ceil(N / eta) rounds on
// rho (x) |0><0|_B (x) |0><0|_C, accepting on Pi or on I - Delta.
// Case (i) acceptance >= eta^2 / 7; case (ii) acceptance <= 4 N delta.
VerdictReport qor_run(const DensityMatrix& rho, const QorInstance& inst, double eta, double delta);
VerdictReport qor_run(const PureState& rho, const QorInstance& inst, double eta, double delta);

// Soundness-amplified reduction from a QMA-style verifier to a Quantum OR
// instance: w rounds of apply-V, measure the answer, rewind with V^dagger,
// with fresh input copies per round and the witness register shared. The
// answer bits are deferred onto flag qubits so Lambda is a genuine projector.
struct QmaVerifier {
  GateCircuit circuit;  // acts on [input (n_input*t_copies) | witness | ancilla]
  int n_input = 1;      // qubits per input copy
  int t_copies = 1;     // input copies consumed per round
  int n_witness = 1;
  int n_ancilla = 1;    // answer qubit is the first ancilla
};

struct QmaToQorResult {
  QorInstance instance;
  // The QOR input on register A: per round, t_copies of the problem input
  // followed by zeroed ancillas and one zeroed flag qubit.
  PureState rho_a;
  int rounds = 1;
  double completeness_floor = 0.0;  // 1 - 4 w 2^-n
  double soundness_ceiling = 0.0;   // 2^-wn
};

QmaToQorResult qma_to_qor(const QmaVerifier& verifier, const PureState& input, int rounds,
                          int soundness_exponent);

}  // namespace qplab
