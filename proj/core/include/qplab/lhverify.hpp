#pragma once

#include "qplab/hamiltonian.hpp"
#include "qplab/report.hpp"

namespace qplab {

enum class VerifyMode { kExact, kSampled };

// LHwP verifier: per round draw x in S u L (weighted by copies), measure the
// witness copy in the eigenbasis of H_x; for coupled terms follow up with a
// partial swap test against psi on the input register and emit Y - 2Z.
// Accepts when (|S|+|L|) * mean <= a + 1/p.
struct LhwpOptions {
  VerifyMode mode = VerifyMode::kExact;
  long rounds = 200;  // stands in for the paper's p^5 at desk scale
  std::uint64_t seed = 0;
};

VerdictReport lhwp_verify(const HamiltonianInstance& inst, const PureState& psi_on_input,
                          const PureState& witness, const LhwpOptions& opts);

// Exact per-round estimator expectation (the verifier's measurement route,
// composed analytically); equals Tr(witness H) / (|S|+|L|) for any witness.
double lhwp_estimator_expectation(const HamiltonianInstance& inst, const PureState& psi_on_input,
                                  const PureState& witness);

// LHwM witness: a circuit C on the full register (I,W,D,E ordering, E = last
// k qubits), the state witness phi on W, and the claimed amplitude.
struct LhwmWitness {
  Matrix circuit;
  PureState phi;
  double alpha_prover = 0.0;
};

struct LhwmOptions {
  VerifyMode mode = VerifyMode::kExact;
  long rounds = 8;    // outer rounds (paper: p^5)
  long block = 200;   // X samples per estimator / abort block (paper: p^5)
  double abort_confidence = 1e-3;  // Hoeffding widening of the abort window
  std::uint64_t seed = 0;
};

// Exact X and W_L expectations of the Hadamard-test subroutine for one
// coupled term, per eigenvalue index r, next to the target value the
// estimator is meant to track.
struct LhwmCase2Analysis {
  std::vector<double> lambdas;           // eigenvalues of H_l
  std::vector<double> x_expectations;    // E[X_r]
  std::vector<double> w_l_expectations;  // -lambda_r * alpha_prover * E[X_r]
  std::vector<double> step2_targets;     // -lambda_r * E<eta|P_psi (x) P_vr|eta>
};

LhwmCase2Analysis lhwm_case2_analysis(const HamiltonianInstance& inst,
                                      const EigenDecomposition& inputs, std::size_t coupled_index,
                                      const LhwmWitness& witness);

// eta = C (psi_I (x) phi_W (x) 0_DE), the semi-uniform witness construction.
PureState lhwm_build_witness(const HamiltonianInstance& inst, const Matrix& circuit,
                             const PureState& psi_on_input, const PureState& phi);

// k-LHwM verifier (mixed instances): case-1 rounds reuse the LHwP estimator
// on eta = C(psi (x) phi (x) 0); case-2 rounds run the controlled-C Hadamard
// test with the alpha_prover abort rule. Accepts when never aborted and
// (|S| + 2^k|L|) * mean <= a + 2/p.
VerdictReport lhwm_verify(const HamiltonianInstance& inst, const DensityMatrix& rho, int copies,
                          const LhwmWitness& witness, const LhwmOptions& opts);

}  // namespace qplab
