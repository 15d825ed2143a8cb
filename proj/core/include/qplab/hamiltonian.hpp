#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "qplab/gates.hpp"
#include "qplab/state.hpp"

namespace qplab {

// One k-local Hamiltonian term, 0 <= matrix <= I. `copies` is an integer
// multiplicity: the term enters the instance sum that many times and counts
// that many times in the |S|/|L| budget, which keeps every stored matrix a
// contraction even for heavily weighted stabilizer terms.
struct LocalTerm {
  std::vector<int> qubits;  // sorted, distinct
  HermitianOperator matrix;
  long copies = 1;

  void validate(int n_total_qubits) const;
};

enum class InstanceVariant { kPure, kMixed, kLowComplexity };

std::string variant_name(InstanceVariant v);
InstanceVariant variant_from_name(const std::string& name);

// The LHwP / LHwM / LLHwP input: plain terms {H_s}, coupled terms {H_l}
// (each tensored against the unknown-state projector on the input register),
// and the thresholds (p, a, b).
struct HamiltonianInstance {
  int n_total_qubits = 0;
  std::vector<LocalTerm> plain_terms;
  std::vector<LocalTerm> coupled_terms;
  int input_lo = 0;  // inclusive
  int input_hi = 0;  // inclusive
  long p = 1;
  double a = 0.0;
  double b = 0.0;
  InstanceVariant variant = InstanceVariant::kPure;

  int input_qubits() const { return input_hi - input_lo + 1; }
  long plain_weight() const;
  long coupled_weight() const;
  // |S| + |L| for the pure variant, |S| + 2^k |L| for the mixed one.
  long term_budget() const;

  void validate() const;
};

nlohmann::json instance_to_json(const HamiltonianInstance& inst);
HamiltonianInstance instance_from_json(const nlohmann::json& j);

// H = sum_s H_s - |psi><psi|_I (x) sum_l H_l, each local term embedded by
// identity padding. `psi_on_input` covers the whole input register.
HermitianOperator assemble(const HamiltonianInstance& inst, const PureState& psi_on_input);

// Register layout of the clock construction. Qubit order:
//   [ I : c*n ][ W : w ][ A : q, answer qubit first ][ clock ]
// Clock qubits are stored high-to-low so that T_1 is the global last qubit;
// the coupled term then acts on the last qubit as the mixed-variant
// uniform-initialization form requires.
struct ClockLayout {
  int n_input = 1;    // qubits per input copy
  int c_copies = 1;   // copies of the input in register I
  int n_witness = 1;  // register W
  int n_ancilla = 1;  // register A, >= 1; first ancilla is the answer qubit
  int m_gates = 1;    // clock length m+1

  int input_width() const { return n_input * c_copies; }
  int witness_lo() const { return input_width(); }
  int ancilla_lo() const { return input_width() + n_witness; }
  int answer_qubit() const { return ancilla_lo(); }
  int clock_lo() const { return ancilla_lo() + n_ancilla; }
  // T_j for j in [1, m+1]; T_1 is the last qubit of the register.
  int clock_qubit(int j) const { return clock_lo() + (m_gates + 1 - j); }
  int total_qubits() const { return clock_lo() + m_gates + 1; }
  // Basis index of the legal clock string 1^t 0^(m-t+1) within the clock field.
  long clock_field(int t) const;
};

struct CookLevinResult {
  HamiltonianInstance instance;
  ClockLayout layout;
  GateCircuit verifier;  // the original circuit on I,W,A (not clock-embedded)
};

// Quantum Cook-Levin reduction: H_in + H_out + H_prop + H_stab with the
// unary-clock 5-local encoding, every term divided by 2 so 0 <= H_i <= I.
// The stabilizer weight enters as `stab_penalty` copies of unit projectors.
// Sets a = 1/(2^(n+1)(m+1)); b is left at a + (gap floor) and should be
// finalized by the instance generator (exact eigensolve for no instances).
CookLevinResult cook_levin(const GateCircuit& verifier, const ClockLayout& layout,
                           long stab_penalty = 10000, InstanceVariant variant = InstanceVariant::kPure);

// History state (m+1)^(-1/2) sum_t V_t...V_1 (psi^c (x) phi (x) 0_A) (x) clock_t.
PureState history_state(const GateCircuit& verifier, const ClockLayout& layout,
                        const PureState& psi, const PureState& phi);

// Unitary C on the full clock register mapping psi (x) phi (x) 0 to the
// history state; the semi-uniform witness circuit of the mixed reduction.
Matrix history_witness_unitary(const GateCircuit& verifier, const ClockLayout& layout);

// Angle between subspaces spanned by two orthonormal basis matrices:
// arccos of the largest singular value of X^dagger Y.
double subspace_angle(const Matrix& x_basis, const Matrix& y_basis);

// Geometric lemma certificates for PSD H1, H2 with minimum nonzero
// eigenvalue >= v: a lower bound on lambda_min(H1 + H2) and an upper bound
// on lambda_max(P_null(H1) + P_null(H2)), both next to the exact values.
struct GeometricBounds {
  double angle = 0.0;
  double lambda_min_lower = 0.0;
  double lambda_min_exact = 0.0;
  double projector_upper = 0.0;
  double projector_exact = 0.0;
};
GeometricBounds geometric_bounds(const HermitianOperator& h1, const HermitianOperator& h2,
                                 std::optional<double> v = std::nullopt);

// Eigenbasis decomposition with descending eigenvalues, deterministic
// tie-break (lexicographic on eigenvector entries) and fixed phases.
struct EigenDecomposition {
  std::vector<double> probabilities;
  std::vector<PureState> states;
};
EigenDecomposition eigen_decomposition(const DensityMatrix& rho);

// E_{psi <- D}[ <eta_psi| H_psi |eta_psi> ] for D an eigenbasis decomposition
// of rho^(x)copies and eta_psi built by the supplied witness map.
double lhwm_expected_energy(const HamiltonianInstance& inst, const DensityMatrix& rho, int copies,
                            const std::function<PureState(const PureState&)>& witness_builder);
double lhwm_expected_energy(const HamiltonianInstance& inst, const EigenDecomposition& decomposition,
                            const std::function<PureState(const PureState&)>& witness_builder);

}  // namespace qplab
