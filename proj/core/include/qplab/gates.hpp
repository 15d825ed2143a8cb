#pragma once

#include <string>
#include <vector>

#include "qplab/state.hpp"

namespace qplab {

// Fixed universal set. Gate names match the circuit file format.
enum class GateKind { H, T, CNOT, X, SWAP, TOFFOLI };

GateKind gate_kind_from_name(const std::string& name);
std::string gate_name(GateKind kind);
int gate_arity(GateKind kind);
Matrix gate_matrix(GateKind kind);

struct Gate {
  GateKind kind;
  std::vector<int> qubits;  // targets in circuit-file order
};

// Ordered list of elementary gates; verifier circuits V = V_m ... V_1.
class GateCircuit {
 public:
  GateCircuit(int n_qubits, std::vector<Gate> gates);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  int size() const { return static_cast<int>(gates_.size()); }

  PureState apply(const PureState& in) const;
  Vector apply(Vector v) const;
  // Apply only gates 1..t (the clock-Hamiltonian prefix V_t ... V_1).
  Vector apply_prefix(Vector v, int t) const;

  // Dense unitary of the full circuit.
  Matrix unitary() const;

  // Same circuit acting on a wider register, gate targets shifted by offset.
  GateCircuit embedded(int total_qubits, int offset) const;

 private:
  int n_qubits_;
  std::vector<Gate> gates_;
};

// Random circuit over the universal set; gates act on distinct qubits drawn
// uniformly, `avoid` qubits are never touched. An explicit `kinds` list
// restricts the gate pool (e.g. to two-qubit gates for clock reductions).
GateCircuit random_circuit(int n_qubits, int n_gates, std::uint64_t seed,
                           const std::vector<int>& avoid = {},
                           const std::vector<GateKind>& kinds = {});

}  // namespace qplab
