#include "qplab/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qplab/random.hpp"

namespace qplab {

GateKind gate_kind_from_name(const std::string& name) {
  if (name == "H") return GateKind::H;
  if (name == "T") return GateKind::T;
  if (name == "CNOT") return GateKind::CNOT;
  if (name == "X") return GateKind::X;
  if (name == "SWAP") return GateKind::SWAP;
  if (name == "TOFFOLI") return GateKind::TOFFOLI;
  throw PreconditionError("unknown gate name: " + name);
}

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::T: return "T";
    case GateKind::CNOT: return "CNOT";
    case GateKind::X: return "X";
    case GateKind::SWAP: return "SWAP";
    case GateKind::TOFFOLI: return "TOFFOLI";
  }
  throw PreconditionError("bad gate kind");
}

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::H:
    case GateKind::T:
    case GateKind::X: return 1;
    case GateKind::CNOT:
    case GateKind::SWAP: return 2;
    case GateKind::TOFFOLI: return 3;
  }
  throw PreconditionError("bad gate kind");
}

Matrix gate_matrix(GateKind kind) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case GateKind::H: {
      Matrix m(2, 2);
      m << s, s, s, -s;
      return m;
    }
    case GateKind::T: {
      Matrix m = Matrix::Identity(2, 2);
      m(1, 1) = std::exp(cxd(0.0, std::numbers::pi / 4.0));
      return m;
    }
    case GateKind::X: {
      Matrix m(2, 2);
      m << 0, 1, 1, 0;
      return m;
    }
    case GateKind::CNOT: {
      // qubits[0] = control (low bit), qubits[1] = target
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(2, 2) = 1;  // control 0
      m(3, 1) = m(1, 3) = 1;  // control 1 flips target
      return m;
    }
    case GateKind::SWAP: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(3, 3) = 1;
      m(1, 2) = m(2, 1) = 1;
      return m;
    }
    case GateKind::TOFFOLI: {
      // qubits[0], qubits[1] = controls, qubits[2] = target
      Matrix m = Matrix::Identity(8, 8);
      m(3, 3) = m(7, 7) = 0;
      m(3, 7) = m(7, 3) = 1;
      return m;
    }
  }
  throw PreconditionError("bad gate kind");
}

GateCircuit::GateCircuit(int n_qubits, std::vector<Gate> gates)
    : n_qubits_(n_qubits), gates_(std::move(gates)) {
  dim_of(n_qubits);
  for (const Gate& g : gates_) {
    require(static_cast<int>(g.qubits.size()) == gate_arity(g.kind),
            "gate " + gate_name(g.kind) + " has wrong target count");
    std::vector<int> sorted = g.qubits;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            "gate targets must be distinct");
    for (int q : g.qubits) require(q >= 0 && q < n_qubits, "gate target out of range");
  }
}

PureState GateCircuit::apply(const PureState& in) const {
  require(in.n_qubits() == n_qubits_, "circuit/state register mismatch");
  return PureState(n_qubits_, apply(in.amplitudes()));
}

Vector GateCircuit::apply(Vector v) const { return apply_prefix(std::move(v), size()); }

Vector GateCircuit::apply_prefix(Vector v, int t) const {
  require(v.size() == dim_of(n_qubits_), "circuit/vector dimension mismatch");
  require(t >= 0 && t <= size(), "prefix length out of range");
  for (int i = 0; i < t; ++i)
    v = apply_on_qubits(gate_matrix(gates_[i].kind), gates_[i].qubits, v);
  return v;
}

Matrix GateCircuit::unitary() const {
  const long d = dim_of(n_qubits_);
  Matrix u = Matrix::Identity(d, d);
  for (const Gate& g : gates_) u = embed(gate_matrix(g.kind), g.qubits, n_qubits_) * u;
  return u;
}

GateCircuit GateCircuit::embedded(int total_qubits, int offset) const {
  require(offset >= 0 && offset + n_qubits_ <= total_qubits, "embedded: range mismatch");
  std::vector<Gate> shifted = gates_;
  for (Gate& g : shifted)
    for (int& q : g.qubits) q += offset;
  return GateCircuit(total_qubits, std::move(shifted));
}

GateCircuit random_circuit(int n_qubits, int n_gates, std::uint64_t seed,
                           const std::vector<int>& avoid, const std::vector<GateKind>& kinds) {
  std::vector<int> pool;
  for (int q = 0; q < n_qubits; ++q)
    if (std::find(avoid.begin(), avoid.end(), q) == avoid.end()) pool.push_back(q);
  require(!pool.empty(), "random_circuit: no usable qubits");
  Rng rng(seed);
  const std::vector<GateKind> all = {GateKind::H,    GateKind::T,    GateKind::CNOT,
                                     GateKind::X,    GateKind::SWAP, GateKind::TOFFOLI};
  const std::vector<GateKind>& pool_kinds = kinds.empty() ? all : kinds;
  std::vector<Gate> gates;
  while (static_cast<int>(gates.size()) < n_gates) {
    GateKind k = pool_kinds[rng.uniform_int(pool_kinds.size())];
    const int arity = gate_arity(k);
    if (arity > static_cast<int>(pool.size())) continue;
    std::vector<int> picks = pool;
    for (int i = 0; i < arity; ++i) {
      const std::size_t j = i + rng.uniform_int(picks.size() - i);
      std::swap(picks[i], picks[j]);
    }
    picks.resize(arity);
    gates.push_back(Gate{k, picks});
  }
  return GateCircuit(n_qubits, std::move(gates));
}

}  // namespace qplab
