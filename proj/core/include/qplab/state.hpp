#pragma once

#include <vector>

#include "qplab/common.hpp"

namespace qplab {

// Qubit convention throughout: little-endian, qubit 0 is the least
// significant bit of a basis-state index.

// Unit-norm complex amplitude vector of length 2^n.
class PureState {
 public:
  PureState(int n_qubits, Vector amplitudes);

  // |0...0> on n qubits.
  static PureState zero(int n_qubits);
  // Computational basis state |index>.
  static PureState basis(int n_qubits, long index);

  int n_qubits() const { return n_qubits_; }
  long dim() const { return amps_.size(); }
  const Vector& amplitudes() const { return amps_; }

  cxd overlap(const PureState& other) const;  // <this|other>

  Matrix projector() const;  // |psi><psi|

 private:
  int n_qubits_;
  Vector amps_;
};

// 2^n x 2^n PSD matrix with unit trace. Construction symmetrizes the input
// and fails on Hermiticity/PSD/trace violations beyond tolerance.
class DensityMatrix {
 public:
  DensityMatrix(int n_qubits, Matrix matrix);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int n_qubits);
  // Uniformly mixed state on the column span of the given orthonormal basis.
  static DensityMatrix uniform_on_subspace(int n_qubits, const Matrix& basis);

  int n_qubits() const { return n_qubits_; }
  long dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }

 private:
  int n_qubits_;
  Matrix mat_;
};

// Hermitian matrix on 2^n dimensions. Houses local terms, projectors, and
// assembled Hamiltonians.
class HermitianOperator {
 public:
  HermitianOperator(int n_qubits, Matrix matrix);

  static HermitianOperator identity(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  long dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }

  // 0 <= H <= I within tolerance (the local-term contract).
  bool is_contraction(double tol = kHermTol) const;
  bool is_projector(double tol = 1e-8) const;

 private:
  int n_qubits_;
  Matrix mat_;
};

// Kronecker products; qubit counts add. With the little-endian convention the
// LEFT factor occupies the low qubits of the combined register.
PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
Matrix kron_low_high(const Matrix& low, const Matrix& high);

PureState tensor_power(const PureState& a, int l);
DensityMatrix tensor_power(const DensityMatrix& a, int l);

// Reduced state on `keep_qubits` (indices into the full register, distinct).
DensityMatrix partial_trace(const DensityMatrix& state, const std::vector<int>& keep_qubits);
DensityMatrix partial_trace(const PureState& state, const std::vector<int>& keep_qubits);

// Embed a 2^k x 2^k operator acting on `qubits` into an n-qubit register.
Matrix embed(const Matrix& op, const std::vector<int>& qubits, int n_qubits);

// Apply a 2^k x 2^k operator on `qubits` to a full-register vector, without
// materializing the embedded matrix.
Vector apply_on_qubits(const Matrix& op, const std::vector<int>& qubits, const Vector& state);

}  // namespace qplab
