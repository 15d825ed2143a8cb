#include "qplab/state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <unordered_set>

namespace qplab {

namespace {

void check_distinct_sorted_ok(const std::vector<int>& qubits, int n_qubits) {
  std::unordered_set<int> seen;
  for (int q : qubits) {
    require(q >= 0 && q < n_qubits, "qubit index out of range");
    require(seen.insert(q).second, "qubit indices must be distinct");
  }
}

// Scatter the k bits of `sub` into the positions listed in `qubits`, and the
// bits of `rest` into the remaining positions (in increasing order).
long scatter_bits(long sub, long rest, const std::vector<int>& qubits, int n_qubits) {
  long out = 0;
  std::vector<bool> taken(n_qubits, false);
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if ((sub >> i) & 1) out |= 1L << qubits[i];
    taken[qubits[i]] = true;
  }
  int r = 0;
  for (int q = 0; q < n_qubits; ++q) {
    if (taken[q]) continue;
    if ((rest >> r) & 1) out |= 1L << q;
    ++r;
  }
  return out;
}

}  // namespace

PureState::PureState(int n_qubits, Vector amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  require(amps_.size() == dim_of(n_qubits), "amplitude vector length is not 2^n");
  const double norm = amps_.norm();
  require(std::abs(norm - 1.0) <= 1e-8, "pure state is not unit norm");
  if (std::abs(norm - 1.0) > kNormTol) amps_ /= norm;
}

PureState PureState::zero(int n_qubits) { return basis(n_qubits, 0); }

PureState PureState::basis(int n_qubits, long index) {
  const long d = dim_of(n_qubits);
  require(index >= 0 && index < d, "basis index out of range");
  Vector v = Vector::Zero(d);
  v(index) = 1.0;
  return PureState(n_qubits, std::move(v));
}

cxd PureState::overlap(const PureState& other) const {
  require(dim() == other.dim(), "dimension mismatch");
  return amps_.dot(other.amps_);
}

Matrix PureState::projector() const { return amps_ * amps_.adjoint(); }

DensityMatrix::DensityMatrix(int n_qubits, Matrix matrix)
    : n_qubits_(n_qubits), mat_(std::move(matrix)) {
  const long d = dim_of(n_qubits);
  require(mat_.rows() == d && mat_.cols() == d, "density matrix dimension is not 2^n");
  const double herm_violation = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  require(herm_violation <= kHermTol, "density matrix is not Hermitian");
  mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
  require(std::abs(mat_.trace().real() - 1.0) <= kNormTol && std::abs(mat_.trace().imag()) <= kNormTol,
          "density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -kPsdTol, "density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.n_qubits(), psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const long d = dim_of(n_qubits);
  return DensityMatrix(n_qubits, Matrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::uniform_on_subspace(int n_qubits, const Matrix& basis) {
  const long d = dim_of(n_qubits);
  require(basis.rows() == d && basis.cols() >= 1, "subspace basis shape mismatch");
  require((basis.adjoint() * basis - Matrix::Identity(basis.cols(), basis.cols()))
              .cwiseAbs()
              .maxCoeff() <= 1e-8,
          "subspace basis is not orthonormal");
  return DensityMatrix(n_qubits, basis * basis.adjoint() / static_cast<double>(basis.cols()));
}

HermitianOperator::HermitianOperator(int n_qubits, Matrix matrix)
    : n_qubits_(n_qubits), mat_(std::move(matrix)) {
  const long d = dim_of(n_qubits);
  require(mat_.rows() == d && mat_.cols() == d, "operator dimension is not 2^n");
  const double herm_violation = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  require(herm_violation <= kHermTol, "operator is not Hermitian");
  mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
}

HermitianOperator HermitianOperator::identity(int n_qubits) {
  const long d = dim_of(n_qubits);
  return HermitianOperator(n_qubits, Matrix::Identity(d, d));
}

bool HermitianOperator::is_contraction(double tol) const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol && es.eigenvalues().maxCoeff() <= 1.0 + tol;
}

bool HermitianOperator::is_projector(double tol) const {
  return ((mat_ * mat_ - mat_).cwiseAbs().maxCoeff() <= tol);
}

Matrix kron_low_high(const Matrix& low, const Matrix& high) {
  // index = low_index + dim(low) * high_index
  Matrix out(low.rows() * high.rows(), low.cols() * high.cols());
  for (long i = 0; i < high.rows(); ++i)
    for (long j = 0; j < high.cols(); ++j)
      out.block(i * low.rows(), j * low.cols(), low.rows(), low.cols()) = high(i, j) * low;
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  const long da = a.dim(), db = b.dim();
  Vector v(da * db);
  for (long j = 0; j < db; ++j)
    for (long i = 0; i < da; ++i) v(i + da * j) = a.amplitudes()(i) * b.amplitudes()(j);
  return PureState(a.n_qubits() + b.n_qubits(), std::move(v));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(a.n_qubits() + b.n_qubits(), kron_low_high(a.matrix(), b.matrix()));
}

PureState tensor_power(const PureState& a, int l) {
  require(l >= 1, "tensor power needs l >= 1");
  PureState out = a;
  for (int i = 1; i < l; ++i) out = tensor(out, a);
  return out;
}

DensityMatrix tensor_power(const DensityMatrix& a, int l) {
  require(l >= 1, "tensor power needs l >= 1");
  DensityMatrix out = a;
  for (int i = 1; i < l; ++i) out = tensor(out, a);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& state, const std::vector<int>& keep_qubits) {
  const int n = state.n_qubits();
  check_distinct_sorted_ok(keep_qubits, n);
  const int k = static_cast<int>(keep_qubits.size());
  const long dk = 1L << k;
  const long dr = 1L << (n - k);
  Matrix out = Matrix::Zero(dk, dk);
  for (long i = 0; i < dk; ++i)
    for (long j = 0; j < dk; ++j) {
      cxd acc = 0.0;
      for (long r = 0; r < dr; ++r) {
        const long row = scatter_bits(i, r, keep_qubits, n);
        const long col = scatter_bits(j, r, keep_qubits, n);
        acc += state.matrix()(row, col);
      }
      out(i, j) = acc;
    }
  return DensityMatrix(k, std::move(out));
}

DensityMatrix partial_trace(const PureState& state, const std::vector<int>& keep_qubits) {
  return partial_trace(DensityMatrix::from_pure(state), keep_qubits);
}

Matrix embed(const Matrix& op, const std::vector<int>& qubits, int n_qubits) {
  const int k = static_cast<int>(qubits.size());
  check_distinct_sorted_ok(qubits, n_qubits);
  require(op.rows() == (1L << k) && op.cols() == (1L << k), "operator dimension mismatch");
  const long d = dim_of(n_qubits);
  const long dk = 1L << k;
  const long dr = d >> k;
  Matrix out = Matrix::Zero(d, d);
  for (long r = 0; r < dr; ++r)
    for (long i = 0; i < dk; ++i) {
      const long row = scatter_bits(i, r, qubits, n_qubits);
      for (long j = 0; j < dk; ++j) {
        if (op(i, j) == cxd(0.0, 0.0)) continue;
        out(row, scatter_bits(j, r, qubits, n_qubits)) = op(i, j);
      }
    }
  return out;
}

Vector apply_on_qubits(const Matrix& op, const std::vector<int>& qubits, const Vector& state) {
  const int n = qubits_of_dim(state.size());
  const int k = static_cast<int>(qubits.size());
  check_distinct_sorted_ok(qubits, n);
  require(op.rows() == (1L << k) && op.cols() == (1L << k), "operator dimension mismatch");
  const long dk = 1L << k;
  const long dr = state.size() >> k;
  Vector out = Vector::Zero(state.size());
  Vector slice(dk);
  for (long r = 0; r < dr; ++r) {
    for (long i = 0; i < dk; ++i) slice(i) = state(scatter_bits(i, r, qubits, n));
    Vector res = op * slice;
    for (long i = 0; i < dk; ++i) out(scatter_bits(i, r, qubits, n)) = res(i);
  }
  return out;
}

}  // namespace qplab
