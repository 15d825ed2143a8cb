#pragma once

// Independent brute-force oracles used by the test suites. These stay on the
// naive index-summation route and never call the library paths they check.

#include <vector>

#include "qplab/state.hpp"

namespace qplab::oracle {

// Entrywise double-loop Kronecker product, low factor on the low bits.
inline Matrix naive_kron(const Matrix& low, const Matrix& high) {
  Matrix out(low.rows() * high.rows(), low.cols() * high.cols());
  for (long i = 0; i < out.rows(); ++i)
    for (long j = 0; j < out.cols(); ++j)
      out(i, j) = low(i % low.rows(), j % low.cols()) * high(i / low.rows(), j / low.cols());
  return out;
}

// Naive index-summation partial trace onto `keep` (little-endian bit sets).
inline Matrix naive_partial_trace(const Matrix& rho, int n_qubits, const std::vector<int>& keep) {
  const int k = static_cast<int>(keep.size());
  std::vector<int> rest;
  for (int q = 0; q < n_qubits; ++q) {
    bool kept = false;
    for (int kq : keep) kept = kept || kq == q;
    if (!kept) rest.push_back(q);
  }
  auto build = [&](long sub, long r) {
    long x = 0;
    for (int i = 0; i < k; ++i) x |= ((sub >> i) & 1) << keep[i];
    for (std::size_t i = 0; i < rest.size(); ++i) x |= ((r >> i) & 1) << rest[i];
    return x;
  };
  Matrix out = Matrix::Zero(1L << k, 1L << k);
  for (long i = 0; i < (1L << k); ++i)
    for (long j = 0; j < (1L << k); ++j)
      for (long r = 0; r < (1L << rest.size()); ++r) out(i, j) += rho(build(i, r), build(j, r));
  return out;
}

}  // namespace qplab::oracle
