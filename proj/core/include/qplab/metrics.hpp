#pragma once

#include <cstdint>
#include <utility>

#include "qplab/state.hpp"

namespace qplab {

// ||a - b||_tr = (1/2) sum of singular values of a - b. In [0, 1].
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance(const PureState& a, const PureState& b);

// F(a, b) = || sqrt(a) sqrt(b) ||_1. In [0, 1]; for pure inputs |<a|b>|.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
double fidelity(const PureState& a, const DensityMatrix& b);

// Matrix square root / pseudo-inverse square root of a PSD operator via
// spectral decomposition; eigenvalues below the support cutoff are treated
// as zero.
Matrix sqrt_psd(const Matrix& m);
Matrix pinv_sqrt_psd(const Matrix& m);
// Projector onto the support of a PSD operator.
Matrix support_projector(const Matrix& m);

// Unitary on the last n qubits (register B) of two 2n-qubit states such that
// |<psi|(I (x) U)|phi>| equals the fidelity of the reduced states on the first
// n qubits. Any U meeting that contract is acceptable; Schmidt-degenerate
// inputs simply admit more than one.
struct UhlmannResult {
  Matrix unitary;        // acts on register B
  double achieved_overlap;
  double reduced_fidelity;
};
UhlmannResult uhlmann_unitary(const PureState& phi, const PureState& psi);

// General register split: U acts on `b_qubits`, the complement is kept fixed;
// maximizes |<psi|(I (x) U)|phi>| over unitaries on B.
UhlmannResult uhlmann_unitary_on(const PureState& phi, const PureState& psi,
                                 const std::vector<int>& b_qubits);

// Two-outcome POVM {E0, E1}, E0 + E1 = I (or the support projector for PGM).
struct TwoOutcomePovm {
  Matrix e0;
  Matrix e1;
};

// Helstrom-optimal discrimination of rho0 vs rho1 on equal priors; outcome 0
// votes rho0. Success probability = 1/2 + TD(rho0, rho1)/2.
TwoOutcomePovm helstrom_measurement(const DensityMatrix& rho0, const DensityMatrix& rho1);
double helstrom_success_probability(const DensityMatrix& rho0, const DensityMatrix& rho1);

// Pretty good measurement {S^-1/2 rho S^-1/2 / 2, S^-1/2 sigma S^-1/2 / 2}
// with S = (rho + sigma)/2; elements sum to the projector onto supp(S).
TwoOutcomePovm pgm(const DensityMatrix& rho, const DensityMatrix& sigma);
double pgm_error_probability(const DensityMatrix& rho, const DensityMatrix& sigma);

// Haar-random pure state: normalized complex Gaussian vector.
PureState haar_state(int n_qubits, std::uint64_t seed);
// Haar-random unitary: QR of a complex Gaussian matrix with phase fix.
Matrix haar_unitary(int n_qubits, std::uint64_t seed);
// Random density matrix with full-rank Wishart spectrum.
DensityMatrix random_density(int n_qubits, std::uint64_t seed);
// Random rank-r density matrix.
DensityMatrix random_density_rank(int n_qubits, int rank, std::uint64_t seed);

// Exact ground energy and ground state by dense Hermitian eigensolve.
std::pair<double, PureState> min_eigenpair(const HermitianOperator& h);

// Hoeffding two-sided half width at confidence 1 - delta.
double hoeffding_half_width(long trials, double delta);

}  // namespace qplab
