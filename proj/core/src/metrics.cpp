#include "qplab/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "qplab/random.hpp"

namespace qplab {

namespace {

// Reshape a pure state into the dimA x dimB coefficient matrix M(a, b) with
// b gathered from `b_qubits` and a from the complement.
Matrix coefficient_matrix(const PureState& s, const std::vector<int>& b_qubits) {
  const int n = s.n_qubits();
  std::vector<int> a_qubits;
  for (int q = 0; q < n; ++q)
    if (std::find(b_qubits.begin(), b_qubits.end(), q) == b_qubits.end()) a_qubits.push_back(q);
  const long da = 1L << a_qubits.size();
  const long db = 1L << b_qubits.size();
  Matrix m(da, db);
  for (long x = 0; x < s.dim(); ++x) {
    long a = 0, b = 0;
    for (std::size_t i = 0; i < a_qubits.size(); ++i) a |= ((x >> a_qubits[i]) & 1) << i;
    for (std::size_t i = 0; i < b_qubits.size(); ++i) b |= ((x >> b_qubits[i]) & 1) << i;
    m(a, b) = s.amplitudes()(x);
  }
  return m;
}

}  // namespace

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.dim() == b.dim(), "trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const PureState& a, const PureState& b) {
  return trace_distance(DensityMatrix::from_pure(a), DensityMatrix::from_pure(b));
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.dim() == b.dim(), "fidelity: dimension mismatch");
  const Matrix sa = sqrt_psd(a.matrix());
  // F = tr sqrt( sqrt(a) b sqrt(a) )
  Eigen::SelfAdjointEigenSolver<Matrix> es(sa * b.matrix() * sa, Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    f += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
  return std::min(1.0, f);
}

double fidelity(const PureState& a, const DensityMatrix& b) {
  require(a.dim() == b.dim(), "fidelity: dimension mismatch");
  const double f2 = (a.amplitudes().adjoint() * b.matrix() * a.amplitudes())(0).real();
  return std::sqrt(std::max(0.0, f2));
}

Matrix sqrt_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  RealVector d = es.eigenvalues();
  for (long i = 0; i < d.size(); ++i) d(i) = d(i) > kSupportCutoff ? std::sqrt(d(i)) : 0.0;
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix pinv_sqrt_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  RealVector d = es.eigenvalues();
  for (long i = 0; i < d.size(); ++i) d(i) = d(i) > kSupportCutoff ? 1.0 / std::sqrt(d(i)) : 0.0;
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix support_projector(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  RealVector d = es.eigenvalues();
  for (long i = 0; i < d.size(); ++i) d(i) = d(i) > kSupportCutoff ? 1.0 : 0.0;
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

UhlmannResult uhlmann_unitary_on(const PureState& phi, const PureState& psi,
                                 const std::vector<int>& b_qubits) {
  require(phi.n_qubits() == psi.n_qubits(), "uhlmann: register mismatch");
  const Matrix mphi = coefficient_matrix(phi, b_qubits);
  const Matrix mpsi = coefficient_matrix(psi, b_qubits);
  // <psi|(I (x) U)|phi> = tr(K^T U) with K = Mpsi^dagger Mphi; the trace-norm
  // maximizer is the polar unitary of K^T, read off from its SVD.
  const Matrix kt = (mpsi.adjoint() * mphi).transpose();
  Eigen::JacobiSVD<Matrix> svd(kt, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix u = svd.matrixV() * svd.matrixU().adjoint();

  const Vector rotated = apply_on_qubits(u, b_qubits, phi.amplitudes());
  const double achieved = std::abs(psi.amplitudes().dot(rotated));

  std::vector<int> a_qubits;
  for (int q = 0; q < phi.n_qubits(); ++q)
    if (std::find(b_qubits.begin(), b_qubits.end(), q) == b_qubits.end()) a_qubits.push_back(q);
  const double fred = fidelity(partial_trace(phi, a_qubits), partial_trace(psi, a_qubits));
  return UhlmannResult{std::move(u), achieved, fred};
}

UhlmannResult uhlmann_unitary(const PureState& phi, const PureState& psi) {
  require(phi.n_qubits() == psi.n_qubits() && phi.n_qubits() % 2 == 0,
          "uhlmann: states must live on 2n qubits");
  const int n = phi.n_qubits() / 2;
  std::vector<int> b_qubits;
  for (int q = n; q < 2 * n; ++q) b_qubits.push_back(q);
  return uhlmann_unitary_on(phi, psi, b_qubits);
}

TwoOutcomePovm helstrom_measurement(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  require(rho0.dim() == rho1.dim(), "helstrom: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho0.matrix() - rho1.matrix());
  RealVector d = es.eigenvalues();
  for (long i = 0; i < d.size(); ++i) d(i) = d(i) > 0.0 ? 1.0 : 0.0;
  Matrix e0 = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
  Matrix e1 = Matrix::Identity(rho0.dim(), rho0.dim()) - e0;
  return TwoOutcomePovm{std::move(e0), std::move(e1)};
}

double helstrom_success_probability(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  const TwoOutcomePovm m = helstrom_measurement(rho0, rho1);
  return 0.5 * (m.e0 * rho0.matrix()).trace().real() +
         0.5 * (m.e1 * rho1.matrix()).trace().real();
}

TwoOutcomePovm pgm(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require(rho.dim() == sigma.dim(), "pgm: dimension mismatch");
  const Matrix s = 0.5 * (rho.matrix() + sigma.matrix());
  const Matrix si = pinv_sqrt_psd(s);
  return TwoOutcomePovm{0.5 * si * rho.matrix() * si, 0.5 * si * sigma.matrix() * si};
}

double pgm_error_probability(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const TwoOutcomePovm m = pgm(rho, sigma);
  return 0.5 * (m.e1 * rho.matrix()).trace().real() +
         0.5 * (m.e0 * sigma.matrix()).trace().real();
}

PureState haar_state(int n_qubits, std::uint64_t seed) {
  const long d = dim_of(n_qubits);
  Rng rng(seed);
  Vector v(d);
  for (long i = 0; i < d; ++i) {
    const double re = rng.gauss();
    const double im = rng.gauss();
    v(i) = cxd(re, im);
  }
  v /= v.norm();
  return PureState(n_qubits, std::move(v));
}

Matrix haar_unitary(int n_qubits, std::uint64_t seed) {
  const long d = dim_of(n_qubits);
  Rng rng(seed);
  Matrix g(d, d);
  for (long j = 0; j < d; ++j)
    for (long i = 0; i < d; ++i) g(i, j) = cxd(rng.gauss(), rng.gauss());
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution is exactly Haar.
  for (long j = 0; j < d; ++j) {
    const cxd rj = r(j, j);
    const cxd phase = std::abs(rj) > 0.0 ? rj / std::abs(rj) : cxd(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

DensityMatrix random_density(int n_qubits, std::uint64_t seed) {
  const long d = dim_of(n_qubits);
  Rng rng(seed);
  Matrix g(d, d);
  for (long j = 0; j < d; ++j)
    for (long i = 0; i < d; ++i) g(i, j) = cxd(rng.gauss(), rng.gauss());
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  return DensityMatrix(n_qubits, std::move(w));
}

DensityMatrix random_density_rank(int n_qubits, int rank, std::uint64_t seed) {
  const long d = dim_of(n_qubits);
  require(rank >= 1 && rank <= d, "random_density_rank: invalid rank");
  Rng rng(seed);
  Matrix g(d, rank);
  for (long j = 0; j < rank; ++j)
    for (long i = 0; i < d; ++i) g(i, j) = cxd(rng.gauss(), rng.gauss());
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  return DensityMatrix(n_qubits, std::move(w));
}

std::pair<double, PureState> min_eigenpair(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  Vector ground = es.eigenvectors().col(0);
  return {es.eigenvalues()(0), PureState(h.n_qubits(), std::move(ground))};
}

double hoeffding_half_width(long trials, double delta) {
  require(trials > 0 && delta > 0.0 && delta < 1.0, "hoeffding: invalid parameters");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(trials)));
}

}  // namespace qplab
