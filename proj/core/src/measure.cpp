#include "qplab/measure.hpp"

#include <cmath>

#include "qplab/metrics.hpp"
#include "qplab/random.hpp"

namespace qplab {

namespace {

Matrix hadamard_gate() {
  Matrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

// Permutation x -> x with the bit fields at rega/regb exchanged when the
// control bit is set.
long cswap_image(long x, int control, const std::vector<int>& rega, const std::vector<int>& regb) {
  if (((x >> control) & 1) == 0) return x;
  long y = x;
  for (std::size_t i = 0; i < rega.size(); ++i) {
    const long ba = (x >> rega[i]) & 1;
    const long bb = (x >> regb[i]) & 1;
    if (ba != bb) {
      y ^= 1L << rega[i];
      y ^= 1L << regb[i];
    }
  }
  return y;
}

Vector apply_cswap(const Vector& v, int control, const std::vector<int>& rega,
                   const std::vector<int>& regb) {
  Vector out(v.size());
  for (long x = 0; x < v.size(); ++x) out(cswap_image(x, control, rega, regb)) = v(x);
  return out;
}

Matrix apply_cswap(const Matrix& m, int control, const std::vector<int>& rega,
                   const std::vector<int>& regb) {
  Matrix out(m.rows(), m.cols());
  for (long r = 0; r < m.rows(); ++r) {
    const long rr = cswap_image(r, control, rega, regb);
    for (long c = 0; c < m.cols(); ++c) out(rr, cswap_image(c, control, rega, regb)) = m(r, c);
  }
  return out;
}

Matrix hadamard_on(const Matrix& m, int qubit) {
  const Matrix h = embed(hadamard_gate(), {qubit}, qubits_of_dim(m.rows()));
  return h * m * h;
}

}  // namespace

MeasurementOutcomeDist::MeasurementOutcomeDist(std::vector<MeasurementOutcome> outcomes)
    : outcomes_(std::move(outcomes)) {
  double total = 0.0;
  for (const MeasurementOutcome& o : outcomes_) {
    require(o.probability >= -kNormTol, "negative outcome probability");
    total += o.probability;
    if (o.probability > kUnreachableProb)
      require(o.post_state.has_value(), "reachable outcome lacks a post state");
  }
  require(std::abs(total - 1.0) <= kNormTol, "outcome probabilities do not sum to 1");
}

double MeasurementOutcomeDist::probability_of(const std::string& label) const {
  for (const MeasurementOutcome& o : outcomes_)
    if (o.label == label) return o.probability;
  throw PreconditionError("unknown outcome label: " + label);
}

MeasurementOutcomeDist swap_test(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.n_qubits() == b.n_qubits(), "swap_test: dimension mismatch");
  const int nb = a.n_qubits();
  const int n = 1 + 2 * nb;
  // control = qubit 0, B = 1..nb, C = nb+1..2nb
  std::vector<int> regb, regc;
  for (int q = 1; q <= nb; ++q) regb.push_back(q);
  for (int q = nb + 1; q <= 2 * nb; ++q) regc.push_back(q);

  Matrix ctrl = Matrix::Zero(2, 2);
  ctrl(0, 0) = 1.0;
  Matrix state = kron_low_high(ctrl, kron_low_high(a.matrix(), b.matrix()));
  state = hadamard_on(state, 0);
  state = apply_cswap(state, 0, regb, regc);
  state = hadamard_on(state, 0);

  std::vector<int> keep;  // everything but the control
  for (int q = 1; q < n; ++q) keep.push_back(q);

  std::vector<MeasurementOutcome> outs;
  for (int bit = 0; bit <= 1; ++bit) {
    Matrix proj = Matrix::Zero(2, 2);
    proj(bit, bit) = 1.0;
    const Matrix p = embed(proj, {0}, n);
    Matrix branch = p * state * p;
    const double prob = branch.trace().real();
    MeasurementOutcome o;
    o.label = bit == 0 ? "0" : "1";
    o.probability = prob;
    if (prob > kUnreachableProb) {
      branch /= prob;
      o.post_state = partial_trace(DensityMatrix(n, std::move(branch)), keep);
    }
    outs.push_back(std::move(o));
  }
  return MeasurementOutcomeDist(std::move(outs));
}

double swap_test_pass_probability(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.n_qubits() == b.n_qubits(), "swap_test: dimension mismatch");
  return 0.5 + 0.5 * (a.matrix() * b.matrix()).trace().real();
}

double swap_test_pass_probability(const PureState& a, const PureState& b) {
  const double ov = std::abs(a.overlap(b));
  return 0.5 + 0.5 * ov * ov;
}

MeasurementOutcomeDist partial_swap_test(const PureState& phi, const PureState& psi) {
  const int nbc = phi.n_qubits();
  const int nd = psi.n_qubits();
  require(nd <= nbc, "partial_swap_test: psi register wider than phi");
  const int n = 1 + nbc + nd;
  std::vector<int> regb, regd;
  for (int q = 1; q <= nd; ++q) regb.push_back(q);          // B = first nd qubits of phi
  for (int q = 1 + nbc; q < n; ++q) regd.push_back(q);      // D = psi register

  Vector v = tensor(tensor(PureState::zero(1), phi), psi).amplitudes();
  v = apply_on_qubits(hadamard_gate(), {0}, v);
  v = apply_cswap(v, 0, regb, regd);
  v = apply_on_qubits(hadamard_gate(), {0}, v);

  std::vector<int> keep;
  for (int q = 1; q < n; ++q) keep.push_back(q);

  std::vector<MeasurementOutcome> outs;
  for (int bit = 0; bit <= 1; ++bit) {
    Vector branch = Vector::Zero(v.size());
    for (long x = 0; x < v.size(); ++x)
      if (((x >> 0) & 1) == bit) branch(x) = v(x);
    const double prob = branch.squaredNorm();
    MeasurementOutcome o;
    o.label = bit == 0 ? "accept" : "reject";
    o.probability = prob;
    if (prob > kUnreachableProb) {
      branch /= std::sqrt(prob);
      o.post_state = partial_trace(PureState(n, std::move(branch)), keep);
    }
    outs.push_back(std::move(o));
  }
  return MeasurementOutcomeDist(std::move(outs));
}

double partial_swap_accept_probability(const PureState& phi, const PureState& psi) {
  return partial_swap_test(phi, psi).probability_of("accept");
}

MeasurementOutcomeDist hadamard_overlap_test(const PureState& branch0, const PureState& branch1,
                                             const std::vector<int>& measured_qubits) {
  require(branch0.n_qubits() == branch1.n_qubits(), "hadamard test: register mismatch");
  const int n = branch0.n_qubits();
  for (int q : measured_qubits) require(q >= 0 && q < n, "measured qubit out of range");
  const long ne = 1L << measured_qubits.size();
  const Vector sum = branch0.amplitudes() + branch1.amplitudes();
  const Vector dif = branch0.amplitudes() - branch1.amplitudes();

  std::vector<MeasurementOutcome> outs;
  for (int s = 0; s < 2; ++s) {
    const Vector& base = s == 0 ? sum : dif;
    for (long e = 0; e < ne; ++e) {
      Vector branch = Vector::Zero(base.size());
      for (long x = 0; x < base.size(); ++x) {
        long sub = 0;
        for (std::size_t i = 0; i < measured_qubits.size(); ++i)
          sub |= ((x >> measured_qubits[i]) & 1) << i;
        if (sub == e) branch(x) = base(x);
      }
      const double prob = 0.25 * branch.squaredNorm();
      MeasurementOutcome o;
      o.label = (s == 0 ? std::string("+|") : std::string("-|")) + std::to_string(e);
      o.probability = prob;
      if (prob > kUnreachableProb) {
        branch /= branch.norm();
        o.post_state = DensityMatrix::from_pure(PureState(n, std::move(branch)));
      }
      outs.push_back(std::move(o));
    }
  }
  return MeasurementOutcomeDist(std::move(outs));
}

double hadamard_x_expectation(const PureState& branch0, const PureState& branch1,
                              const std::vector<int>& measured_qubits, long e) {
  require(branch0.n_qubits() == branch1.n_qubits(), "hadamard test: register mismatch");
  // E[2Z - Y] = Re <branch0| P_e |branch1>
  cxd acc = 0.0;
  const Vector& v0 = branch0.amplitudes();
  const Vector& v1 = branch1.amplitudes();
  for (long x = 0; x < v0.size(); ++x) {
    long sub = 0;
    for (std::size_t i = 0; i < measured_qubits.size(); ++i)
      sub |= ((x >> measured_qubits[i]) & 1) << i;
    if (sub == e) acc += std::conj(v0(x)) * v1(x);
  }
  return acc.real();
}

SequentialMeasureResult sequential_measure(const DensityMatrix& rho,
                                           const std::vector<HermitianOperator>& projectors) {
  SequentialMeasureResult res;
  Matrix chain = rho.matrix();
  double sum_eps = 0.0;
  for (const HermitianOperator& e : projectors) {
    require(e.dim() == rho.dim(), "sequential_measure: dimension mismatch");
    require(e.is_projector(), "sequential_measure: non-projector test operator");
    const double eps = 1.0 - (e.matrix() * rho.matrix()).trace().real();
    res.epsilons.push_back(eps);
    sum_eps += eps;
    chain = e.matrix() * chain * e.matrix();
  }
  res.accept_probability = chain.trace().real();
  res.union_bound_floor = 1.0 - 4.0 * sum_eps;
  res.disturbance_bound = std::sqrt(std::max(0.0, sum_eps));
  if (res.accept_probability > kUnreachableProb) {
    chain /= res.accept_probability;
    DensityMatrix post(rho.n_qubits(), std::move(chain));
    res.post_trace_distance = trace_distance(post, rho);
    res.post_state = std::move(post);
  }
  return res;
}

std::vector<std::string> sample_trajectory(const MeasurementOutcomeDist& dist, long n_samples,
                                           std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> weights;
  for (const MeasurementOutcome& o : dist.outcomes()) weights.push_back(std::max(0.0, o.probability));
  std::vector<std::string> out;
  out.reserve(n_samples);
  for (long i = 0; i < n_samples; ++i)
    out.push_back(dist.outcomes()[rng.categorical(weights)].label);
  return out;
}

}  // namespace qplab
