#include "qplab/amplify.hpp"

#include <cmath>

#include "qplab/metrics.hpp"
#include "qplab/random.hpp"

namespace qplab {

double binomial_tail(long n, double q, long k) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  // Exact accumulation; coefficients stay well inside double range at desk scale.
  double coeff = 1.0;  // C(n, 0)
  double tail = 0.0;
  for (long i = 0; i <= n; ++i) {
    if (i >= k) tail += coeff * std::pow(q, i) * std::pow(1.0 - q, n - i);
    coeff = coeff * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  return std::min(1.0, tail);
}

AmplifiedVerifier::AmplifiedVerifier(HermitianOperator round_accept, DensityMatrix round_input,
                                     int witness_qubits, double a, double inv_p, int s_rounds)
    : round_accept_(std::move(round_accept)),
      round_input_(std::move(round_input)),
      witness_qubits_(witness_qubits),
      a_(a),
      inv_p_(inv_p),
      s_rounds_(s_rounds) {
  require(s_rounds_ >= 1, "need at least one round");
  require(witness_qubits_ >= 1, "need a witness register");
  require(a > 0.0 && a <= 1.0 && inv_p_ > 0.0 && a - inv_p_ >= 0.0, "bad (a, 1/p) pair");
  require(round_accept_.n_qubits() == round_input_.n_qubits() + witness_qubits_,
          "round operator must cover input plus witness");
  require(round_accept_.is_contraction(), "round accept operator must satisfy 0 <= E <= I");
}

long AmplifiedVerifier::min_accept_count() const {
  const double target = threshold_fraction() * static_cast<double>(s_rounds_);
  return static_cast<long>(std::ceil(target - 1e-9));
}

double AmplifiedVerifier::round_probability(const DensityMatrix& witness) const {
  require(witness.n_qubits() == witness_qubits_, "witness width mismatch");
  const DensityMatrix block = tensor(round_input_, witness);
  return (round_accept_.matrix() * block.matrix()).trace().real();
}

double AmplifiedVerifier::product_acceptance(const DensityMatrix& witness) const {
  return binomial_tail(s_rounds_, round_probability(witness), min_accept_count());
}

double AmplifiedVerifier::joint_acceptance(const DensityMatrix& joint_witness) const {
  require(joint_witness.n_qubits() == witness_qubits_ * s_rounds_,
          "joint witness must cover all rounds");
  const int n_in = round_input_.n_qubits();
  const int n_work = witness_qubits_ * s_rounds_ + n_in;
  dim_of(n_work);

  // Depth-first over outcome strings; the fresh input is attached at the top
  // of the working register for the round being measured, then traced out.
  struct Branch {
    Matrix state;  // unnormalized density on the joint witness register
    int round;
    long accepted;
  };
  double accept = 0.0;
  std::vector<Branch> stack{{joint_witness.matrix(), 0, 0}};
  const long need = min_accept_count();
  while (!stack.empty()) {
    Branch br = std::move(stack.back());
    stack.pop_back();
    if (br.round == s_rounds_) {
      if (br.accepted >= need) accept += br.state.trace().real();
      continue;
    }
    const double weight = br.state.trace().real();
    if (weight < 1e-16) continue;
    // Attach the fresh input on the high qubits.
    Matrix work = kron_low_high(br.state, round_input_.matrix());
    std::vector<int> op_qubits;
    for (int q = 0; q < n_in; ++q) op_qubits.push_back(witness_qubits_ * s_rounds_ + q);
    for (int q = 0; q < witness_qubits_; ++q) op_qubits.push_back(br.round * witness_qubits_ + q);
    const Matrix e = embed(round_accept_.matrix(), op_qubits, n_work);
    // Binary POVM {E, I-E} realized through its square-root measurement ops.
    const Matrix sqrt_e = sqrt_psd(e);
    const Matrix sqrt_ne = sqrt_psd(Matrix::Identity(e.rows(), e.cols()) - e);
    const Matrix acc_state = sqrt_e * work * sqrt_e;
    const Matrix rej_state = sqrt_ne * work * sqrt_ne;
    // Trace out the input block (it sits on the high qubits).
    Matrix acc_red = Matrix::Zero(br.state.rows(), br.state.cols());
    Matrix rej_red = Matrix::Zero(br.state.rows(), br.state.cols());
    const long dw = br.state.rows();
    const long di = 1L << n_in;
    for (long blk = 0; blk < di; ++blk) {
      acc_red += acc_state.block(blk * dw, blk * dw, dw, dw);
      rej_red += rej_state.block(blk * dw, blk * dw, dw, dw);
    }
    stack.push_back(Branch{std::move(acc_red), br.round + 1, br.accepted + 1});
    stack.push_back(Branch{std::move(rej_red), br.round + 1, br.accepted});
  }
  return accept;
}

double AmplifiedVerifier::iid_no_case_bound() const {
  return binomial_tail(s_rounds_, a_ - inv_p_, min_accept_count());
}

VerdictReport AmplifiedVerifier::sampled_acceptance(const DensityMatrix& witness, long trials,
                                                    std::uint64_t seed) const {
  const double q = round_probability(witness);
  Rng rng(seed);
  long accepted = 0;
  for (long t = 0; t < trials; ++t) {
    long ones = 0;
    for (int r = 0; r < s_rounds_; ++r)
      if (rng.uniform() < q) ++ones;
    if (ones >= min_accept_count()) ++accepted;
  }
  VerdictReport report;
  report.trials = trials;
  report.seed = seed;
  report.p_hat = static_cast<double>(accepted) / static_cast<double>(trials);
  report.half_width = hoeffding_half_width(trials, 1e-3);
  report.stats["round_probability"] = q;
  report.accept = *report.p_hat >= threshold_fraction();
  return report;
}

}  // namespace qplab
