#pragma once

#include "qplab/report.hpp"
#include "qplab/state.hpp"

namespace qplab {

// Parallel amplification of a one-round verifier with completeness a and
// soundness a - 1/p: run s independent rounds on fresh inputs (witness
// blocks supplied by the prover, possibly entangled) and accept when the
// fraction of 1-answers reaches (2a - 1/p)/2.
class AmplifiedVerifier {
 public:
  // `round_accept` acts on one round's [input (low) | witness (high)] block;
  // `round_input` is the fresh per-round input state.
  AmplifiedVerifier(HermitianOperator round_accept, DensityMatrix round_input, int witness_qubits,
                    double a, double inv_p, int s_rounds);

  int s_rounds() const { return s_rounds_; }
  double threshold_fraction() const { return 0.5 * (2.0 * a_ - inv_p_); }
  long min_accept_count() const;

  // Per-round acceptance probability under a product witness.
  double round_probability(const DensityMatrix& witness) const;

  // Exact acceptance when every round gets an independent copy of `witness`.
  double product_acceptance(const DensityMatrix& witness) const;

  // Exact acceptance for a joint (possibly entangled) witness across all
  // rounds, by enumerating the 2^s outcome paths of the measurement chain.
  double joint_acceptance(const DensityMatrix& joint_witness) const;

  // Binomial tail of the dominating i.i.d. Bernoulli(a - 1/p) chain.
  double iid_no_case_bound() const;

  // Monte-Carlo acceptance frequency under a product witness.
  VerdictReport sampled_acceptance(const DensityMatrix& witness, long trials,
                                   std::uint64_t seed) const;

 private:
  HermitianOperator round_accept_;
  DensityMatrix round_input_;
  int witness_qubits_;
  double a_;
  double inv_p_;
  int s_rounds_;
};

// Exact binomial upper tail Pr[Bin(n, q) >= k].
double binomial_tail(long n, double q, long k);

}  // namespace qplab
