#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qplab/state.hpp"

namespace qplab {

// One branch of a measurement: label, exact probability, post-measurement
// state. Post states are only kept for reachable outcomes (p > 1e-12).
struct MeasurementOutcome {
  std::string label;
  double probability = 0.0;
  std::optional<DensityMatrix> post_state;
};

class MeasurementOutcomeDist {
 public:
  explicit MeasurementOutcomeDist(std::vector<MeasurementOutcome> outcomes);

  const std::vector<MeasurementOutcome>& outcomes() const { return outcomes_; }
  double probability_of(const std::string& label) const;

 private:
  std::vector<MeasurementOutcome> outcomes_;
};

// Swap test between two equal-dimension states: control qubit + c-SWAP +
// Hadamards. Pr[label "0"] = 1/2 + Tr(ab)/2. Post states live on the B,C
// registers (control traced out after projection).
MeasurementOutcomeDist swap_test(const DensityMatrix& a, const DensityMatrix& b);
double swap_test_pass_probability(const DensityMatrix& a, const DensityMatrix& b);
double swap_test_pass_probability(const PureState& a, const PureState& b);

// Partial swap test: phi lives on B (x) C, psi on D with qubit(B) = qubit(D);
// the c-SWAP touches only B and D. Pr["accept"] = |alpha|^2 + sum|beta_j|^2/2
// in the decomposition phi = alpha |psi>|G> + sum_j beta_j |psi_j-perp>|G_j>.
MeasurementOutcomeDist partial_swap_test(const PureState& phi, const PureState& psi);
double partial_swap_accept_probability(const PureState& phi, const PureState& psi);

// Two-branch Hadamard test: prepare (|0>|branch0> + |1>|branch1>)/sqrt(2),
// measure the control in the +/- basis and `measured_qubits` in the
// computational basis. Labels are "+|e" and "-|e". The estimator
// X(e) = 2*1{+,e} - 1{e} has E[X(e)] = Re<branch0|P_e|branch1>.
MeasurementOutcomeDist hadamard_overlap_test(const PureState& branch0, const PureState& branch1,
                                             const std::vector<int>& measured_qubits);
double hadamard_x_expectation(const PureState& branch0, const PureState& branch1,
                              const std::vector<int>& measured_qubits, long e);

// Sequential two-outcome projective measurements E_1 ... E_M on rho.
// Exact probability that all accept, the conditional post state, and the
// quantum-union-bound certificates 1 - 4*sum(eps) and sqrt(sum(eps)).
struct SequentialMeasureResult {
  double accept_probability = 0.0;
  std::optional<DensityMatrix> post_state;
  std::vector<double> epsilons;       // eps_i = 1 - Tr(E_i rho), wrt the input rho
  double union_bound_floor = 0.0;     // 1 - 4*sum(eps)
  double disturbance_bound = 0.0;     // sqrt(sum(eps))
  double post_trace_distance = 0.0;   // TD(post, rho), 0 when unreachable
};
SequentialMeasureResult sequential_measure(const DensityMatrix& rho,
                                           const std::vector<HermitianOperator>& projectors);

// Categorical sampling from an exact distribution; deterministic per seed.
std::vector<std::string> sample_trajectory(const MeasurementOutcomeDist& dist, long n_samples,
                                           std::uint64_t seed);

}  // namespace qplab
