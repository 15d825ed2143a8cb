#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qplab/gates.hpp"
#include "qplab/report.hpp"
#include "qplab/state.hpp"

namespace qplab {

// Verifier taking a classical witness string: the circuit acts on
// [witness bits | input copies | ancilla], answer = first ancilla qubit.
struct ClassicalWitnessVerifier {
  GateCircuit circuit;
  int n_witness_bits = 1;
  int n_input = 1;
  int t_copies = 1;
  int n_ancilla = 1;

  int total_qubits() const {
    return n_witness_bits + n_input * t_copies + n_ancilla;
  }
  // Exact Pr[answer = 1] on witness w and input psi^(x)t.
  double acceptance(const std::string& witness_bits, const PureState& input) const;
  // Exhaustive maximum over suffix extensions of a prefix.
  double best_suffix_acceptance(const std::string& prefix, const PureState& input) const;
};

// Prefix-language decision oracle realized by exhaustive suffix maximization:
// yes when max_y P(x||y) >= a - |x| * slack / (2n), no below the (|x|+1)
// threshold, and an adversarial random bit inside the don't-care band.
struct StodResult {
  std::string witness;
  double acceptance = 0.0;          // exact Pr[V(witness) = 1]
  double floor = 0.0;               // a - slack
  std::vector<int> good_trace;      // per step: maintained prefix in Good?
  long dont_care_hits = 0;          // fuzzed oracle answers
};

// With `require_yes_promise` the empty prefix is checked against the
// completeness floor a (error on violation); without it a no-instance walk
// still terminates with some string, every oracle answer being don't-care.
StodResult search_to_decision(const ClassicalWitnessVerifier& verifier, const PureState& input,
                              double a, double slack, std::uint64_t fuzz_seed,
                              bool require_yes_promise = true);

// Membership of a prefix in the Good set (brute force over suffixes).
bool stod_in_good_set(const ClassicalWitnessVerifier& verifier, const PureState& input,
                      const std::string& prefix, double a, double slack);

// Binary-search identification of a state within an ordered candidate set by
// repeated membership measurements with rewinding. Candidates must be
// orthonormal and sorted in the canonical amplitude order.
struct IdentifyResult {
  int index = -1;
  double success_probability = 0.0;  // exact probability every step branches correctly
  double union_bound_floor = 0.0;    // 1 - 4 * ceil(log2 |set|) * max_eps
  long queries = 0;
};

bool candidate_order_less(const PureState& a, const PureState& b);
void canonical_sort(std::vector<PureState>& candidates);

IdentifyResult identify_state(const PureState& psi, const std::vector<PureState>& candidates,
                              std::uint64_t seed);

}  // namespace qplab
