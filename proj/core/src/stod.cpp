#include "qplab/stod.hpp"

#include <algorithm>
#include <cmath>

#include "qplab/random.hpp"

namespace qplab {

double ClassicalWitnessVerifier::acceptance(const std::string& witness_bits,
                                            const PureState& input) const {
  require(static_cast<int>(witness_bits.size()) == n_witness_bits, "witness length mismatch");
  require(input.n_qubits() == n_input, "input width mismatch");
  require(circuit.n_qubits() == total_qubits(), "verifier circuit width mismatch");
  long w_index = 0;
  for (int i = 0; i < n_witness_bits; ++i) {
    require(witness_bits[i] == '0' || witness_bits[i] == '1', "witness must be a bit string");
    if (witness_bits[i] == '1') w_index |= 1L << i;
  }
  PureState state = tensor(tensor(PureState::basis(n_witness_bits, w_index),
                                  tensor_power(input, t_copies)),
                           PureState::zero(n_ancilla));
  const Vector v = circuit.apply(state).amplitudes();
  const int ans = n_witness_bits + n_input * t_copies;
  double p1 = 0.0;
  for (long x = 0; x < v.size(); ++x)
    if ((x >> ans) & 1) p1 += std::norm(v(x));
  return p1;
}

double ClassicalWitnessVerifier::best_suffix_acceptance(const std::string& prefix,
                                                        const PureState& input) const {
  const int free_bits = n_witness_bits - static_cast<int>(prefix.size());
  require(free_bits >= 0, "prefix longer than the witness");
  double best = 0.0;
  for (long y = 0; y < (1L << free_bits); ++y) {
    std::string w = prefix;
    for (int i = 0; i < free_bits; ++i) w.push_back(((y >> i) & 1) ? '1' : '0');
    best = std::max(best, acceptance(w, input));
  }
  return best;
}

bool stod_in_good_set(const ClassicalWitnessVerifier& verifier, const PureState& input,
                      const std::string& prefix, double a, double slack) {
  const double n = static_cast<double>(verifier.n_witness_bits);
  const double threshold = a - (static_cast<double>(prefix.size()) + 1.0) * slack / (2.0 * n);
  return verifier.best_suffix_acceptance(prefix, input) >= threshold;
}

StodResult search_to_decision(const ClassicalWitnessVerifier& verifier, const PureState& input,
                              double a, double slack, std::uint64_t fuzz_seed,
                              bool require_yes_promise) {
  require(slack > 0.0 && slack < a, "slack must lie in (0, a)");
  const int n = verifier.n_witness_bits;
  Rng fuzz(fuzz_seed);
  StodResult res;
  res.floor = a - slack;
  if (require_yes_promise && verifier.best_suffix_acceptance("", input) < a - 1e-9)
    throw PromiseViolation("yes-promise violated: no witness reaches completeness a");

  std::string w;
  for (int i = 1; i <= n; ++i) {
    const std::string test = w + '0';
    const double best = verifier.best_suffix_acceptance(test, input);
    const double yes_line = a - static_cast<double>(i) * slack / (2.0 * n);
    const double no_line = a - (static_cast<double>(i) + 1.0) * slack / (2.0 * n);
    bool oracle_yes;
    if (best >= yes_line) {
      oracle_yes = true;
    } else if (best < no_line) {
      oracle_yes = false;
    } else {
      // Don't-care band: the oracle may answer arbitrarily.
      oracle_yes = fuzz.uniform() < 0.5;
      ++res.dont_care_hits;
    }
    w = oracle_yes ? test : w + '1';
    res.good_trace.push_back(stod_in_good_set(verifier, input, w, a, slack) ? 1 : 0);
  }
  res.witness = w;
  res.acceptance = verifier.acceptance(w, input);
  return res;
}

bool candidate_order_less(const PureState& a, const PureState& b) {
  require(a.dim() == b.dim(), "candidate dimension mismatch");
  for (long i = 0; i < a.dim(); ++i) {
    const cxd x = a.amplitudes()(i), y = b.amplitudes()(i);
    if (std::abs(x.real() - y.real()) > 1e-12) return x.real() < y.real();
    if (std::abs(x.imag() - y.imag()) > 1e-12) return x.imag() < y.imag();
  }
  return false;
}

void canonical_sort(std::vector<PureState>& candidates) {
  std::sort(candidates.begin(), candidates.end(), candidate_order_less);
}

IdentifyResult identify_state(const PureState& psi, const std::vector<PureState>& candidates,
                              std::uint64_t seed) {
  require(!candidates.empty(), "empty candidate set");
  const int count = static_cast<int>(candidates.size());
  for (int i = 0; i + 1 < count; ++i)
    require(!candidate_order_less(candidates[i + 1], candidates[i]), "candidate set not sorted");
  for (int i = 0; i < count; ++i) {
    require(candidates[i].dim() == psi.dim(), "candidate dimension mismatch");
    for (int j = i + 1; j < count; ++j)
      require(std::abs(candidates[i].overlap(candidates[j])) <= 1e-8,
              "candidates must be orthonormal membership tests");
  }

  IdentifyResult res;
  if (count == 1) {
    res.index = 0;
    res.success_probability = 1.0;
    res.union_bound_floor = 1.0;
    return res;
  }

  int true_index = 0;
  double best = -1.0;
  for (int i = 0; i < count; ++i) {
    const double ov = std::abs(candidates[i].overlap(psi));
    if (ov > best) {
      best = ov;
      true_index = i;
    }
  }

  const auto upper_projector = [&](int mid, int end) {
    // Membership projector of the upper half {mid+1, ..., end}.
    Matrix basis(psi.dim(), end - mid);
    for (int i = mid + 1; i <= end; ++i) basis.col(i - mid - 1) = candidates[i].amplitudes();
    return Matrix(basis * basis.adjoint());
  };

  // Correct-path chain: success probability that every sequential membership
  // measurement along the true binary-search path branches correctly.
  {
    Vector chain = psi.amplitudes();
    int start = 0, end = count - 1;
    double max_eps = 0.0;
    while (start < end) {
      const int mid = (start + end - 1) / 2;
      const Matrix proj = upper_projector(mid, end);
      ++res.queries;
      const bool true_in_upper = true_index > mid;
      const Matrix correct_proj =
          true_in_upper ? proj : Matrix(Matrix::Identity(psi.dim(), psi.dim()) - proj);
      const double eps =
          1.0 - (psi.amplitudes().adjoint() * correct_proj * psi.amplitudes())(0).real();
      max_eps = std::max(max_eps, eps);
      chain = correct_proj * chain;
      if (true_in_upper) start = mid + 1; else end = mid;
    }
    res.success_probability = chain.squaredNorm();
    const double q = std::ceil(std::log2(static_cast<double>(count)));
    res.union_bound_floor = 1.0 - 4.0 * q * max_eps;
  }

  // Sampled run: measure, branch, continue on the post-measurement state.
  {
    Rng rng(seed);
    Vector sampled = psi.amplitudes();
    int start = 0, end = count - 1;
    while (start < end) {
      const int mid = (start + end - 1) / 2;
      const Matrix proj = upper_projector(mid, end);
      Vector upper = proj * sampled;
      const double p_upper = upper.squaredNorm();
      if (rng.uniform() < p_upper) {
        sampled = upper / std::sqrt(std::max(p_upper, 1e-300));
        start = mid + 1;
      } else {
        Vector lower = sampled - upper;
        sampled = lower / std::sqrt(std::max(1.0 - p_upper, 1e-300));
        end = mid;
      }
    }
    res.index = start;
  }
  return res;
}

}  // namespace qplab
