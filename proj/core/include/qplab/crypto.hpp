#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qplab/gates.hpp"
#include "qplab/random.hpp"
#include "qplab/state.hpp"

namespace qplab {

// Toy pseudorandom-state scheme: every key selects a seeded random circuit
// over the universal set; outputs are pairwise far (overlap^2 <= 0.7) so the
// promise regions of the L_PRS oracle are well separated.
class PrsScheme {
 public:
  PrsScheme(int key_bits, int m_qubits, int depth, std::uint64_t seed);

  int key_bits() const { return key_bits_; }
  int m_qubits() const { return m_qubits_; }
  std::uint64_t seed() const { return seed_; }
  long key_count() const { return 1L << key_bits_; }
  const PureState& state_for(long key) const;
  const GateCircuit& circuit_for(long key) const;
  double max_pairwise_overlap_sq() const { return max_pairwise_overlap_sq_; }

  nlohmann::json to_json() const;
  static PrsScheme from_json(const nlohmann::json& j);

 private:
  int key_bits_;
  int m_qubits_;
  int depth_;
  std::uint64_t seed_;
  std::vector<GateCircuit> circuits_;
  std::vector<PureState> states_;
  double max_pairwise_overlap_sq_ = 0.0;
};

// L_PRS membership oracle: exhaustive key search with the 0.7 overlap
// threshold; challenges inside the don't-care band get a sampled swap-test
// verdict against the best key.
bool prs_oracle(const PrsScheme& scheme, const PureState& challenge, Rng& rng);

struct PrsBreakTrial {
  std::uint64_t seed = 0;
  bool real_case = false;  // true: phi_k for random k, false: Haar sample
  bool oracle_verdict = false;
  double max_overlap_sq = 0.0;
};

struct PrsBreakResult {
  std::vector<PrsBreakTrial> trials;
  double advantage = 0.0;  // empirical Pr[1|real] - Pr[1|haar]
};

PrsBreakResult prs_oracle_break(const PrsScheme& scheme, long trials, std::uint64_t seed);

// Toy one-way state generator: same keyed-circuit family; Ver is the swap
// test against StateGen(k').
struct OwsgBreakTrial {
  std::uint64_t seed = 0;
  long true_key = 0;
  long recovered_key = 0;
  double ver_acceptance = 0.0;  // exact swap-test acceptance of the recovery
  bool success = false;         // acceptance >= 2/3
};

struct OwsgBreakResult {
  std::vector<OwsgBreakTrial> trials;
  double success_rate = 0.0;
};

// Bitwise key recovery through the prefix decision oracle; oracle queries
// estimate Ver acceptance from `shots` sampled swap tests per candidate.
OwsgBreakResult owsg_break(const PrsScheme& scheme, long trials, long shots, std::uint64_t seed);
long owsg_recover_key(const PrsScheme& scheme, long true_key, long shots, Rng& rng);

// ---- EPR-based semi-canonical auxiliary-input commitment ----
//
// Auxiliary input |psi> = (I (x) T)|EPR_lambda>; commit(0) fills each C_iR_i
// with |EPR>, commit(1) with |psi>. Reveal(0) undoes Q and checks zeros;
// reveal(1) swap-tests each copy against a fresh auxiliary state.
class CommitmentSession {
 public:
  CommitmentSession(int lambda, int k_copies, Matrix t_unitary);

  int lambda() const { return lambda_; }
  int k_copies() const { return k_copies_; }
  const Matrix& t_unitary() const { return t_; }

  PureState epr_pair() const;        // |EPR_lambda> on C_j R_j (2 lambda qubits)
  PureState auxiliary_state() const; // (I (x) T)|EPR>

  enum class Phase { kSetup, kCommitted, kRevealed };
  Phase phase() const { return phase_; }
  int committed_bit() const;

  // Honest commit: stores the per-copy committed state and returns it.
  PureState commit(int bit);
  // Reveal with possibly adversary-modified per-copy states; exact
  // acceptance probability of the receiver check for bit b'.
  double reveal(int revealed_bit, const std::vector<PureState>& copies);
  double honest_reveal_acceptance(int bit);

  // TD between the receiver's reduced states after commit(0) and commit(1);
  // perfect hiding means exactly 0.
  double hiding_check() const;

 private:
  int lambda_;
  int k_copies_;
  Matrix t_;
  Phase phase_ = Phase::kSetup;
  int bit_ = -1;
  std::optional<PureState> committed_copy_;
};

// |HALF> = 2^-((lambda-1)/2) sum_i |i||0>|i||0>: purification of the uniform
// state on a half-dimensional subspace; the hard no-case of the hiding game.
PureState half_state(int lambda);

// Honest-binding game values. The adversary acts on R (x) Z only.
//   v01: flip commit(0) to an accepted reveal(1) (swap-projector norm)
//   v10: flip commit(1) to an accepted reveal(0) (EPR-projector norm)
struct BindingGameValues {
  double v01 = 0.0;
  double v10 = 0.0;
};
BindingGameValues binding_game_values(const CommitmentSession& session, const Matrix& adversary_rz,
                                      const PureState& advice);

// b=0-reveal norm when each C_iR_i holds `committed_copy` instead of the
// auxiliary state; with HALF-type copies and R-only adversaries the squared
// value is capped by 3/4 per copy.
double b0_reveal_value(const CommitmentSession& session, const PureState& committed_copy,
                       const Matrix& adversary_rz, const PureState& advice);

}  // namespace qplab
