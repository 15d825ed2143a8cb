#pragma once

#include "qplab/hamiltonian.hpp"
#include "qplab/lhverify.hpp"
#include "qplab/qor.hpp"
#include "qplab/stod.hpp"

namespace qplab {

// Verifier circuits for the clock reduction. Accepting circuits end with an
// X on the answer qubit (completeness 1 for every witness); rejecting ones
// never touch it (soundness 0).
GateCircuit accepting_verifier(const ClockLayout& layout, std::uint64_t seed);
GateCircuit rejecting_verifier(const ClockLayout& layout, std::uint64_t seed);

struct CookLevinYes {
  CookLevinResult reduction;
  PureState psi;           // per-copy input
  PureState phi;           // witness
  PureState history;       // the low-energy witness state
  double history_energy;   // <eta|H|eta>, at most a
  double lambda_min;       // exact ground energy
};

struct CookLevinNo {
  CookLevinResult reduction;
  PureState psi;
  double lambda_min;  // exact; becomes the instance's b
};

CookLevinYes gen_cooklevin_yes(const ClockLayout& layout, long penalty, std::uint64_t seed);
CookLevinNo gen_cooklevin_no(const ClockLayout& layout, long penalty, std::uint64_t seed);

struct CookLevinMixedYes {
  CookLevinResult reduction;
  DensityMatrix rho;       // per-copy input, low rank
  PureState phi;
  Matrix witness_circuit;  // the semi-uniform C
  double alpha;            // 1/sqrt(m+1)
  double expected_energy;  // E_psi <eta|H_psi|eta>, at most a
};

CookLevinMixedYes gen_cooklevin_mixed_yes(const ClockLayout& layout, int rank, long penalty,
                                          std::uint64_t seed);

struct QorCase {
  QorInstance instance;
  PureState rho;            // register-A input (pure at desk scale)
  double best_sigma_value;  // max_sigma Tr(Lambda rho (x) sigma)
};

// Case (i): some sigma reaches at least eta; case (ii): all sigma at most delta.
QorCase gen_qor_yes(int n_a, int m, double eta, std::uint64_t seed);
QorCase gen_qor_no(int n_a, int m, double delta, std::uint64_t seed);

// Verifier accepting exactly one hidden witness string with certainty,
// built from X conjugation and a TOFFOLI cascade onto the answer qubit.
struct StodInstance {
  ClassicalWitnessVerifier verifier;
  std::string target_witness;
  PureState input;
};
StodInstance gen_stod_instance(int witness_bits, std::uint64_t seed);

}  // namespace qplab
