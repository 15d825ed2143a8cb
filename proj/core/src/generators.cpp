#include "qplab/generators.hpp"

#include <cmath>

#include "qplab/metrics.hpp"
#include "qplab/random.hpp"

namespace qplab {

GateCircuit accepting_verifier(const ClockLayout& layout, std::uint64_t seed) {
  const int m = layout.m_gates;
  const int n_sys = layout.clock_lo();
  std::vector<Gate> gates;
  // Two-qubit gates only: keeps every propagation term at most 5-local.
  const std::vector<GateKind> kinds{GateKind::H, GateKind::T, GateKind::CNOT, GateKind::X,
                                    GateKind::SWAP};
  if (m > 1) {
    GateCircuit prefix = random_circuit(n_sys, m - 1, seed, {layout.answer_qubit()}, kinds);
    gates = prefix.gates();
  }
  gates.push_back(Gate{GateKind::X, {layout.answer_qubit()}});
  return GateCircuit(n_sys, std::move(gates));
}

GateCircuit rejecting_verifier(const ClockLayout& layout, std::uint64_t seed) {
  const std::vector<GateKind> kinds{GateKind::H, GateKind::T, GateKind::CNOT, GateKind::X,
                                    GateKind::SWAP};
  return random_circuit(layout.clock_lo(), layout.m_gates, seed, {layout.answer_qubit()}, kinds);
}

CookLevinYes gen_cooklevin_yes(const ClockLayout& layout, long penalty, std::uint64_t seed) {
  CookLevinYes out{cook_levin(accepting_verifier(layout, seed), layout, penalty,
                              InstanceVariant::kPure),
                   haar_state(layout.n_input, mix_seed(seed, 1)),
                   haar_state(layout.n_witness, mix_seed(seed, 2)),
                   PureState::zero(1), 0.0, 0.0};
  out.history = history_state(out.reduction.verifier, layout, out.psi, out.phi);
  const HermitianOperator h =
      assemble(out.reduction.instance, tensor_power(out.psi, layout.c_copies));
  out.history_energy =
      (out.history.amplitudes().adjoint() * h.matrix() * out.history.amplitudes())(0).real();
  out.lambda_min = min_eigenpair(h).first;
  if (out.history_energy > out.reduction.instance.a + 1e-12)
    throw PromiseViolation("generated yes instance misses the energy promise");
  return out;
}

CookLevinNo gen_cooklevin_no(const ClockLayout& layout, long penalty, std::uint64_t seed) {
  CookLevinNo out{cook_levin(rejecting_verifier(layout, seed), layout, penalty,
                             InstanceVariant::kPure),
                  haar_state(layout.n_input, mix_seed(seed, 3)), 0.0};
  const HermitianOperator h =
      assemble(out.reduction.instance, tensor_power(out.psi, layout.c_copies));
  out.lambda_min = min_eigenpair(h).first;
  out.reduction.instance.b = out.lambda_min;
  try {
    out.reduction.instance.validate();
  } catch (const PreconditionError& e) {
    throw PromiseViolation(std::string("generated no instance: ") + e.what());
  }
  return out;
}

CookLevinMixedYes gen_cooklevin_mixed_yes(const ClockLayout& layout, int rank, long penalty,
                                          std::uint64_t seed) {
  const GateCircuit verifier = accepting_verifier(layout, seed);
  CookLevinResult reduction = cook_levin(verifier, layout, penalty, InstanceVariant::kMixed);
  CookLevinMixedYes out{std::move(reduction),
                        random_density_rank(layout.n_input, rank, mix_seed(seed, 4)),
                        haar_state(layout.n_witness, mix_seed(seed, 5)),
                        history_witness_unitary(verifier, layout),
                        1.0 / std::sqrt(static_cast<double>(layout.m_gates + 1)), 0.0};
  const PureState phi = out.phi;
  const Matrix& circuit = out.witness_circuit;
  const HamiltonianInstance& inst = out.reduction.instance;
  out.expected_energy = lhwm_expected_energy(
      inst, out.rho, layout.c_copies,
      [&](const PureState& psi_full) { return lhwm_build_witness(inst, circuit, psi_full, phi); });
  if (out.expected_energy > inst.a + 1e-12)
    throw PromiseViolation("generated mixed yes instance misses the energy promise");
  return out;
}

namespace {

// Append `vec` to `basis` after Gram-Schmidt; returns false if it vanishes.
bool orthonormal_append(std::vector<Vector>& basis, Vector vec) {
  for (const Vector& b : basis) vec -= b.dot(vec) * b;
  const double norm = vec.norm();
  if (norm < 1e-8) return false;
  basis.push_back(vec / norm);
  return true;
}

Vector random_vector(long dim, Rng& rng) {
  Vector v(dim);
  for (long i = 0; i < dim; ++i) v(i) = cxd(rng.gauss(), rng.gauss());
  return v / v.norm();
}

QorCase assemble_qor(int n_a, int m, const PureState& rho, const std::vector<Vector>& basis) {
  const long d = 1L << (n_a + m);
  Matrix lambda = Matrix::Zero(d, d);
  for (const Vector& b : basis) lambda += b * b.adjoint();
  QorCase out{QorInstance{n_a, m, HermitianOperator(n_a + m, std::move(lambda))}, rho, 0.0};
  out.instance.validate();
  out.best_sigma_value = out.instance.best_sigma_value(DensityMatrix::from_pure(rho));
  return out;
}

}  // namespace

QorCase gen_qor_yes(int n_a, int m, double eta, std::uint64_t seed) {
  Rng rng(seed);
  const PureState rho = haar_state(n_a, rng.next_u64());
  const long da = 1L << n_a;
  const long db = 1L << m;
  const long i_star = 1 + static_cast<long>(rng.uniform_int(db - 1));

  // Aligned direction with overlap cos^2 in [max(eta, 0.75), 1].
  const double target = std::max(eta, 0.75) + (1.0 - std::max(eta, 0.75)) * rng.uniform();
  Vector a_part = rho.amplitudes();
  if (target < 1.0 - 1e-12) {
    std::vector<Vector> tmp{rho.amplitudes()};
    Vector perp = random_vector(da, rng);
    for (int tries = 0; tries < 8 && !orthonormal_append(tmp, perp); ++tries)
      perp = random_vector(da, rng);
    a_part = std::sqrt(target) * rho.amplitudes() + std::sqrt(1.0 - target) * tmp.back();
  }
  Vector v1 = Vector::Zero(da * db);
  for (long a = 0; a < da; ++a) v1(a + da * i_star) = a_part(a);

  std::vector<Vector> basis{v1 / v1.norm()};
  const int extras = static_cast<int>(rng.uniform_int(3));
  for (int e = 0; e < extras; ++e) orthonormal_append(basis, random_vector(da * db, rng));

  QorCase out = assemble_qor(n_a, m, rho, basis);
  if (out.best_sigma_value < eta)
    throw PromiseViolation("generated QOR yes instance misses the eta promise");
  return out;
}

QorCase gen_qor_no(int n_a, int m, double delta, std::uint64_t seed) {
  Rng rng(seed);
  const PureState rho = haar_state(n_a, rng.next_u64());
  const long da = 1L << n_a;
  const long db = 1L << m;

  // Orthonormal directions inside span(rho)^perp (x) H_B.
  std::vector<Vector> a_perp{rho.amplitudes()};
  while (static_cast<long>(a_perp.size()) < da) orthonormal_append(a_perp, random_vector(da, rng));
  const int count = 1 + static_cast<int>(rng.uniform_int(std::min<long>(3, da * db - 1)));
  std::vector<Vector> basis;
  for (int e = 0; e < count; ++e) {
    Vector v = Vector::Zero(da * db);
    // Random combination of perp-A directions against random B basis states.
    for (int pieces = 0; pieces < 2; ++pieces) {
      const std::size_t ai = 1 + rng.uniform_int(a_perp.size() - 1);
      const long b = static_cast<long>(rng.uniform_int(db));
      const cxd coeff(rng.gauss(), rng.gauss());
      for (long a = 0; a < da; ++a) v(a + da * b) += coeff * a_perp[ai](a);
    }
    if (v.norm() < 1e-9) continue;
    orthonormal_append(basis, std::move(v));
  }
  require(!basis.empty(), "no usable no-case directions");
  QorCase out = assemble_qor(n_a, m, rho, basis);
  if (out.best_sigma_value > delta)
    throw PromiseViolation("generated QOR no instance misses the delta promise");
  return out;
}

StodInstance gen_stod_instance(int witness_bits, std::uint64_t seed) {
  require(witness_bits >= 1, "need at least one witness bit");
  Rng rng(seed);
  const int k = witness_bits;
  const int n_input = 1;
  const int n_ancilla = k >= 2 ? k - 1 : 1;  // answer first, then cascade scratch
  const int total = k + n_input + n_ancilla;
  dim_of(total);
  const int ans = k + n_input;

  long target = static_cast<long>(rng.uniform_int(1L << k));
  std::vector<Gate> gates;
  for (int i = 0; i < k; ++i)
    if (((target >> i) & 1) == 0) gates.push_back(Gate{GateKind::X, {i}});
  if (k == 1) {
    gates.push_back(Gate{GateKind::CNOT, {0, ans}});
  } else if (k == 2) {
    gates.push_back(Gate{GateKind::TOFFOLI, {0, 1, ans}});
  } else {
    // Cascade: a_1 = w_0 & w_1, a_j = a_{j-1} & w_j, answer last.
    gates.push_back(Gate{GateKind::TOFFOLI, {0, 1, ans + 1}});
    for (int j = 2; j < k - 1; ++j)
      gates.push_back(Gate{GateKind::TOFFOLI, {ans + j - 1, j, ans + j}});
    gates.push_back(Gate{GateKind::TOFFOLI, {ans + k - 2, k - 1, ans}});
  }

  StodInstance out{ClassicalWitnessVerifier{GateCircuit(total, std::move(gates)), k, n_input, 1,
                                            n_ancilla},
                   std::string(), haar_state(n_input, rng.next_u64())};
  for (int i = 0; i < k; ++i) out.target_witness.push_back(((target >> i) & 1) ? '1' : '0');
  return out;
}

}  // namespace qplab
