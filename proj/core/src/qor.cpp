#include "qplab/qor.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "qplab/report.hpp"

namespace qplab {

using nlohmann::json;

json VerdictReport::to_json() const {
  json j{{"verdict", accept ? "accept" : "reject"},
         {"trials", trials},
         {"half_width", half_width},
         {"seed", seed}};
  if (p_exact) j["p_exact"] = *p_exact;
  if (p_hat) j["p_hat"] = *p_hat;
  for (const auto& [k, v] : stats) j["stats"][k] = v;
  return j;
}

void QorInstance::validate() const {
  require(n_a >= 1 && m >= 1, "QOR instance needs nonempty registers");
  require(lambda.n_qubits() == n_a + m, "Lambda dimension mismatch");
  require(lambda.is_projector(), "Lambda is not a projector");
}

double QorInstance::best_sigma_value(const DensityMatrix& rho) const {
  require(rho.n_qubits() == n_a, "input register mismatch");
  // M_B = Tr_A[(rho (x) I_B) Lambda]; max_sigma = lambda_max(M_B).
  const long da = 1L << n_a;
  const long db = 1L << m;
  Matrix mb = Matrix::Zero(db, db);
  const Matrix& l = lambda.matrix();
  for (long b1 = 0; b1 < db; ++b1)
    for (long b2 = 0; b2 < db; ++b2) {
      cxd acc = 0.0;
      for (long a1 = 0; a1 < da; ++a1)
        for (long a2 = 0; a2 < da; ++a2)
          acc += rho.matrix()(a2, a1) * l(a1 + da * b1, a2 + da * b2);
      mb(b1, b2) = acc;
    }
  Eigen::SelfAdjointEigenSolver<Matrix> es(mb, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

namespace {

// XOR-by-i permutation on register B inside the A (x) B (x) C space.
long xor_b_image(long x, long i, int n_a, int m) {
  const long mask = ((1L << m) - 1) << n_a;
  return (x & ~mask) ^ (((((x & mask) >> n_a) ^ i) << n_a) & mask);
}

struct QorOperators {
  // Apply Pi = sum_i Lambda_i (x) Q|i><i|Q^dag without materializing it:
  // Q^dag on C, XOR(C -> B), Lambda on AB, XOR, Q on C.
  int n_a, m;
  Matrix lambda;
  Matrix qft;  // m-qubit Fourier transform

  Vector apply_pi(const Vector& v) const {
    const int n_total = n_a + 2 * m;
    std::vector<int> c_qubits;
    for (int q = n_a + m; q < n_total; ++q) c_qubits.push_back(q);
    std::vector<int> ab_qubits;
    for (int q = 0; q < n_a + m; ++q) ab_qubits.push_back(q);

    Vector w = apply_on_qubits(qft.adjoint(), c_qubits, v);
    w = xor_c_into_b(w);
    w = apply_on_qubits(lambda, ab_qubits, w);
    w = xor_c_into_b(w);
    return apply_on_qubits(qft, c_qubits, w);
  }

  Vector xor_c_into_b(const Vector& v) const {
    Vector out(v.size());
    for (long x = 0; x < v.size(); ++x) {
      const long c = x >> (n_a + m);
      out(xor_b_image(x, c, n_a, m)) = v(x);
    }
    return out;
  }

  Vector project_c_zero(const Vector& v) const {
    Vector out = Vector::Zero(v.size());
    const long dc_stride = 1L << (n_a + m);
    for (long x = 0; x < dc_stride; ++x) out(x) = v(x);
    return out;
  }
};

Matrix fourier_matrix(int m) {
  const long n = 1L << m;
  Matrix q(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (long j = 0; j < n; ++j)
    for (long k = 0; k < n; ++k)
      q(j, k) = norm * std::exp(cxd(0.0, 2.0 * std::numbers::pi * j * k / n));
  return q;
}

VerdictReport qor_run_impl(const Vector* pure_a, const Matrix* mixed_a, int n_a,
                           const QorInstance& inst, double eta, double delta) {
  inst.validate();
  require(eta >= 0.5 && eta <= 1.0, "eta must lie in [1/2, 1]");
  require(n_a == inst.n_a, "input register mismatch");
  const int m = inst.m;
  const long big_n = 1L << m;
  const long rounds = static_cast<long>(std::ceil(static_cast<double>(big_n) / eta));
  const int n_total = n_a + 2 * m;
  const long d = dim_of(n_total);

  QorOperators ops{n_a, m, inst.lambda.matrix(), fourier_matrix(m)};

  double accept = 0.0;
  if (pure_a != nullptr) {
    // Pure input: drag an unnormalized vector through the measurement chain.
    Vector v = Vector::Zero(d);
    for (long x = 0; x < pure_a->size(); ++x) v(x) = (*pure_a)(x);
    for (long r = 0; r < rounds; ++r) {
      const Vector pi_v = ops.apply_pi(v);
      accept += pi_v.squaredNorm();
      v -= pi_v;  // (I - Pi) branch
      const Vector delta_v = ops.project_c_zero(v);
      accept += v.squaredNorm() - delta_v.squaredNorm();  // I - Delta accepts
      v = delta_v;
      if (v.squaredNorm() < 1e-18) break;
    }
  } else {
    // Mixed input: materialize Pi and Delta densely (small instances only).
    Matrix pi = Matrix::Zero(d, d);
    for (long col = 0; col < d; ++col) {
      Vector e = Vector::Zero(d);
      e(col) = 1.0;
      pi.col(col) = ops.apply_pi(e);
    }
    Matrix sigma = Matrix::Zero(d, d);
    sigma.topLeftCorner(mixed_a->rows(), mixed_a->cols()) = *mixed_a;
    for (long r = 0; r < rounds; ++r) {
      accept += (pi * sigma).trace().real();
      Matrix rest = sigma - pi * sigma - sigma * pi + pi * sigma * pi;
      Matrix delta_rest = Matrix::Zero(d, d);
      const long dd = 1L << (n_a + m);
      delta_rest.topLeftCorner(dd, dd) = rest.topLeftCorner(dd, dd);
      accept += rest.trace().real() - delta_rest.trace().real();
      sigma = delta_rest;
      if (sigma.trace().real() < 1e-18) break;
    }
  }

  VerdictReport report;
  report.p_exact = accept;
  report.stats["eta"] = eta;
  report.stats["delta"] = delta;
  report.stats["rounds"] = static_cast<double>(rounds);
  report.stats["case_i_floor"] = eta * eta / 7.0;
  report.stats["case_ii_ceiling"] = 4.0 * static_cast<double>(big_n) * delta;
  report.accept = accept >= eta * eta / 7.0;
  return report;
}

}  // namespace

VerdictReport qor_run(const DensityMatrix& rho, const QorInstance& inst, double eta, double delta) {
  const Matrix m = rho.matrix();
  return qor_run_impl(nullptr, &m, rho.n_qubits(), inst, eta, delta);
}

VerdictReport qor_run(const PureState& rho, const QorInstance& inst, double eta, double delta) {
  const Vector v = rho.amplitudes();
  return qor_run_impl(&v, nullptr, rho.n_qubits(), inst, eta, delta);
}

QmaToQorResult qma_to_qor(const QmaVerifier& verifier, const PureState& input, int rounds,
                          int soundness_exponent) {
  require(rounds >= 1, "need at least one round");
  require(input.n_qubits() == verifier.n_input, "input width mismatch");
  const int block = verifier.n_input * verifier.t_copies + verifier.n_ancilla + 1;  // + flag
  const int n_a = rounds * block;
  const int m = verifier.n_witness;
  const int n_total = n_a + m;
  dim_of(n_total);
  require(verifier.circuit.n_qubits() ==
              verifier.n_input * verifier.t_copies + verifier.n_witness + verifier.n_ancilla,
          "verifier register mismatch");

  // Dilated unitary: per round apply V_i, CNOT the answer onto the flag,
  // then rewind with V_i^dagger. Witness register sits last (register B).
  const long d = dim_of(n_total);
  Matrix w_dil = Matrix::Identity(d, d);
  for (int i = 0; i < rounds; ++i) {
    const int base = i * block;
    const int in_width = verifier.n_input * verifier.t_copies;
    // Round circuit layout: inputs at base, ancillas after them, witness at n_a.
    std::vector<int> targets;
    for (int q = 0; q < in_width; ++q) targets.push_back(base + q);
    for (int q = 0; q < verifier.n_witness; ++q) targets.push_back(n_a + q);
    for (int q = 0; q < verifier.n_ancilla; ++q) targets.push_back(base + in_width + q);
    Matrix v_round = Matrix::Identity(d, d);
    for (const Gate& g : verifier.circuit.gates()) {
      std::vector<int> mapped;
      for (int q : g.qubits) mapped.push_back(targets[q]);
      v_round = embed(gate_matrix(g.kind), mapped, n_total) * v_round;
    }
    const int ans = base + in_width;              // first ancilla of the round
    const int flag = base + in_width + verifier.n_ancilla;
    Matrix cnot = embed(gate_matrix(GateKind::CNOT), {ans, flag}, n_total);
    w_dil = v_round.adjoint() * cnot * v_round * w_dil;
  }

  // Lambda = W^dag (projector onto all flags = 1) W.
  Matrix flag_proj = Matrix::Identity(d, d);
  for (int i = 0; i < rounds; ++i) {
    const int flag = i * block + verifier.n_input * verifier.t_copies + verifier.n_ancilla;
    Matrix p1 = Matrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    flag_proj = embed(p1, {flag}, n_total) * flag_proj;
  }
  Matrix lambda = w_dil.adjoint() * flag_proj * w_dil;

  QmaToQorResult out{QorInstance{n_a, m, HermitianOperator(n_total, std::move(lambda))},
                     PureState::zero(1), rounds, 0.0, 0.0};
  out.instance.validate();

  // rho_A: per round, t copies of the input followed by zeroed ancilla+flag.
  PureState round_state = tensor(tensor_power(input, verifier.t_copies),
                                 PureState::zero(verifier.n_ancilla + 1));
  PureState rho_a = round_state;
  for (int i = 1; i < rounds; ++i) rho_a = tensor(rho_a, round_state);
  out.rho_a = std::move(rho_a);

  out.completeness_floor =
      1.0 - 4.0 * rounds * std::pow(2.0, -soundness_exponent);
  out.soundness_ceiling = std::pow(2.0, -static_cast<double>(rounds) * soundness_exponent);
  return out;
}

}  // namespace qplab
