#include "qplab/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qplab/metrics.hpp"
#include "qplab/serialize.hpp"

namespace qplab {

using nlohmann::json;

void LocalTerm::validate(int n_total_qubits) const {
  require(!qubits.empty(), "local term has no qubits");
  require(std::is_sorted(qubits.begin(), qubits.end()) &&
              std::adjacent_find(qubits.begin(), qubits.end()) == qubits.end(),
          "local term qubit list must be sorted and distinct");
  for (int q : qubits) require(q >= 0 && q < n_total_qubits, "local term qubit out of range");
  require(matrix.dim() == (1L << qubits.size()), "local term matrix/qubit mismatch");
  require(copies >= 1, "local term copies must be >= 1");
  require(matrix.is_contraction(), "local term violates 0 <= H <= I");
}

std::string variant_name(InstanceVariant v) {
  switch (v) {
    case InstanceVariant::kPure: return "pure";
    case InstanceVariant::kMixed: return "mixed";
    case InstanceVariant::kLowComplexity: return "low-complexity";
  }
  throw PreconditionError("bad variant");
}

InstanceVariant variant_from_name(const std::string& name) {
  if (name == "pure") return InstanceVariant::kPure;
  if (name == "mixed") return InstanceVariant::kMixed;
  if (name == "low-complexity") return InstanceVariant::kLowComplexity;
  throw PreconditionError("unknown instance variant: " + name);
}

long HamiltonianInstance::plain_weight() const {
  long w = 0;
  for (const LocalTerm& t : plain_terms) w += t.copies;
  return w;
}

long HamiltonianInstance::coupled_weight() const {
  long w = 0;
  for (const LocalTerm& t : coupled_terms) w += t.copies;
  return w;
}

long HamiltonianInstance::term_budget() const {
  if (variant == InstanceVariant::kMixed) {
    long w = plain_weight();
    for (const LocalTerm& t : coupled_terms) w += t.copies * (1L << t.qubits.size());
    return w;
  }
  return plain_weight() + coupled_weight();
}

void HamiltonianInstance::validate() const {
  dim_of(n_total_qubits);
  require(input_lo >= 0 && input_hi >= input_lo && input_hi < n_total_qubits,
          "input register out of range");
  for (const LocalTerm& t : plain_terms) t.validate(n_total_qubits);
  for (const LocalTerm& t : coupled_terms) {
    t.validate(n_total_qubits);
    for (int q : t.qubits)
      require(q < input_lo || q > input_hi, "coupled term overlaps the input register");
  }
  require(p >= 1, "p must be positive");
  require(a >= 0.0 && b >= 0.0, "thresholds must be nonnegative");
  require(term_budget() <= p, "term budget exceeds p");
  const double gap_floor = variant == InstanceVariant::kMixed ? 4.0 / static_cast<double>(p)
                                                              : 2.0 / static_cast<double>(p);
  require(b - a > gap_floor, "threshold gap b - a below the promise floor");
}

json instance_to_json(const HamiltonianInstance& inst) {
  auto terms_to_json = [](const std::vector<LocalTerm>& terms) {
    json arr = json::array();
    for (const LocalTerm& t : terms) {
      json jt{{"qubits", t.qubits}, {"matrix", complex_matrix_to_json(t.matrix.matrix())}};
      if (t.copies != 1) jt["copies"] = t.copies;
      arr.push_back(std::move(jt));
    }
    return arr;
  };
  return json{{"version", kSchemaVersion},
              {"n_qubits", inst.n_total_qubits},
              {"input_register", json::array({inst.input_lo, inst.input_hi})},
              {"plain_terms", terms_to_json(inst.plain_terms)},
              {"coupled_terms", terms_to_json(inst.coupled_terms)},
              {"p", inst.p},
              {"a", inst.a},
              {"b", inst.b},
              {"variant", variant_name(inst.variant)}};
}

HamiltonianInstance instance_from_json(const json& j) {
  check_schema_version(j);
  HamiltonianInstance inst;
  inst.n_total_qubits = j.at("n_qubits").get<int>();
  inst.input_lo = j.at("input_register").at(0).get<int>();
  inst.input_hi = j.at("input_register").at(1).get<int>();
  auto terms_from_json = [](const json& arr) {
    std::vector<LocalTerm> terms;
    for (const json& jt : arr) {
      std::vector<int> qubits = jt.at("qubits").get<std::vector<int>>();
      Matrix m = complex_matrix_from_json(jt.at("matrix"));
      const int k = static_cast<int>(qubits.size());
      LocalTerm t{std::move(qubits), HermitianOperator(k, std::move(m)),
                  jt.contains("copies") ? jt.at("copies").get<long>() : 1};
      terms.push_back(std::move(t));
    }
    return terms;
  };
  inst.plain_terms = terms_from_json(j.at("plain_terms"));
  inst.coupled_terms = terms_from_json(j.at("coupled_terms"));
  inst.p = j.at("p").get<long>();
  inst.a = j.at("a").get<double>();
  inst.b = j.at("b").get<double>();
  inst.variant = variant_from_name(j.at("variant").get<std::string>());
  inst.validate();
  return inst;
}

HermitianOperator assemble(const HamiltonianInstance& inst, const PureState& psi_on_input) {
  require(psi_on_input.n_qubits() == inst.input_qubits(),
          "assemble: state does not cover the input register");
  const long d = dim_of(inst.n_total_qubits);
  Matrix h = Matrix::Zero(d, d);
  for (const LocalTerm& t : inst.plain_terms)
    h += static_cast<double>(t.copies) * embed(t.matrix.matrix(), t.qubits, inst.n_total_qubits);
  if (!inst.coupled_terms.empty()) {
    std::vector<int> input_qubits;
    for (int q = inst.input_lo; q <= inst.input_hi; ++q) input_qubits.push_back(q);
    const Matrix proj = embed(psi_on_input.projector(), input_qubits, inst.n_total_qubits);
    for (const LocalTerm& t : inst.coupled_terms)
      h -= static_cast<double>(t.copies) * proj *
           embed(t.matrix.matrix(), t.qubits, inst.n_total_qubits);
  }
  return HermitianOperator(inst.n_total_qubits, std::move(h));
}

long ClockLayout::clock_field(int t) const {
  require(t >= 0 && t <= m_gates, "clock time out of range");
  // Bit (m+1-j) of the field is T_j; T_j = 1 iff j <= t.
  long field = 0;
  for (int j = 1; j <= t; ++j) field |= 1L << (m_gates + 1 - j);
  return field;
}

namespace {

Matrix halved_projector_diag(int k, long index) {
  Matrix m = Matrix::Zero(1L << k, 1L << k);
  m(index, index) = 0.5;
  return m;
}

// (1/2)[ I (x) (|c0><c0| + |c1><c1|) - V (x) |c1><c0| - V^dag (x) |c0><c1| ]
// with the gate on the low bits and the clock field on the high bits.
Matrix propagation_term(const Matrix& gate, int clock_bits, long c_before, long c_after) {
  const long dg = gate.rows();
  const long d = dg << clock_bits;
  Matrix m = Matrix::Zero(d, d);
  const Matrix ig = Matrix::Identity(dg, dg);
  m.block(c_before * dg, c_before * dg, dg, dg) = 0.5 * ig;
  m.block(c_after * dg, c_after * dg, dg, dg) = 0.5 * ig;
  m.block(c_after * dg, c_before * dg, dg, dg) = -0.5 * gate;
  m.block(c_before * dg, c_after * dg, dg, dg) = -0.5 * gate.adjoint();
  return m;
}

}  // namespace

CookLevinResult cook_levin(const GateCircuit& verifier, const ClockLayout& layout,
                           long stab_penalty, InstanceVariant variant) {
  require(verifier.n_qubits() == layout.clock_lo(),
          "verifier must act on the I,W,A registers exactly");
  require(layout.n_ancilla >= 1, "need at least the answer ancilla");
  require(verifier.size() == layout.m_gates, "gate count does not match the clock length");
  require(stab_penalty >= 1, "stabilizer penalty must be >= 1");
  const int m = layout.m_gates;
  const int n_total = layout.total_qubits();
  for (const Gate& g : verifier.gates())
    for (int q : g.qubits)
      require(q < layout.clock_lo(), "verifier gate reaches into the clock register");

  HamiltonianInstance inst;
  inst.n_total_qubits = n_total;
  inst.input_lo = 0;
  inst.input_hi = layout.input_width() - 1;
  inst.variant = variant;

  const int t1 = layout.clock_qubit(1);

  // H_in: identity part of (I - P_psi) (x) |0><0|_T1, plus ancilla penalties.
  inst.plain_terms.push_back(LocalTerm{{t1}, HermitianOperator(1, halved_projector_diag(1, 0)), 1});
  for (int i = 0; i < layout.n_ancilla; ++i) {
    const int anc = layout.ancilla_lo() + i;
    // |1><1|_anc (x) |0><0|_T1, local index anc + 2*t1 = 1
    inst.plain_terms.push_back(
        LocalTerm{{anc, t1}, HermitianOperator(2, halved_projector_diag(2, 1)), 1});
  }

  // H_out: |0><0|_ans (x) |1><1|_Tm, local index ans + 2*tm = 2
  inst.plain_terms.push_back(LocalTerm{{layout.answer_qubit(), layout.clock_qubit(m)},
                                       HermitianOperator(2, halved_projector_diag(2, 2)), 1});

  // H_prop: transition t -> t+1 applies V_{t+1}.
  for (int t = 0; t < m; ++t) {
    const Gate& gate = verifier.gates()[t];
    std::vector<int> gate_qubits = gate.qubits;
    std::sort(gate_qubits.begin(), gate_qubits.end());
    // Gate matrix re-embedded into the sorted local ordering.
    std::vector<int> local_positions;
    for (int q : gate.qubits)
      local_positions.push_back(static_cast<int>(
          std::find(gate_qubits.begin(), gate_qubits.end(), q) - gate_qubits.begin()));
    const Matrix gate_local =
        embed(gate_matrix(gate.kind), local_positions, static_cast<int>(gate_qubits.size()));

    std::vector<int> qubits = gate_qubits;
    int clock_bits;
    long c_before, c_after;
    if (t == 0) {
      // Neighborhood (T_1, T_2): 00 -> 10 (T_1 flips, T_2 stays 0).
      qubits.push_back(layout.clock_qubit(2));
      qubits.push_back(layout.clock_qubit(1));
      clock_bits = 2;
      c_before = 0;        // T_2=0, T_1=0
      c_after = 2;         // T_2=0, T_1=1 (T_1 is the high local clock bit)
    } else {
      // Neighborhood (T_t, T_{t+1}, T_{t+2}): 100 -> 110.
      qubits.push_back(layout.clock_qubit(t + 2));
      qubits.push_back(layout.clock_qubit(t + 1));
      qubits.push_back(layout.clock_qubit(t));
      clock_bits = 3;
      c_before = 4;        // T_t=1 only
      c_after = 6;         // T_t=1, T_{t+1}=1
    }
    // Clock qubits were appended in increasing global order, so `qubits` is
    // sorted: gate qubits precede all clock qubits.
    Matrix term = propagation_term(gate_local, clock_bits, c_before, c_after);
    inst.plain_terms.push_back(LocalTerm{
        qubits, HermitianOperator(static_cast<int>(qubits.size()), std::move(term)), 1});
  }

  // H_stab: illegal clock strings either contain 01 on (T_i, T_{i+1}) for
  // some i < m, or have T_{m+1} = 1. The paper's 01 projectors alone leave
  // the all-ones string unpenalized, so the T_{m+1} penalty is required.
  for (int i = 1; i < m; ++i) {
    // |0><0|_{T_i} (x) |1><1|_{T_{i+1}}, sorted order [T_{i+1}, T_i], index 1
    inst.plain_terms.push_back(LocalTerm{{layout.clock_qubit(i + 1), layout.clock_qubit(i)},
                                         HermitianOperator(2, halved_projector_diag(2, 1)),
                                         stab_penalty});
  }
  inst.plain_terms.push_back(LocalTerm{
      {layout.clock_qubit(m + 1)}, HermitianOperator(1, halved_projector_diag(1, 1)), stab_penalty});

  // Coupled part of H_in: -P_psi (x) |0><0|_T1.
  inst.coupled_terms.push_back(
      LocalTerm{{t1}, HermitianOperator(1, halved_projector_diag(1, 0)), 1});

  inst.p = inst.term_budget();
  inst.a = 1.0 / (std::pow(2.0, layout.n_input + 1) * (m + 1));
  // Placeholder gap; generators overwrite b (exact eigensolve for no
  // instances, a + 2 * floor for yes instances).
  inst.b = inst.a + (variant == InstanceVariant::kMixed ? 8.0 : 4.0) / static_cast<double>(inst.p);
  inst.validate();
  return CookLevinResult{std::move(inst), layout, verifier};
}

PureState history_state(const GateCircuit& verifier, const ClockLayout& layout,
                        const PureState& psi, const PureState& phi) {
  require(psi.n_qubits() == layout.n_input, "history_state: psi width mismatch");
  require(phi.n_qubits() == layout.n_witness, "history_state: witness width mismatch");
  const int m = layout.m_gates;
  const long d_sys = 1L << layout.clock_lo();
  Vector sys = tensor(tensor(tensor_power(psi, layout.c_copies), phi),
                      PureState::zero(layout.n_ancilla))
                   .amplitudes();
  Vector full = Vector::Zero(dim_of(layout.total_qubits()));
  const double amp = 1.0 / std::sqrt(static_cast<double>(m + 1));
  for (int t = 0; t <= m; ++t) {
    if (t > 0) sys = apply_on_qubits(gate_matrix(verifier.gates()[t - 1].kind),
                                     verifier.gates()[t - 1].qubits, sys);
    const long clock_offset = layout.clock_field(t) << layout.clock_lo();
    for (long x = 0; x < d_sys; ++x) full(x + clock_offset) += amp * sys(x);
  }
  return PureState(layout.total_qubits(), std::move(full));
}

Matrix history_witness_unitary(const GateCircuit& verifier, const ClockLayout& layout) {
  const int m = layout.m_gates;
  const int n_total = layout.total_qubits();
  const long d = dim_of(n_total);
  const long d_sys = 1L << layout.clock_lo();
  const long d_clock = 1L << (m + 1);

  // F: clock-register unitary mapping |0...0> to the uniform superposition of
  // legal unary strings (a real Householder reflection).
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d_clock);
  for (int t = 0; t <= m; ++t) u(layout.clock_field(t)) = 1.0 / std::sqrt(m + 1.0);
  Eigen::VectorXd v = -u;
  v(0) += 1.0;  // v = e_0 - u
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(d_clock, d_clock);
  const double vnorm2 = v.squaredNorm();
  if (vnorm2 > 1e-30) f -= (2.0 / vnorm2) * (v * v.transpose());

  // U_hist: apply V_t ... V_1 on the system conditioned on the clock reading t.
  std::vector<Matrix> prefixes;
  prefixes.reserve(m + 1);
  Matrix acc = Matrix::Identity(d_sys, d_sys);
  prefixes.push_back(acc);
  for (int t = 1; t <= m; ++t) {
    acc = embed(gate_matrix(verifier.gates()[t - 1].kind), verifier.gates()[t - 1].qubits,
                layout.clock_lo()) *
          acc;
    prefixes.push_back(acc);
  }

  Matrix c = Matrix::Zero(d, d);
  std::vector<bool> legal(d_clock, false);
  std::vector<int> time_of(d_clock, 0);
  for (int t = 0; t <= m; ++t) {
    legal[layout.clock_field(t)] = true;
    time_of[layout.clock_field(t)] = t;
  }
  for (long clock = 0; clock < d_clock; ++clock) {
    const Matrix& block = legal[clock] ? prefixes[time_of[clock]] : Matrix::Identity(d_sys, d_sys);
    c.block(clock * d_sys, clock * d_sys, d_sys, d_sys) = block;
  }

  // Full C = U_hist * (I_sys (x) F).
  Matrix f_embedded = Matrix::Zero(d, d);
  for (long i = 0; i < d_clock; ++i)
    for (long j = 0; j < d_clock; ++j) {
      if (f(i, j) == 0.0) continue;
      f_embedded.block(i * d_sys, j * d_sys, d_sys, d_sys) =
          f(i, j) * Matrix::Identity(d_sys, d_sys);
    }
  return c * f_embedded;
}

double subspace_angle(const Matrix& x_basis, const Matrix& y_basis) {
  require(x_basis.cols() >= 1 && y_basis.cols() >= 1, "zero-dimensional subspace");
  require(x_basis.rows() == y_basis.rows(), "subspace ambient dimension mismatch");
  Eigen::JacobiSVD<Matrix> svd(x_basis.adjoint() * y_basis);
  const double cosangle = std::min(1.0, svd.singularValues().maxCoeff());
  return std::acos(cosangle);
}

namespace {

Matrix null_space_basis(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  long count = 0;
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) <= kSupportCutoff) ++count;
  require(count >= 1, "operator has no null space");
  Matrix basis(h.dim(), count);
  long c = 0;
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) <= kSupportCutoff) basis.col(c++) = es.eigenvectors().col(i);
  return basis;
}

double min_nonzero_eigenvalue(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  double v = -1.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double e = es.eigenvalues()(i);
    require(e >= -kPsdTol, "geometric_bounds: operator not PSD");
    if (e > kSupportCutoff && (v < 0.0 || e < v)) v = e;
  }
  require(v > 0.0, "geometric_bounds: operator is zero");
  return v;
}

}  // namespace

GeometricBounds geometric_bounds(const HermitianOperator& h1, const HermitianOperator& h2,
                                 std::optional<double> v) {
  require(h1.dim() == h2.dim(), "geometric_bounds: dimension mismatch");
  const Matrix n1 = null_space_basis(h1);
  const Matrix n2 = null_space_basis(h2);
  GeometricBounds gb;
  gb.angle = subspace_angle(n1, n2);
  const double vmin = v.value_or(std::min(min_nonzero_eigenvalue(h1), min_nonzero_eigenvalue(h2)));
  const double s = std::sin(gb.angle / 2.0);
  gb.lambda_min_lower = 2.0 * vmin * s * s;
  Eigen::SelfAdjointEigenSolver<Matrix> sum_es(h1.matrix() + h2.matrix(), Eigen::EigenvaluesOnly);
  gb.lambda_min_exact = sum_es.eigenvalues().minCoeff();
  gb.projector_upper = 1.0 + std::cos(gb.angle);
  Eigen::SelfAdjointEigenSolver<Matrix> proj_es(
      Matrix(n1 * n1.adjoint() + n2 * n2.adjoint()), Eigen::EigenvaluesOnly);
  gb.projector_exact = proj_es.eigenvalues().maxCoeff();
  return gb;
}

EigenDecomposition eigen_decomposition(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  struct Entry {
    double value;
    Vector vec;
  };
  std::vector<Entry> entries;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    Vector col = es.eigenvectors().col(i);
    // Fix the phase: first entry of nontrivial magnitude made real positive.
    for (long r = 0; r < col.size(); ++r) {
      if (std::abs(col(r)) > 1e-9) {
        col *= std::conj(col(r)) / std::abs(col(r));
        break;
      }
    }
    entries.push_back(Entry{es.eigenvalues()(i), std::move(col)});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (std::abs(a.value - b.value) > 1e-12) return a.value > b.value;
    // Deterministic tie-break: lexicographic on (re, im) entries.
    for (long i = 0; i < a.vec.size(); ++i) {
      if (std::abs(a.vec(i).real() - b.vec(i).real()) > 1e-12)
        return a.vec(i).real() > b.vec(i).real();
      if (std::abs(a.vec(i).imag() - b.vec(i).imag()) > 1e-12)
        return a.vec(i).imag() > b.vec(i).imag();
    }
    return false;
  });
  EigenDecomposition dec;
  for (Entry& e : entries) {
    if (e.value <= kSupportCutoff) continue;
    dec.probabilities.push_back(e.value);
    dec.states.emplace_back(rho.n_qubits(), std::move(e.vec));
  }
  return dec;
}

double lhwm_expected_energy(const HamiltonianInstance& inst, const DensityMatrix& rho, int copies,
                            const std::function<PureState(const PureState&)>& witness_builder) {
  return lhwm_expected_energy(inst, eigen_decomposition(tensor_power(rho, copies)),
                              witness_builder);
}

double lhwm_expected_energy(const HamiltonianInstance& inst, const EigenDecomposition& dec,
                            const std::function<PureState(const PureState&)>& witness_builder) {
  double energy = 0.0;
  for (std::size_t i = 0; i < dec.states.size(); ++i) {
    const PureState eta = witness_builder(dec.states[i]);
    const HermitianOperator h = assemble(inst, dec.states[i]);
    const double e =
        (eta.amplitudes().adjoint() * h.matrix() * eta.amplitudes())(0).real();
    energy += dec.probabilities[i] * e;
  }
  return energy;
}

}  // namespace qplab
