#include "qplab/lhverify.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qplab/measure.hpp"
#include "qplab/metrics.hpp"
#include "qplab/random.hpp"

namespace qplab {

namespace {

struct TermEigen {
  RealVector lambdas;
  Matrix vectors;  // columns
};

TermEigen term_eigen(const LocalTerm& t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(t.matrix.matrix());
  return TermEigen{es.eigenvalues(), es.eigenvectors()};
}

// Weighted draw over S u L (pure) or S u (L (+) [2^k]) (mixed).
struct TermPick {
  bool coupled = false;
  std::size_t index = 0;
  long r = 0;  // eigenvalue slot for mixed coupled picks
};

std::vector<int> input_qubit_list(const HamiltonianInstance& inst) {
  std::vector<int> q;
  for (int i = inst.input_lo; i <= inst.input_hi; ++i) q.push_back(i);
  return q;
}

void require_input_first(const HamiltonianInstance& inst) {
  require(inst.input_lo == 0, "verifier expects the input register on the low qubits");
}

// E[X] with X the case-1 estimator: measure `state` in the eigenbasis of the
// embedded term and output the eigenvalue.
double case1_expectation(const HamiltonianInstance& inst, const LocalTerm& t,
                         const PureState& state) {
  return (state.amplitudes().adjoint() *
          embed(t.matrix.matrix(), t.qubits, inst.n_total_qubits) * state.amplitudes())(0)
      .real();
}

// Exact E[Y - 2Z] for a coupled term on a pure witness: eigenbasis
// measurement, then the partial swap test against psi on the input register.
double case2_expectation(const HamiltonianInstance& inst, const LocalTerm& t,
                         const PureState& psi_on_input, const PureState& witness) {
  const TermEigen eig = term_eigen(t);
  double acc = 0.0;
  for (long i = 0; i < eig.lambdas.size(); ++i) {
    const double lambda = eig.lambdas(i);
    if (std::abs(lambda) < kSupportCutoff) continue;
    const Matrix proj = eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    Vector branch = apply_on_qubits(proj, t.qubits, witness.amplitudes());
    const double p_i = branch.squaredNorm();
    if (p_i <= kUnreachableProb) continue;
    branch /= std::sqrt(p_i);
    const double q_i =
        partial_swap_accept_probability(PureState(inst.n_total_qubits, branch), psi_on_input);
    acc += lambda * (p_i - 2.0 * p_i * q_i);  // E[Y] - 2 E[Z] contribution
  }
  return acc;
}

struct SampledCase2 {
  double y = 0.0;
  double z = 0.0;
};

SampledCase2 sample_case2(const HamiltonianInstance& inst, const LocalTerm& t,
                          const PureState& psi_on_input, const PureState& witness, Rng& rng) {
  const TermEigen eig = term_eigen(t);
  std::vector<double> probs;
  std::vector<Vector> branches;
  for (long i = 0; i < eig.lambdas.size(); ++i) {
    const Matrix proj = eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    Vector branch = apply_on_qubits(proj, t.qubits, witness.amplitudes());
    probs.push_back(branch.squaredNorm());
    branches.push_back(std::move(branch));
  }
  const std::size_t i = rng.categorical(probs);
  SampledCase2 out;
  out.y = eig.lambdas(static_cast<long>(i));
  if (probs[i] <= kUnreachableProb) return out;
  Vector post = branches[i] / std::sqrt(probs[i]);
  const double q =
      partial_swap_accept_probability(PureState(inst.n_total_qubits, std::move(post)), psi_on_input);
  out.z = rng.uniform() < q ? out.y : 0.0;
  return out;
}

}  // namespace

double lhwp_estimator_expectation(const HamiltonianInstance& inst, const PureState& psi_on_input,
                                  const PureState& witness) {
  require_input_first(inst);
  require(witness.n_qubits() == inst.n_total_qubits, "witness must cover the full register");
  require(psi_on_input.n_qubits() == inst.input_qubits(), "psi width mismatch");
  double acc = 0.0;
  for (const LocalTerm& t : inst.plain_terms)
    acc += static_cast<double>(t.copies) * case1_expectation(inst, t, witness);
  for (const LocalTerm& t : inst.coupled_terms)
    acc += static_cast<double>(t.copies) * case2_expectation(inst, t, psi_on_input, witness);
  return acc / static_cast<double>(inst.term_budget());
}

VerdictReport lhwp_verify(const HamiltonianInstance& inst, const PureState& psi_on_input,
                          const PureState& witness, const LhwpOptions& opts) {
  inst.validate();
  require(inst.variant != InstanceVariant::kMixed, "lhwp_verify needs a pure-variant instance");
  const double weight = static_cast<double>(inst.term_budget());
  const double threshold = inst.a + 1.0 / static_cast<double>(inst.p);

  VerdictReport report;
  report.seed = opts.seed;
  report.stats["threshold"] = threshold;
  report.stats["term_weight"] = weight;

  if (opts.mode == VerifyMode::kExact) {
    const double mean = lhwp_estimator_expectation(inst, psi_on_input, witness);
    report.p_exact = mean * weight;  // exact expected energy estimate
    report.stats["estimator_mean"] = mean;
    report.accept = mean * weight <= threshold;
    return report;
  }

  require_input_first(inst);
  Rng rng(opts.seed);
  std::vector<double> weights;
  std::vector<TermPick> picks;
  for (std::size_t i = 0; i < inst.plain_terms.size(); ++i) {
    weights.push_back(static_cast<double>(inst.plain_terms[i].copies));
    picks.push_back(TermPick{false, i, 0});
  }
  for (std::size_t i = 0; i < inst.coupled_terms.size(); ++i) {
    weights.push_back(static_cast<double>(inst.coupled_terms[i].copies));
    picks.push_back(TermPick{true, i, 0});
  }

  double sum = 0.0;
  for (long round = 0; round < opts.rounds; ++round) {
    const TermPick pick = picks[rng.categorical(weights)];
    if (!pick.coupled) {
      const LocalTerm& t = inst.plain_terms[pick.index];
      const TermEigen eig = term_eigen(t);
      std::vector<double> probs;
      for (long i = 0; i < eig.lambdas.size(); ++i) {
        const Matrix proj = eig.vectors.col(i) * eig.vectors.col(i).adjoint();
        probs.push_back(
            apply_on_qubits(proj, t.qubits, witness.amplitudes()).squaredNorm());
      }
      sum += eig.lambdas(static_cast<long>(rng.categorical(probs)));
    } else {
      const SampledCase2 yz =
          sample_case2(inst, inst.coupled_terms[pick.index], psi_on_input, witness, rng);
      sum += yz.y - 2.0 * yz.z;
    }
  }
  const double mean = sum / static_cast<double>(opts.rounds);
  report.p_hat = mean * weight;
  report.trials = opts.rounds;
  report.half_width = 2.0 * hoeffding_half_width(opts.rounds, 1e-3) * weight;
  report.stats["estimator_mean"] = mean;
  report.accept = mean * weight <= threshold;
  return report;
}

namespace {

// branch0 = psi_I (x) phi_W (x) 0_D (x) |r>_E for the controlled Hadamard test.
Vector case2_branch0(const HamiltonianInstance& inst, const PureState& psi, const PureState& phi,
                     const std::vector<int>& e_qubits, long r) {
  const int ni = inst.input_qubits();
  const int nw = phi.n_qubits();
  const int n = inst.n_total_qubits;
  const int k = static_cast<int>(e_qubits.size());
  Vector v = Vector::Zero(dim_of(n));
  const long e_base = static_cast<long>(n - k);
  for (long w = 0; w < phi.dim(); ++w)
    for (long i = 0; i < psi.dim(); ++i) {
      const long x = i + (w << ni) + (r << e_base);
      v(x) = psi.amplitudes()(i) * phi.amplitudes()(w);
    }
  return v;
}

Vector case2_input(const HamiltonianInstance& inst, const PureState& psi, const PureState& phi) {
  const int ni = inst.input_qubits();
  const int n = inst.n_total_qubits;
  Vector v = Vector::Zero(dim_of(n));
  for (long w = 0; w < phi.dim(); ++w)
    for (long i = 0; i < psi.dim(); ++i) v(i + (w << ni)) = psi.amplitudes()(i) * phi.amplitudes()(w);
  return v;
}

void require_last_k(const HamiltonianInstance& inst, const LocalTerm& t) {
  const int k = static_cast<int>(t.qubits.size());
  for (int i = 0; i < k; ++i)
    require(t.qubits[i] == inst.n_total_qubits - k + i,
            "mixed-variant coupled term must act on the last k qubits");
}

}  // namespace

PureState lhwm_build_witness(const HamiltonianInstance& inst, const Matrix& circuit,
                             const PureState& psi_on_input, const PureState& phi) {
  require_input_first(inst);
  require(circuit.rows() == dim_of(inst.n_total_qubits), "witness circuit dimension mismatch");
  return PureState(inst.n_total_qubits, circuit * case2_input(inst, psi_on_input, phi));
}

LhwmCase2Analysis lhwm_case2_analysis(const HamiltonianInstance& inst,
                                      const EigenDecomposition& inputs, std::size_t coupled_index,
                                      const LhwmWitness& witness) {
  require_input_first(inst);
  require(coupled_index < inst.coupled_terms.size(), "coupled term index out of range");
  const LocalTerm& t = inst.coupled_terms[coupled_index];
  require_last_k(inst, t);
  const int k = static_cast<int>(t.qubits.size());
  const TermEigen eig = term_eigen(t);
  // U maps the eigenbasis to the computational basis: U = sum_i |i><v_i|.
  const Matrix u = eig.vectors.adjoint();

  LhwmCase2Analysis out;
  const long nr = eig.lambdas.size();
  out.lambdas.resize(nr);
  out.x_expectations.assign(nr, 0.0);
  out.w_l_expectations.assign(nr, 0.0);
  out.step2_targets.assign(nr, 0.0);
  for (long r = 0; r < nr; ++r) out.lambdas[r] = eig.lambdas(r);

  const std::vector<int> e_qubits = t.qubits;
  const std::vector<int> in_qubits = input_qubit_list(inst);

  for (std::size_t s = 0; s < inputs.states.size(); ++s) {
    const PureState& psi = inputs.states[s];
    const double weight = inputs.probabilities[s];
    Vector eta = witness.circuit * case2_input(inst, psi, witness.phi);
    Vector branch1 = apply_on_qubits(u, e_qubits, eta);
    const Matrix psi_proj = psi.projector();
    for (long r = 0; r < nr; ++r) {
      const Vector b0 = case2_branch0(inst, psi, witness.phi, e_qubits, r);
      const double ex = hadamard_x_expectation(PureState(inst.n_total_qubits, b0),
                                               PureState(inst.n_total_qubits, branch1), e_qubits, r);
      out.x_expectations[r] += weight * ex;
      // <eta| P_psi,I (x) P_vr,E |eta>
      const Matrix vr_proj = eig.vectors.col(r) * eig.vectors.col(r).adjoint();
      Vector proj_eta = apply_on_qubits(psi_proj, in_qubits, eta);
      proj_eta = apply_on_qubits(vr_proj, e_qubits, proj_eta);
      const double overlap = proj_eta.squaredNorm();
      out.step2_targets[r] += weight * (-out.lambdas[r]) * overlap;
    }
  }
  for (long r = 0; r < nr; ++r)
    out.w_l_expectations[r] = -out.lambdas[r] * witness.alpha_prover * out.x_expectations[r];
  return out;
}

VerdictReport lhwm_verify(const HamiltonianInstance& inst, const DensityMatrix& rho, int copies,
                          const LhwmWitness& witness, const LhwmOptions& opts) {
  inst.validate();
  require(inst.variant == InstanceVariant::kMixed, "lhwm_verify needs a mixed-variant instance");
  require_input_first(inst);
  require(witness.alpha_prover >= -1.0 && witness.alpha_prover <= 1.0,
          "alpha_prover outside [-1, 1]");
  require(witness.circuit.rows() == dim_of(inst.n_total_qubits),
          "witness circuit dimension mismatch");

  const EigenDecomposition dec = eigen_decomposition(tensor_power(rho, copies));
  require(dec.states.at(0).n_qubits() == inst.input_qubits(),
          "rho^(x)copies does not match the input register");

  const double weight = static_cast<double>(inst.term_budget());
  const double threshold = inst.a + 2.0 / static_cast<double>(inst.p);
  const double abort_window_exact = 1.0 / (2.0 * static_cast<double>(inst.p) *
                                           static_cast<double>(inst.p));

  VerdictReport report;
  report.seed = opts.seed;
  report.stats["threshold"] = threshold;
  report.stats["term_weight"] = weight;

  if (opts.mode == VerifyMode::kExact) {
    double acc = 0.0;
    bool abort = false;
    // Case 1 terms on the constructed state eta = C(psi (x) phi (x) 0).
    for (const LocalTerm& t : inst.plain_terms) {
      double e = 0.0;
      for (std::size_t s = 0; s < dec.states.size(); ++s) {
        Vector eta = witness.circuit * case2_input(inst, dec.states[s], witness.phi);
        e += dec.probabilities[s] *
             case1_expectation(inst, t, PureState(inst.n_total_qubits, std::move(eta)));
      }
      acc += static_cast<double>(t.copies) * e;
    }
    for (std::size_t li = 0; li < inst.coupled_terms.size(); ++li) {
      const LhwmCase2Analysis an = lhwm_case2_analysis(inst, dec, li, witness);
      for (std::size_t r = 0; r < an.lambdas.size(); ++r) {
        acc += static_cast<double>(inst.coupled_terms[li].copies) * an.w_l_expectations[r];
        // The abort test only constrains sectors the estimator actually uses;
        // the uniform-initialization promise says nothing about lambda_r = 0.
        if (std::abs(an.lambdas[r]) > kSupportCutoff &&
            std::abs(witness.alpha_prover - an.x_expectations[r]) > abort_window_exact)
          abort = true;
      }
    }
    const double mean = acc / weight;
    report.p_exact = mean * weight;
    report.stats["estimator_mean"] = mean;
    report.stats["aborted"] = abort ? 1.0 : 0.0;
    report.accept = !abort && mean * weight <= threshold;
    return report;
  }

  // Sampled mode.
  Rng rng(opts.seed);
  std::vector<double> weights;
  std::vector<TermPick> picks;
  for (std::size_t i = 0; i < inst.plain_terms.size(); ++i) {
    weights.push_back(static_cast<double>(inst.plain_terms[i].copies));
    picks.push_back(TermPick{false, i, 0});
  }
  for (std::size_t i = 0; i < inst.coupled_terms.size(); ++i) {
    const long nr = 1L << inst.coupled_terms[i].qubits.size();
    for (long r = 0; r < nr; ++r) {
      weights.push_back(static_cast<double>(inst.coupled_terms[i].copies));
      picks.push_back(TermPick{true, i, r});
    }
  }
  const double abort_window =
      abort_window_exact + 2.0 * hoeffding_half_width(opts.block, opts.abort_confidence);

  auto sample_input = [&](Rng& r) -> const PureState& {
    return dec.states[r.categorical(dec.probabilities)];
  };

  double sum = 0.0;
  bool abort = false;
  for (long round = 0; round < opts.rounds && !abort; ++round) {
    const TermPick pick = picks[rng.categorical(weights)];
    if (!pick.coupled) {
      const LocalTerm& t = inst.plain_terms[pick.index];
      const PureState& psi = sample_input(rng);
      Vector eta = witness.circuit * case2_input(inst, psi, witness.phi);
      const TermEigen eig = term_eigen(t);
      std::vector<double> probs;
      for (long i = 0; i < eig.lambdas.size(); ++i) {
        const Matrix proj = eig.vectors.col(i) * eig.vectors.col(i).adjoint();
        probs.push_back(apply_on_qubits(proj, t.qubits, eta).squaredNorm());
      }
      sum += eig.lambdas(static_cast<long>(rng.categorical(probs)));
      continue;
    }
    const LocalTerm& t = inst.coupled_terms[pick.index];
    require_last_k(inst, t);
    const TermEigen eig = term_eigen(t);
    const Matrix u = eig.vectors.adjoint();
    const double lambda_r = eig.lambdas(pick.r);
    auto sample_x = [&](Rng& r) {
      const PureState& psi = sample_input(r);
      Vector eta = witness.circuit * case2_input(inst, psi, witness.phi);
      Vector branch1 = apply_on_qubits(u, t.qubits, eta);
      const Vector b0 = case2_branch0(inst, psi, witness.phi, t.qubits, pick.r);
      const MeasurementOutcomeDist dist =
          hadamard_overlap_test(PureState(inst.n_total_qubits, b0),
                                PureState(inst.n_total_qubits, std::move(branch1)), t.qubits);
      const std::string label = sample_trajectory(dist, 1, r.next_u64())[0];
      const bool plus = label[0] == '+';
      const bool at_r = label.substr(2) == std::to_string(pick.r);
      const double y = at_r ? 1.0 : 0.0;
      const double z = (plus && at_r) ? 1.0 : 0.0;
      return 2.0 * z - y;
    };
    double block_mean = 0.0;
    for (long j = 0; j < opts.block; ++j) block_mean += sample_x(rng);
    block_mean /= static_cast<double>(opts.block);
    double abort_mean = 0.0;
    for (long j = 0; j < opts.block; ++j) abort_mean += sample_x(rng);
    abort_mean /= static_cast<double>(opts.block);
    if (std::abs(lambda_r) > kSupportCutoff &&
        std::abs(witness.alpha_prover - abort_mean) > abort_window)
      abort = true;
    sum += -lambda_r * witness.alpha_prover * block_mean;
  }
  const double mean = sum / static_cast<double>(opts.rounds);
  report.p_hat = mean * weight;
  report.trials = opts.rounds * 2 * opts.block;
  report.half_width = 2.0 * hoeffding_half_width(opts.rounds, 1e-3) * weight;
  report.stats["estimator_mean"] = mean;
  report.stats["aborted"] = abort ? 1.0 : 0.0;
  report.stats["abort_window"] = abort_window;
  report.accept = !abort && mean * weight <= threshold;
  return report;
}

}  // namespace qplab
