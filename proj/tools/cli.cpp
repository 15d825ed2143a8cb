#include "cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "qplab/amplify.hpp"
#include "qplab/crypto.hpp"
#include "qplab/generators.hpp"
#include "qplab/lhverify.hpp"
#include "qplab/measure.hpp"
#include "qplab/metrics.hpp"
#include "qplab/protocols.hpp"
#include "qplab/qor.hpp"
#include "qplab/serialize.hpp"
#include "qplab/stod.hpp"

namespace qplab {

namespace {

using nlohmann::json;

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::uint64_t resolve_seed(std::uint64_t seed, bool seed_given, bool sampled) {
  if (seed_given) return seed;
  if (const char* env = std::getenv("QPLAB_SEED")) return std::strtoull(env, nullptr, 10);
  if (sampled) throw PreconditionError("sampled mode requires --seed (or QPLAB_SEED)");
  return 0;
}

void emit_report(const std::string& out_path, const json& config, const json& result) {
  json report{{"version", kSchemaVersion}, {"config", config}, {"result", result}};
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    save_json_file(out_path, report);
  }
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open csv file: " + path);
  out << header << "\n";
  for (const std::string& r : rows) out << r << "\n";
}

void parallel_trials(long trials, int jobs, const std::function<void(long)>& body) {
  if (jobs <= 1) {
    for (long t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (long t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) body(t);
    });
  for (std::thread& th : pool) th.join();
}

json unitary_to_json(const Matrix& u, int n_qubits) {
  return json{{"version", kSchemaVersion},
              {"kind", "unitary"},
              {"n_qubits", n_qubits},
              {"matrix", complex_matrix_to_json(u)}};
}

Matrix unitary_from_json(const json& j) {
  check_schema_version(j);
  return complex_matrix_from_json(j.at("matrix"));
}

PureState load_pure(const std::string& path) { return pure_state_from_json(load_json_file(path)); }
DensityMatrix load_density(const std::string& path) {
  return density_from_json(load_json_file(path));
}

struct QorFile {
  QorInstance instance;
  PureState rho;
  double eta = 2.0 / 3.0;
  double delta = 0.0;
  std::string promised_case;
};

json qor_file_to_json(const QorCase& qc, const std::string& promised_case, double eta,
                      double delta) {
  return json{{"version", kSchemaVersion},
              {"kind", "qor-instance"},
              {"n_a", qc.instance.n_a},
              {"m", qc.instance.m},
              {"lambda", complex_matrix_to_json(qc.instance.lambda.matrix())},
              {"rho", to_json(qc.rho)},
              {"case", promised_case},
              {"eta", eta},
              {"delta", delta},
              {"best_sigma_value", qc.best_sigma_value}};
}

QorFile qor_file_from_json(const json& j) {
  check_schema_version(j);
  const int n_a = j.at("n_a").get<int>();
  const int m = j.at("m").get<int>();
  QorFile f{QorInstance{n_a, m,
                        HermitianOperator(n_a + m, complex_matrix_from_json(j.at("lambda")))},
            pure_state_from_json(j.at("rho")), j.value("eta", 2.0 / 3.0), j.value("delta", 0.0),
            j.value("case", std::string())};
  f.instance.validate();
  return f;
}

json stod_file_to_json(const StodInstance& si) {
  return json{{"version", kSchemaVersion},
              {"kind", "stod-verifier"},
              {"circuit", to_json(si.verifier.circuit)},
              {"n_witness_bits", si.verifier.n_witness_bits},
              {"n_input", si.verifier.n_input},
              {"t_copies", si.verifier.t_copies},
              {"n_ancilla", si.verifier.n_ancilla},
              {"input", to_json(si.input)},
              {"target_witness", si.target_witness}};
}

StodInstance stod_file_from_json(const json& j) {
  check_schema_version(j);
  StodInstance si{ClassicalWitnessVerifier{circuit_from_json(j.at("circuit")),
                                           j.at("n_witness_bits").get<int>(),
                                           j.at("n_input").get<int>(),
                                           j.at("t_copies").get<int>(),
                                           j.at("n_ancilla").get<int>()},
                  j.value("target_witness", std::string()),
                  pure_state_from_json(j.at("input"))};
  return si;
}

// ---------------------------------------------------------------- gen ----

void register_gen(CLI::App& app, int& exit_code) {
  CLI::App* gen = app.add_subcommand("gen", "generate instance, circuit, and scheme files");
  gen->require_subcommand(1);

  {
    auto* cl = gen->add_subcommand("cooklevin", "clock-Hamiltonian instance from a verifier");
    struct CLParams {
      bool accepting = false, rejecting = false;
      int n = 2, m = 2, w = 1, q = 1, c = 1;
      long penalty = 10000;
      std::uint64_t seed = 0;
      bool seed_given = false;
      std::string out, circuit_out, psi_out, witness_out, history_out;
    };
    auto opts = std::make_shared<CLParams>();
    cl->add_flag("--accepting", opts->accepting, "verifier accepts every witness");
    cl->add_flag("--rejecting", opts->rejecting, "verifier never sets the answer qubit");
    cl->add_option("--n", opts->n, "input qubits per copy");
    cl->add_option("--m", opts->m, "gate count");
    cl->add_option("--witness-qubits", opts->w);
    cl->add_option("--ancilla-qubits", opts->q);
    cl->add_option("--copies", opts->c, "input copies in register I");
    cl->add_option("--penalty", opts->penalty, "stabilizer term multiplicity");
    cl->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    cl->add_option("--out", opts->out, "instance file")->required();
    cl->add_option("--circuit-out", opts->circuit_out);
    cl->add_option("--psi-out", opts->psi_out);
    cl->add_option("--witness-out", opts->witness_out);
    cl->add_option("--history-out", opts->history_out);
    cl->callback([opts, &exit_code] {
      require(opts->accepting != opts->rejecting, "pass exactly one of --accepting/--rejecting");
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, false);
      const ClockLayout layout{opts->n, opts->c, opts->w, opts->q, opts->m};
      json result;
      if (opts->accepting) {
        CookLevinYes yes = gen_cooklevin_yes(layout, opts->penalty, seed);
        save_json_file(opts->out, instance_to_json(yes.reduction.instance));
        if (!opts->circuit_out.empty())
          save_json_file(opts->circuit_out, to_json(yes.reduction.verifier));
        if (!opts->psi_out.empty()) save_json_file(opts->psi_out, to_json(yes.psi));
        if (!opts->witness_out.empty()) save_json_file(opts->witness_out, to_json(yes.phi));
        if (!opts->history_out.empty()) save_json_file(opts->history_out, to_json(yes.history));
        result = json{{"case", "yes"},
                      {"a", yes.reduction.instance.a},
                      {"b", yes.reduction.instance.b},
                      {"p", yes.reduction.instance.p},
                      {"history_energy", yes.history_energy},
                      {"lambda_min", yes.lambda_min}};
      } else {
        CookLevinNo no = gen_cooklevin_no(layout, opts->penalty, seed);
        save_json_file(opts->out, instance_to_json(no.reduction.instance));
        if (!opts->circuit_out.empty())
          save_json_file(opts->circuit_out, to_json(no.reduction.verifier));
        if (!opts->psi_out.empty()) save_json_file(opts->psi_out, to_json(no.psi));
        result = json{{"case", "no"},
                      {"a", no.reduction.instance.a},
                      {"b", no.reduction.instance.b},
                      {"p", no.reduction.instance.p},
                      {"lambda_min", no.lambda_min}};
      }
      json config{{"subcommand", "gen cooklevin"}, {"n", opts->n},       {"m", opts->m},
                  {"witness_qubits", opts->w},     {"ancilla", opts->q}, {"copies", opts->c},
                  {"penalty", opts->penalty},      {"seed", seed},       {"out", opts->out}};
      emit_report("", config, result);
      (void)exit_code;
    });
  }

  {
    auto* cm = gen->add_subcommand("cooklevin-mixed", "mixed-variant clock instance plus witness");
    struct CMParams {
      int n = 1, m = 2, w = 1, q = 1, c = 1, rank = 2;
      long penalty = 10000;
      std::uint64_t seed = 0;
      bool seed_given = false;
      std::string out, rho_out, circuit_out, phi_out;
    };
    auto opts = std::make_shared<CMParams>();
    cm->add_option("--n", opts->n);
    cm->add_option("--m", opts->m);
    cm->add_option("--witness-qubits", opts->w);
    cm->add_option("--ancilla-qubits", opts->q);
    cm->add_option("--copies", opts->c);
    cm->add_option("--rank", opts->rank, "rank of the input density matrix");
    cm->add_option("--penalty", opts->penalty);
    cm->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    cm->add_option("--out", opts->out)->required();
    cm->add_option("--rho-out", opts->rho_out);
    cm->add_option("--circuit-out", opts->circuit_out, "witness unitary C");
    cm->add_option("--phi-out", opts->phi_out);
    cm->callback([opts] {
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, false);
      const ClockLayout layout{opts->n, opts->c, opts->w, opts->q, opts->m};
      CookLevinMixedYes my = gen_cooklevin_mixed_yes(layout, opts->rank, opts->penalty, seed);
      save_json_file(opts->out, instance_to_json(my.reduction.instance));
      if (!opts->rho_out.empty()) save_json_file(opts->rho_out, to_json(my.rho));
      if (!opts->circuit_out.empty())
        save_json_file(opts->circuit_out,
                       unitary_to_json(my.witness_circuit, my.reduction.instance.n_total_qubits));
      if (!opts->phi_out.empty()) save_json_file(opts->phi_out, to_json(my.phi));
      json config{{"subcommand", "gen cooklevin-mixed"}, {"n", opts->n},   {"m", opts->m},
                  {"rank", opts->rank},                  {"seed", seed},   {"out", opts->out},
                  {"penalty", opts->penalty},            {"copies", opts->c}};
      emit_report("", config,
                  json{{"alpha", my.alpha},
                       {"expected_energy", my.expected_energy},
                       {"a", my.reduction.instance.a},
                       {"p", my.reduction.instance.p}});
    });
  }

  {
    auto* pr = gen->add_subcommand("prs", "toy pseudorandom-state scheme file");
    struct PrsParams {
      int key_bits = 4, m = 4, depth = 24;
      std::uint64_t seed = 0;
      bool seed_given = false;
      std::string out;
    };
    auto opts = std::make_shared<PrsParams>();
    pr->add_option("--key-bits", opts->key_bits);
    pr->add_option("--m", opts->m, "output qubits");
    pr->add_option("--depth", opts->depth);
    pr->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    pr->add_option("--out", opts->out)->required();
    pr->callback([opts] {
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, false);
      PrsScheme scheme(opts->key_bits, opts->m, opts->depth, seed);
      save_json_file(opts->out, scheme.to_json());
      json config{{"subcommand", "gen prs"}, {"key_bits", opts->key_bits}, {"m", opts->m},
                  {"depth", opts->depth},    {"seed", seed},               {"out", opts->out}};
      emit_report("", config,
                  json{{"keys", scheme.key_count()},
                       {"max_pairwise_overlap_sq", scheme.max_pairwise_overlap_sq()}});
    });
  }

  {
    auto* qr = gen->add_subcommand("qor", "Quantum OR instance file");
    struct QorParams {
      bool yes = false, no = false;
      int na = 2, m = 2;
      double eta = 2.0 / 3.0;
      std::uint64_t seed = 0;
      bool seed_given = false;
      std::string out;
    };
    auto opts = std::make_shared<QorParams>();
    qr->add_flag("--yes", opts->yes);
    qr->add_flag("--no", opts->no);
    qr->add_option("--na", opts->na, "register A qubits");
    qr->add_option("--m", opts->m, "register B qubits");
    qr->add_option("--eta", opts->eta);
    qr->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    qr->add_option("--out", opts->out)->required();
    qr->callback([opts] {
      require(opts->yes != opts->no, "pass exactly one of --yes/--no");
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, false);
      const double delta = 1.0 / (64.0 * std::pow(2.0, opts->m));
      QorCase qc = opts->yes ? gen_qor_yes(opts->na, opts->m, opts->eta, seed)
                             : gen_qor_no(opts->na, opts->m, delta, seed);
      save_json_file(opts->out,
                     qor_file_to_json(qc, opts->yes ? "yes" : "no", opts->eta, delta));
      json config{{"subcommand", "gen qor"}, {"na", opts->na}, {"m", opts->m},
                  {"eta", opts->eta},        {"seed", seed},   {"out", opts->out}};
      emit_report("", config, json{{"best_sigma_value", qc.best_sigma_value}, {"delta", delta}});
    });
  }

  {
    auto* st = gen->add_subcommand("stod", "classical-witness verifier file");
    struct StodParams {
      int bits = 6;
      std::uint64_t seed = 0;
      bool seed_given = false;
      std::string out;
    };
    auto opts = std::make_shared<StodParams>();
    st->add_option("--bits", opts->bits);
    st->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    st->add_option("--out", opts->out)->required();
    st->callback([opts] {
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, false);
      StodInstance si = gen_stod_instance(opts->bits, seed);
      save_json_file(opts->out, stod_file_to_json(si));
      json config{{"subcommand", "gen stod"}, {"bits", opts->bits}, {"seed", seed},
                  {"out", opts->out}};
      emit_report("", config, json{{"target_witness", si.target_witness}});
    });
  }
}

// ------------------------------------------------------------- verify ----

void register_qor(CLI::App& app, int& exit_code) {
  auto* cmd = app.add_subcommand("qor", "run the Quantum OR experiment on an instance file");
  struct RunParams {
    std::string instance, out, mode = "exact", expect;
    double eta = -1.0, delta = -1.0;
  };
    auto opts = std::make_shared<RunParams>();
  cmd->add_option("--instance", opts->instance)->required();
  cmd->add_option("--mode", opts->mode)->check(CLI::IsMember({"exact"}));
  cmd->add_option("--eta", opts->eta);
  cmd->add_option("--delta", opts->delta);
  cmd->add_option("--expect", opts->expect)->check(CLI::IsMember({"yes", "no"}));
  cmd->add_option("--out", opts->out);
  cmd->callback([opts, &exit_code] {
    QorFile f = qor_file_from_json(load_json_file(opts->instance));
    const double eta = opts->eta > 0 ? opts->eta : f.eta;
    const double delta = opts->delta >= 0 ? opts->delta : f.delta;
    VerdictReport report = qor_run(f.rho, f.instance, eta, delta);
    json config{{"subcommand", "qor"}, {"instance", opts->instance}, {"mode", opts->mode},
                {"eta", eta},          {"delta", delta}};
    emit_report(opts->out, config, report.to_json());
    const std::string expect = !opts->expect.empty() ? opts->expect : f.promised_case;
    if (!expect.empty()) {
      const bool ok = expect == "yes" ? *report.p_exact >= eta * eta / 7.0
                                      : *report.p_exact <= 4.0 * std::pow(2.0, f.instance.m) * delta;
      if (!ok) exit_code = 2;
    }
  });
}

void register_lhwp(CLI::App& app, int& exit_code) {
  auto* cmd = app.add_subcommand("lhwp", "run the LHwP verifier");
  struct RunParams {
    std::string instance, psi, witness, circuit, phi, out, mode = "exact", expect;
    long rounds = 400;
    std::uint64_t seed = 0;
    bool seed_given = false;
  };
    auto opts = std::make_shared<RunParams>();
  cmd->add_option("--instance", opts->instance)->required();
  cmd->add_option("--psi", opts->psi, "input state on the input register (one copy set)")->required();
  cmd->add_option("--witness", opts->witness, "witness state file on the full register");
  cmd->add_option("--circuit", opts->circuit, "verifier circuit: build the history-state witness");
  cmd->add_option("--phi", opts->phi, "witness register state for --circuit");
  cmd->add_option("--mode", opts->mode)->check(CLI::IsMember({"exact", "sampled"}));
  cmd->add_option("--rounds", opts->rounds);
  cmd->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
  cmd->add_option("--expect", opts->expect)->check(CLI::IsMember({"accept", "reject"}));
  cmd->add_option("--out", opts->out);
  cmd->callback([opts, &exit_code] {
    HamiltonianInstance inst = instance_from_json(load_json_file(opts->instance));
    const PureState psi = load_pure(opts->psi);
    PureState witness = PureState::zero(inst.n_total_qubits);
    if (!opts->witness.empty()) {
      witness = load_pure(opts->witness);
    } else {
      require(!opts->circuit.empty() && !opts->phi.empty(),
              "pass --witness or both --circuit and --phi");
      GateCircuit verifier = circuit_from_json(load_json_file(opts->circuit));
      const PureState phi = load_pure(opts->phi);
      const int clock = inst.n_total_qubits - verifier.n_qubits() - 1;
      const int cw = psi.n_qubits();
      ClockLayout layout{cw, 1, phi.n_qubits(),
                         verifier.n_qubits() - cw - phi.n_qubits(), clock};
      witness = history_state(verifier, layout, psi, phi);
    }
    LhwpOptions lo;
    lo.mode = opts->mode == "exact" ? VerifyMode::kExact : VerifyMode::kSampled;
    lo.rounds = opts->rounds;
    lo.seed = resolve_seed(opts->seed, opts->seed_given, lo.mode == VerifyMode::kSampled);
    // The per-copy input always covers the whole input register here.
    PureState psi_full = psi;
    if (psi.n_qubits() < inst.input_qubits()) {
      require(inst.input_qubits() % psi.n_qubits() == 0, "psi width incompatible with register I");
      psi_full = tensor_power(psi, inst.input_qubits() / psi.n_qubits());
    }
    VerdictReport report = lhwp_verify(inst, psi_full, witness, lo);
    json config{{"subcommand", "lhwp"}, {"instance", opts->instance}, {"mode", opts->mode},
                {"rounds", opts->rounds}, {"seed", lo.seed}};
    emit_report(opts->out, config, report.to_json());
    if (!opts->expect.empty() && (opts->expect == "accept") != report.accept) exit_code = 2;
  });
}

void register_lhwm(CLI::App& app, int& exit_code) {
  auto* cmd = app.add_subcommand("lhwm", "run the LHwM verifier");
  struct RunParams {
    std::string instance, rho, circuit, phi, out, mode = "exact", expect;
    double alpha = 0.0;
    int copies = 1;
    long rounds = 8, block = 200;
    std::uint64_t seed = 0;
    bool seed_given = false;
  };
    auto opts = std::make_shared<RunParams>();
  cmd->add_option("--instance", opts->instance)->required();
  cmd->add_option("--rho", opts->rho, "per-copy input density matrix")->required();
  cmd->add_option("--circuit", opts->circuit, "witness unitary C file")->required();
  cmd->add_option("--phi", opts->phi, "state witness file")->required();
  cmd->add_option("--alpha", opts->alpha, "claimed amplitude alpha_prover")->required();
  cmd->add_option("--copies", opts->copies);
  cmd->add_option("--mode", opts->mode)->check(CLI::IsMember({"exact", "sampled"}));
  cmd->add_option("--rounds", opts->rounds);
  cmd->add_option("--block", opts->block);
  cmd->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
  cmd->add_option("--expect", opts->expect)->check(CLI::IsMember({"accept", "reject"}));
  cmd->add_option("--out", opts->out);
  cmd->callback([opts, &exit_code] {
    HamiltonianInstance inst = instance_from_json(load_json_file(opts->instance));
    const DensityMatrix rho = load_density(opts->rho);
    LhwmWitness witness{unitary_from_json(load_json_file(opts->circuit)), load_pure(opts->phi),
                        opts->alpha};
    LhwmOptions lo;
    lo.mode = opts->mode == "exact" ? VerifyMode::kExact : VerifyMode::kSampled;
    lo.rounds = opts->rounds;
    lo.block = opts->block;
    lo.seed = resolve_seed(opts->seed, opts->seed_given, lo.mode == VerifyMode::kSampled);
    VerdictReport report = lhwm_verify(inst, rho, opts->copies, witness, lo);
    json config{{"subcommand", "lhwm"}, {"instance", opts->instance}, {"mode", opts->mode},
                {"copies", opts->copies}, {"rounds", opts->rounds},   {"block", opts->block},
                {"alpha", opts->alpha},   {"seed", lo.seed}};
    emit_report(opts->out, config, report.to_json());
    if (!opts->expect.empty() && (opts->expect == "accept") != report.accept) exit_code = 2;
  });
}

void register_amplify(CLI::App& app) {
  auto* cmd = app.add_subcommand("amplify", "parallel amplification analysis");
  struct AmpParams {
    double a = 0.75, inv_p = 0.25, round_q = -1.0;
    int s = 32;
    long trials = 10000;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out;
  };
    auto opts = std::make_shared<AmpParams>();
  cmd->add_option("--a", opts->a, "base completeness");
  cmd->add_option("--inv-p", opts->inv_p, "promise gap 1/p");
  cmd->add_option("--s", opts->s, "parallel rounds");
  cmd->add_option("--round-q", opts->round_q, "per-round acceptance of the analyzed witness");
  cmd->add_option("--trials", opts->trials);
  cmd->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
  cmd->add_option("--out", opts->out);
  cmd->callback([opts] {
    const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, true);
    // One-qubit round operator realizing acceptance q on the |1> witness.
    const double q = opts->round_q >= 0.0 ? opts->round_q : opts->a;
    Matrix e = Matrix::Zero(4, 4);
    e(2, 2) = e(3, 3) = q;  // accept prob q whenever the witness bit is 1
    AmplifiedVerifier amp(HermitianOperator(2, std::move(e)),
                          DensityMatrix::from_pure(PureState::zero(1)), 1, opts->a, opts->inv_p,
                          opts->s);
    const DensityMatrix witness = DensityMatrix::from_pure(PureState::basis(1, 1));
    VerdictReport sampled = amp.sampled_acceptance(witness, opts->trials, seed);
    json result{{"threshold_fraction", amp.threshold_fraction()},
                {"min_accept_count", amp.min_accept_count()},
                {"round_q", q},
                {"exact_acceptance", amp.product_acceptance(witness)},
                {"iid_no_case_bound", amp.iid_no_case_bound()},
                {"sampled", sampled.to_json()}};
    json config{{"subcommand", "amplify"}, {"a", opts->a}, {"inv_p", opts->inv_p},
                {"s", opts->s},            {"round_q", q}, {"trials", opts->trials},
                {"seed", seed}};
    emit_report(opts->out, config, result);
  });
}

void register_stod(CLI::App& app, int& exit_code, int& jobs) {
  auto* cmd = app.add_subcommand("stod", "search-to-decision witness recovery");
  struct StodRun {
    std::string verifier, out, csv;
    int bits = 6;
    long trials = 1;
    double a = 1.0, slack = 0.2;
    std::uint64_t seed = 0;
    bool seed_given = false;
  };
    auto opts = std::make_shared<StodRun>();
  cmd->add_option("--verifier", opts->verifier, "verifier file (otherwise generated per trial)");
  cmd->add_option("--bits", opts->bits);
  cmd->add_option("--trials", opts->trials);
  cmd->add_option("--a", opts->a);
  cmd->add_option("--slack", opts->slack, "1/lambda^c stand-in");
  cmd->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
  cmd->add_option("--out", opts->out);
  cmd->add_option("--csv", opts->csv);
  cmd->callback([opts, &exit_code, &jobs] {
    const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, true);
    std::vector<json> rows(opts->trials);
    std::vector<std::string> csv_rows(opts->trials);
    std::atomic<long> good{0};
    parallel_trials(opts->trials, jobs, [&](long t) {
      const std::uint64_t trial_seed = mix_seed(seed, static_cast<std::uint64_t>(t));
      StodInstance si = !opts->verifier.empty()
                            ? stod_file_from_json(load_json_file(opts->verifier))
                            : gen_stod_instance(opts->bits, trial_seed);
      StodResult r = search_to_decision(si.verifier, si.input, opts->a, opts->slack,
                                        mix_seed(trial_seed, 0xf00d));
      const bool ok = r.acceptance >= r.floor;
      if (ok) ++good;
      bool all_good = true;
      for (int g : r.good_trace) all_good = all_good && g == 1;
      rows[t] = json{{"seed", trial_seed},
                     {"witness", r.witness},
                     {"acceptance", r.acceptance},
                     {"floor", r.floor},
                     {"good_set_held", all_good},
                     {"dont_care_hits", r.dont_care_hits},
                     {"target", si.target_witness}};
      csv_rows[t] = std::to_string(trial_seed) + "," + r.witness + "," + fmt12(r.acceptance) +
                    "," + (all_good ? "1" : "0");
    });
    write_csv(opts->csv, "seed,witness,acceptance,good_set_held", csv_rows);
    json config{{"subcommand", "stod"}, {"bits", opts->bits}, {"trials", opts->trials},
                {"a", opts->a},         {"slack", opts->slack}, {"seed", seed}};
    const double rate = static_cast<double>(good.load()) / static_cast<double>(opts->trials);
    emit_report(opts->out, config, json{{"success_rate", rate}, {"trials", rows}});
    if (rate < 0.95 && opts->trials >= 20) exit_code = 2;
  });
}

void register_identify(CLI::App& app) {
  auto* cmd = app.add_subcommand("identify", "binary-search state identification");
  struct IdParams {
    int count = 8, qubits = 3;
    double noise = 1e-3;
    long trials = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out;
  };
    auto opts = std::make_shared<IdParams>();
  cmd->add_option("--count", opts->count, "candidate set size");
  cmd->add_option("--qubits", opts->qubits);
  cmd->add_option("--noise", opts->noise, "per-test error epsilon");
  cmd->add_option("--trials", opts->trials);
  cmd->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
  cmd->add_option("--out", opts->out);
  cmd->callback([opts] {
    const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, true);
    json rows = json::array();
    for (long t = 0; t < opts->trials; ++t) {
      const std::uint64_t trial_seed = mix_seed(seed, static_cast<std::uint64_t>(t));
      Rng rng(trial_seed);
      const Matrix basis = haar_unitary(opts->qubits, rng.next_u64());
      require(2 * opts->count <= (1L << opts->qubits), "need room for noise directions");
      std::vector<PureState> candidates;
      for (int i = 0; i < opts->count; ++i)
        candidates.emplace_back(opts->qubits, Vector(basis.col(i)));
      canonical_sort(candidates);
      const int true_index = static_cast<int>(rng.uniform_int(opts->count));
      // Perturb into directions outside the candidate span: error exactly eps.
      Vector noisy = std::sqrt(1.0 - opts->noise) * candidates[true_index].amplitudes() +
                     std::sqrt(opts->noise) * basis.col(opts->count + true_index);
      IdentifyResult r =
          identify_state(PureState(opts->qubits, std::move(noisy)), candidates, rng.next_u64());
      rows.push_back(json{{"seed", trial_seed},
                          {"true_index", true_index},
                          {"returned_index", r.index},
                          {"success_probability", r.success_probability},
                          {"union_bound_floor", r.union_bound_floor},
                          {"queries", r.queries}});
    }
    json config{{"subcommand", "identify"}, {"count", opts->count}, {"qubits", opts->qubits},
                {"noise", opts->noise},     {"trials", opts->trials}, {"seed", seed}};
    emit_report(opts->out, config, json{{"trials", rows}});
  });
}

// ----------------------------------------------------------- protocol ----

void register_protocol(CLI::App& app, int& exit_code) {
  CLI::App* proto = app.add_subcommand("protocol", "interactive protocol runs");
  proto->require_subcommand(1);

  {
    auto* mx = proto->add_subcommand("mixedness", "mixedness-testing protocol");
    struct MxParams {
      std::string rho, out, mode = "exact", prover = "honest", promise_case = "yes";
      int lambda = 2, t = 16;
      std::uint64_t seed = 0;
      bool seed_given = false;
    };
    auto opts = std::make_shared<MxParams>();
    mx->add_option("--rho", opts->rho, "input density file (otherwise built from --case)");
    mx->add_option("--case", opts->promise_case)->check(CLI::IsMember({"yes", "no"}));
    mx->add_option("--lambda", opts->lambda);
    mx->add_option("--t", opts->t);
    mx->add_option("--prover", opts->prover)->check(CLI::IsMember({"honest", "zero"}));
    mx->add_option("--mode", opts->mode)->check(CLI::IsMember({"exact", "sampled"}));
    mx->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    mx->add_option("--out", opts->out);
    mx->callback([opts] {
      const bool sampled = opts->mode == "sampled";
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, sampled);
      DensityMatrix rho = DensityMatrix::maximally_mixed(opts->lambda);
      if (!opts->rho.empty()) {
        rho = load_density(opts->rho);
      } else if (opts->promise_case == "yes") {
        // Uniform state on a random half-dimensional subspace: TD exactly 1/2.
        const Matrix u = haar_unitary(opts->lambda, mix_seed(seed, 0xabcd));
        rho = DensityMatrix::uniform_on_subspace(
            opts->lambda, u.leftCols((1L << opts->lambda) / 2));
      }
      const MixednessProver prover = opts->prover == "honest"
                                         ? mixedness_honest_prover(rho)
                                         : mixedness_constant_zero_prover(rho.n_qubits());
      ProtocolTranscript tr = mixedness_protocol(
          rho, opts->t, prover, seed, sampled ? RunMode::kSampled : RunMode::kExact);
      json config{{"subcommand", "protocol mixedness"}, {"case", opts->promise_case},
                  {"lambda", opts->lambda},             {"t", opts->t},
                  {"prover", opts->prover},             {"mode", opts->mode},
                  {"seed", seed}};
      emit_report(opts->out, config, tr.to_json());
    });
  }

  {
    auto* me = proto->add_subcommand("maxent", "maximal-entanglement protocol");
    struct MeParams {
      std::string phi, out, mode = "exact", prover = "honest", promise_case = "yes";
      int lambda = 1, t = 4;
      std::uint64_t seed = 0;
      bool seed_given = false;
    };
    auto opts = std::make_shared<MeParams>();
    me->add_option("--phi", opts->phi, "input pure state on 2*lambda qubits");
    me->add_option("--case", opts->promise_case)->check(CLI::IsMember({"yes", "no"}));
    me->add_option("--lambda", opts->lambda);
    me->add_option("--t", opts->t);
    me->add_option("--prover", opts->prover)->check(CLI::IsMember({"honest", "identity"}));
    me->add_option("--mode", opts->mode)->check(CLI::IsMember({"exact", "sampled"}));
    me->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    me->add_option("--out", opts->out);
    me->callback([opts] {
      const bool sampled = opts->mode == "sampled";
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, sampled);
      PureState phi = PureState::zero(2 * opts->lambda);
      if (!opts->phi.empty()) {
        phi = load_pure(opts->phi);
      } else if (opts->promise_case == "yes") {
        // Random purification of the maximally mixed state.
        const long d = 1L << opts->lambda;
        Vector epr = Vector::Zero(d * d);
        for (long j = 0; j < d; ++j) epr(j + d * j) = 1.0 / std::sqrt(static_cast<double>(d));
        std::vector<int> b_qubits;
        for (int q = opts->lambda; q < 2 * opts->lambda; ++q) b_qubits.push_back(q);
        phi = PureState(2 * opts->lambda,
                        apply_on_qubits(haar_unitary(opts->lambda, mix_seed(seed, 0x5eed)),
                                        b_qubits, epr));
      } else {
        phi = tensor(PureState::zero(opts->lambda),
                     haar_state(opts->lambda, mix_seed(seed, 0x5eee)));
      }
      const MaxEntProver prover = opts->prover == "honest"
                                      ? maxent_honest_prover(phi)
                                      : maxent_identity_prover(opts->lambda);
      ProtocolTranscript tr = max_entangled_protocol(
          phi, opts->t, prover, seed, sampled ? RunMode::kSampled : RunMode::kExact);
      json config{{"subcommand", "protocol maxent"}, {"case", opts->promise_case},
                  {"lambda", opts->lambda},          {"t", opts->t},
                  {"prover", opts->prover},          {"mode", opts->mode},
                  {"seed", seed}};
      emit_report(opts->out, config, tr.to_json());
    });
  }

  {
    auto* cq = proto->add_subcommand("coqsdwp", "complement state-distinguishability protocol");
    struct CqParams {
      std::string phi, q0, q1, outputs = "0", out, mode = "exact", prover = "honest";
      int ancilla = 1, xor_copies = 1, power_copies = 1;
      bool polarize_flag = false;
      std::uint64_t seed = 0;
      bool seed_given = false;
    };
    auto opts = std::make_shared<CqParams>();
    cq->add_option("--phi", opts->phi)->required();
    cq->add_option("--q0", opts->q0)->required();
    cq->add_option("--q1", opts->q1)->required();
    cq->add_option("--outputs", opts->outputs, "comma-separated output qubit list");
    cq->add_option("--ancilla", opts->ancilla);
    cq->add_flag("--polarize", opts->polarize_flag);
    cq->add_option("--xor", opts->xor_copies);
    cq->add_option("--power", opts->power_copies);
    cq->add_option("--prover", opts->prover)->check(CLI::IsMember({"honest", "identity"}));
    cq->add_option("--mode", opts->mode)->check(CLI::IsMember({"exact", "sampled"}));
    cq->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    cq->add_option("--out", opts->out);
    cq->callback([opts] {
      const bool sampled = opts->mode == "sampled";
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, sampled);
      std::vector<int> outputs;
      for (const auto& piece : CLI::detail::split(opts->outputs, ','))
        outputs.push_back(std::stoi(piece));
      PurifiedPair pair = purified_outputs(circuit_from_json(load_json_file(opts->q0)),
                                           circuit_from_json(load_json_file(opts->q1)),
                                           load_pure(opts->phi), opts->ancilla, outputs);
      if (opts->polarize_flag) pair = polarize(pair, opts->xor_copies, opts->power_copies);
      const QsdProver prover =
          opts->prover == "honest" ? qsd_honest_prover(pair) : qsd_identity_prover(pair);
      ProtocolTranscript tr =
          coqsdwp_protocol(pair, prover, seed, sampled ? RunMode::kSampled : RunMode::kExact);
      json config{{"subcommand", "protocol coqsdwp"}, {"phi", opts->phi},
                  {"q0", opts->q0},                   {"q1", opts->q1},
                  {"outputs", opts->outputs},         {"polarize", opts->polarize_flag},
                  {"xor", opts->xor_copies},          {"power", opts->power_copies},
                  {"prover", opts->prover},           {"mode", opts->mode},
                  {"seed", seed}};
      emit_report(opts->out, config, tr.to_json());
    });
  }

  {
    auto* pc = proto->add_subcommand("publiccoin", "public-coin distinguishability protocol");
    struct PcParams {
      std::string phi, q0, q1, outputs = "0", out, mode = "exact", prover = "honest";
      int ancilla = 1;
      bool orthogonal_pair = false, cheat = false;
      std::uint64_t seed = 0;
      bool seed_given = false;
    };
    auto opts = std::make_shared<PcParams>();
    pc->add_option("--phi", opts->phi);
    pc->add_option("--q0", opts->q0);
    pc->add_option("--q1", opts->q1);
    pc->add_option("--outputs", opts->outputs);
    pc->add_option("--ancilla", opts->ancilla);
    pc->add_flag("--orthogonal-pair", opts->orthogonal_pair,
                 "built-in pair with orthogonal pure outputs");
    pc->add_flag("--cheat", opts->cheat, "report the optimal malicious value");
    pc->add_option("--prover", opts->prover)->check(CLI::IsMember({"honest", "identity"}));
    pc->add_option("--mode", opts->mode)->check(CLI::IsMember({"exact", "sampled"}));
    pc->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    pc->add_option("--out", opts->out);
    pc->callback([opts] {
      const bool sampled = opts->mode == "sampled";
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, sampled);
      PurifiedPair pair = [&] {
        if (opts->orthogonal_pair) {
          GateCircuit q0(2, {});
          GateCircuit q1(2, {Gate{GateKind::X, {0}}});
          return purified_outputs(q0, q1, PureState::zero(1), 1, {0});
        }
        require(!opts->phi.empty() && !opts->q0.empty() && !opts->q1.empty(),
                "pass --orthogonal-pair or --phi/--q0/--q1");
        std::vector<int> outputs;
        for (const auto& piece : CLI::detail::split(opts->outputs, ','))
          outputs.push_back(std::stoi(piece));
        return purified_outputs(circuit_from_json(load_json_file(opts->q0)),
                                circuit_from_json(load_json_file(opts->q1)),
                                load_pure(opts->phi), opts->ancilla, outputs);
      }();
      const QsdProver prover =
          opts->prover == "honest" ? qsd_honest_prover(pair) : qsd_identity_prover(pair);
      ProtocolTranscript tr =
          public_coin_qsd(pair, prover, seed, sampled ? RunMode::kSampled : RunMode::kExact);
      json result = tr.to_json();
      if (opts->cheat) {
        PublicCoinCheatValue cheat = public_coin_optimal_cheat(pair, mix_seed(seed, 0xc4ea7));
        result["optimal_cheat"] = cheat.value;
        result["cheat_bound"] = cheat.analytic_bound;
      }
      json config{{"subcommand", "protocol publiccoin"},
                  {"orthogonal_pair", opts->orthogonal_pair},
                  {"prover", opts->prover},
                  {"mode", opts->mode},
                  {"seed", seed}};
      emit_report(opts->out, config, result);
    });
  }

  {
    auto* ef = proto->add_subcommand("efi", "EFI distinguishing protocol");
    struct EfParams {
      std::string rho0, rho1, out, mode = "exact", promise_case = "no";
      double td = 0.9;
      int t = 10;
      std::uint64_t seed = 0;
      bool seed_given = false;
    };
    auto opts = std::make_shared<EfParams>();
    ef->add_option("--rho0", opts->rho0);
    ef->add_option("--rho1", opts->rho1);
    ef->add_option("--case", opts->promise_case)->check(CLI::IsMember({"yes", "no"}));
    ef->add_option("--td", opts->td, "trace distance of the built-in pair");
    ef->add_option("--t", opts->t);
    ef->add_option("--mode", opts->mode)->check(CLI::IsMember({"exact", "sampled"}));
    ef->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    ef->add_option("--out", opts->out);
    ef->callback([opts, &exit_code] {
      const bool sampled = opts->mode == "sampled";
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, sampled);
      DensityMatrix rho0 = DensityMatrix::maximally_mixed(1);
      DensityMatrix rho1 = rho0;
      if (!opts->rho0.empty() && !opts->rho1.empty()) {
        rho0 = load_density(opts->rho0);
        rho1 = load_density(opts->rho1);
      } else {
        Matrix m0 = Matrix::Zero(2, 2);
        m0(0, 0) = 0.5 * (1.0 + opts->td);
        m0(1, 1) = 0.5 * (1.0 - opts->td);
        Matrix m1 = Matrix::Zero(2, 2);
        m1(0, 0) = 0.5 * (1.0 - opts->td);
        m1(1, 1) = 0.5 * (1.0 + opts->td);
        rho0 = DensityMatrix(1, m0);
        rho1 = DensityMatrix(1, m1);
      }
      const bool yes_case = opts->promise_case == "yes";
      const DensityMatrix& rho_a = rho0;
      const DensityMatrix& rho_b = yes_case ? rho1 : rho0;
      ProtocolTranscript tr =
          efi_protocol(rho_a, rho_b, opts->t, efi_honest_prover(rho0, rho1), seed,
                       sampled ? RunMode::kSampled : RunMode::kExact);
      json config{{"subcommand", "protocol efi"}, {"case", opts->promise_case},
                  {"td", opts->td},               {"t", opts->t},
                  {"mode", opts->mode},           {"seed", seed}};
      emit_report(opts->out, config, tr.to_json());
      if (!yes_case) {
        const double expected = std::pow(2.0, -opts->t);
        if (std::abs(tr.stats.at("p_exact") - expected) > 1e-12) exit_code = 2;
      }
    });
  }
}

// ------------------------------------------------------------- crypto ----

void register_crypto(CLI::App& app, int& jobs) {
  CLI::App* crypto = app.add_subcommand("crypto", "desk-scale cryptographic games");
  crypto->require_subcommand(1);

  {
    auto* pr = crypto->add_subcommand("prs", "PRS oracle distinguishing game");
    struct PrsRun {
      std::string scheme, out, csv;
      int key_bits = 4, m = 4, depth = 24;
      long trials = 1000;
      std::uint64_t seed = 0;
      bool seed_given = false;
    };
    auto opts = std::make_shared<PrsRun>();
    pr->add_option("--scheme", opts->scheme, "scheme file (otherwise built from params)");
    pr->add_option("--key-bits", opts->key_bits);
    pr->add_option("--m", opts->m);
    pr->add_option("--depth", opts->depth);
    pr->add_option("--trials", opts->trials);
    pr->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    pr->add_option("--out", opts->out);
    pr->add_option("--csv", opts->csv);
    pr->callback([opts, &jobs] {
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, true);
      PrsScheme scheme = !opts->scheme.empty()
                             ? PrsScheme::from_json(load_json_file(opts->scheme))
                             : PrsScheme(opts->key_bits, opts->m, opts->depth,
                                         mix_seed(seed, 0x5c4e8e));
      (void)jobs;  // per-trial loop already cheap; kept sequential for exact CSV order
      PrsBreakResult res = prs_oracle_break(scheme, opts->trials, seed);
      std::vector<std::string> rows;
      for (const PrsBreakTrial& t : res.trials)
        rows.push_back(std::to_string(t.seed) + "," + (t.real_case ? "real" : "haar") + "," +
                       (t.oracle_verdict ? "1" : "0") + "," + fmt12(res.advantage));
      write_csv(opts->csv, "seed,case,oracle_verdict,advantage", rows);
      json config{{"subcommand", "crypto prs"}, {"key_bits", scheme.key_bits()},
                  {"m", scheme.m_qubits()},     {"trials", opts->trials},
                  {"seed", seed}};
      emit_report(opts->out, config,
                  json{{"advantage", res.advantage},
                       {"max_pairwise_overlap_sq", scheme.max_pairwise_overlap_sq()}});
    });
  }

  {
    auto* ow = crypto->add_subcommand("owsg", "OWSG key-recovery game");
    struct OwsgRun {
      std::string scheme, out, csv;
      int key_bits = 6, m = 6, depth = 32;
      long trials = 200, shots = 256;
      std::uint64_t seed = 0;
      bool seed_given = false;
    };
    auto opts = std::make_shared<OwsgRun>();
    ow->add_option("--scheme", opts->scheme);
    ow->add_option("--key-bits", opts->key_bits);
    ow->add_option("--m", opts->m);
    ow->add_option("--depth", opts->depth);
    ow->add_option("--trials", opts->trials);
    ow->add_option("--shots", opts->shots, "sampled swap tests per oracle estimate");
    ow->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    ow->add_option("--out", opts->out);
    ow->add_option("--csv", opts->csv);
    ow->callback([opts] {
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, true);
      PrsScheme scheme = !opts->scheme.empty()
                             ? PrsScheme::from_json(load_json_file(opts->scheme))
                             : PrsScheme(opts->key_bits, opts->m, opts->depth,
                                         mix_seed(seed, 0x0e5c));
      OwsgBreakResult res = owsg_break(scheme, opts->trials, opts->shots, seed);
      std::vector<std::string> rows;
      for (const OwsgBreakTrial& t : res.trials)
        rows.push_back(std::to_string(t.seed) + ",key," + (t.success ? "1" : "0") + "," +
                       fmt12(t.ver_acceptance));
      write_csv(opts->csv, "seed,case,oracle_verdict,advantage", rows);
      json config{{"subcommand", "crypto owsg"}, {"key_bits", scheme.key_bits()},
                  {"trials", opts->trials},      {"shots", opts->shots},
                  {"seed", seed}};
      emit_report(opts->out, config, json{{"success_rate", res.success_rate}});
    });
  }

  {
    auto* cm = crypto->add_subcommand("commit", "EPR commitment: hiding and binding games");
    struct CommitRun {
      int lambda = 2, k = 1, advice_qubits = 0;
      long trials = 10;
      std::string adversary = "identity", out, csv;
      std::uint64_t seed = 0;
      bool seed_given = false;
    };
    auto opts = std::make_shared<CommitRun>();
    cm->add_option("--lambda", opts->lambda);
    cm->add_option("--k", opts->k);
    cm->add_option("--trials", opts->trials, "random auxiliary unitaries T");
    cm->add_option("--adversary", opts->adversary)
        ->check(CLI::IsMember({"identity", "tinv", "haar"}));
    cm->add_option("--advice-qubits", opts->advice_qubits);
    cm->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
    cm->add_option("--out", opts->out);
    cm->add_option("--csv", opts->csv);
    cm->callback([opts] {
      const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, true);
      json rows = json::array();
      std::vector<std::string> csv_rows;
      double max_hiding = 0.0, max_half_sq = 0.0;
      for (long t = 0; t < opts->trials; ++t) {
        const std::uint64_t ts = mix_seed(seed, static_cast<std::uint64_t>(t));
        CommitmentSession session(opts->lambda, opts->k, haar_unitary(opts->lambda, ts));
        const double hiding = session.hiding_check();
        const int rz_qubits = opts->k * opts->lambda + opts->advice_qubits;
        Matrix adversary = Matrix::Identity(1L << rz_qubits, 1L << rz_qubits);
        if (opts->adversary == "tinv") {
          require(opts->advice_qubits == 0 && opts->k == 1, "tinv adversary needs k=1, no advice");
          adversary = session.t_unitary().adjoint();
        } else if (opts->adversary == "haar") {
          adversary = haar_unitary(rz_qubits, mix_seed(ts, 0xadff));
        }
        const PureState advice_state = PureState::zero(std::max(opts->advice_qubits, 0));
        BindingGameValues bind = binding_game_values(session, adversary, advice_state);
        // R-only adversary against HALF-type committed copies.
        const Matrix t1 = haar_unitary(opts->lambda, mix_seed(ts, 1));
        const Matrix t2 = haar_unitary(opts->lambda, mix_seed(ts, 2));
        PureState half = half_state(opts->lambda);
        std::vector<int> c_qubits, r_qubits;
        for (int q = 0; q < opts->lambda; ++q) c_qubits.push_back(q);
        for (int q = opts->lambda; q < 2 * opts->lambda; ++q) r_qubits.push_back(q);
        Vector hv = apply_on_qubits(t1, c_qubits, half.amplitudes());
        hv = apply_on_qubits(t2, r_qubits, hv);
        const double v10_half = b0_reveal_value(session, PureState(2 * opts->lambda, hv),
                                                adversary, advice_state);
        max_hiding = std::max(max_hiding, hiding);
        max_half_sq = std::max(max_half_sq, v10_half * v10_half);
        rows.push_back(json{{"seed", ts},
                            {"hiding_td", hiding},
                            {"v01", bind.v01},
                            {"v10", bind.v10},
                            {"v10_half_sq", v10_half * v10_half}});
        csv_rows.push_back(std::to_string(ts) + "," + fmt12(hiding) + "," + fmt12(bind.v01) +
                           "," + fmt12(bind.v10) + "," + fmt12(v10_half * v10_half));
      }
      write_csv(opts->csv, "seed,hiding_td,v01,v10,v10_half_sq", csv_rows);
      json config{{"subcommand", "crypto commit"}, {"lambda", opts->lambda}, {"k", opts->k},
                  {"adversary", opts->adversary},  {"trials", opts->trials}, {"seed", seed}};
      emit_report(opts->out, config,
                  json{{"max_hiding_td", max_hiding},
                       {"max_v10_half_sq", max_half_sq},
                       {"trials", rows}});
    });
  }
}

// ------------------------------------------------------------- metrics ----

void register_metrics(CLI::App& app, int& jobs) {
  auto* cmd = app.add_subcommand("metrics", "distance metrics and the property suite");
  struct MetricsRun {
    std::string state_a, state_b, out;
    bool suite = false;
    int qubits = 2;
    long trials = 500;
    std::uint64_t seed = 0;
    bool seed_given = false;
  };
    auto opts = std::make_shared<MetricsRun>();
  cmd->add_option("--state-a", opts->state_a);
  cmd->add_option("--state-b", opts->state_b);
  cmd->add_flag("--suite", opts->suite, "run the metric property suite");
  cmd->add_option("--qubits", opts->qubits);
  cmd->add_option("--trials", opts->trials);
  cmd->add_option("--seed", opts->seed)->each([opts](const std::string&) { opts->seed_given = true; });
  cmd->add_option("--out", opts->out);
  cmd->callback([opts, &jobs] {
    if (!opts->suite) {
      require(!opts->state_a.empty() && !opts->state_b.empty(),
              "pass --state-a/--state-b or --suite");
      const DensityMatrix a = load_density(opts->state_a);
      const DensityMatrix b = load_density(opts->state_b);
      json config{{"subcommand", "metrics"}, {"state_a", opts->state_a},
                  {"state_b", opts->state_b}};
      emit_report(opts->out, config,
                  json{{"trace_distance", trace_distance(a, b)}, {"fidelity", fidelity(a, b)}});
      return;
    }
    const std::uint64_t seed = resolve_seed(opts->seed, opts->seed_given, true);
    std::atomic<long> done{0};
    std::vector<double> worst(5, 0.0);
    std::mutex mu;
    parallel_trials(opts->trials, jobs, [&](long t) {
      const std::uint64_t ts = mix_seed(seed, static_cast<std::uint64_t>(t));
      const DensityMatrix a = random_density(opts->qubits, mix_seed(ts, 1));
      const DensityMatrix b = random_density(opts->qubits, mix_seed(ts, 2));
      const DensityMatrix c = random_density(opts->qubits, mix_seed(ts, 3));
      const double tab = trace_distance(a, b), tbc = trace_distance(b, c),
                   tac = trace_distance(a, c);
      const double fab = fidelity(a, b), fbc = fidelity(b, c), fac = fidelity(a, c);
      double v0 = tac - (tab + tbc);                                  // triangle
      double v1 = std::max(1.0 - fab - tab, tab - std::sqrt(1.0 - fab * fab));  // FvdG
      // monotonicity under partial trace on a 2-qubit pair
      const DensityMatrix a2 = random_density(2, mix_seed(ts, 4));
      const DensityMatrix b2 = random_density(2, mix_seed(ts, 5));
      const double v2 =
          fidelity(a2, b2) - fidelity(partial_trace(a2, {0}), partial_trace(b2, {0}));
      const double v3 = fab * fab + fbc * fbc - (1.0 + fac);  // fidelity inequality
      // tensor-power sandwich at l = 3
      const DensityMatrix a1 = random_density(1, mix_seed(ts, 6));
      const DensityMatrix b1 = random_density(1, mix_seed(ts, 7));
      const double eps = trace_distance(a1, b1);
      const double td3 = trace_distance(tensor_power(a1, 3), tensor_power(b1, 3));
      const double v4 = std::max((1.0 - std::exp(-3.0 * eps * eps)) - td3, td3 - 3.0 * eps);
      std::lock_guard<std::mutex> lock(mu);
      worst[0] = std::max(worst[0], v0);
      worst[1] = std::max(worst[1], v1);
      worst[2] = std::max(worst[2], v2);
      worst[3] = std::max(worst[3], v3);
      worst[4] = std::max(worst[4], v4);
      ++done;
    });
    json config{{"subcommand", "metrics suite"}, {"qubits", opts->qubits},
                {"trials", opts->trials},        {"seed", seed}};
    emit_report(opts->out, config,
                json{{"triangle_violation", worst[0]},
                     {"fuchs_van_de_graaf_violation", worst[1]},
                     {"monotonicity_violation", worst[2]},
                     {"fidelity_inequality_violation", worst[3]},
                     {"tensor_power_violation", worst[4]},
                     {"trials_done", done.load()}});
  });
}

}  // namespace

int cli_run(int argc, char** argv) {
  CLI::App app{"qplab: desk-scale laboratory for quantum promise problems"};
  app.require_subcommand(1);
  int exit_code = 0;
  int jobs = 1;
  app.add_option("--jobs", jobs, "worker threads across trials/instances");

  register_gen(app, exit_code);
  register_qor(app, exit_code);
  register_lhwp(app, exit_code);
  register_lhwm(app, exit_code);
  register_amplify(app);
  register_stod(app, exit_code, jobs);
  register_identify(app);
  register_protocol(app, exit_code);
  register_crypto(app, jobs);
  register_metrics(app, jobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const PromiseViolation& e) {
    std::cerr << "promise violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}

}  // namespace qplab
