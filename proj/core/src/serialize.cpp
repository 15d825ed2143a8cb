#include "qplab/serialize.hpp"

#include <fstream>

namespace qplab {

using nlohmann::json;

namespace {

json complex_to_json(const cxd& z) { return json::array({z.real(), z.imag()}); }

cxd complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw PreconditionError("complex entry must be an [re, im] pair");
  return cxd(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

json complex_matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix complex_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw PreconditionError("matrix must be a non-empty array");
  const long rows = static_cast<long>(j.size());
  const long cols = static_cast<long>(j[0].size());
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (static_cast<long>(j[r].size()) != cols)
      throw PreconditionError("ragged matrix rows");
    for (long c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

void check_schema_version(const json& j) {
  if (!j.contains("version") || j["version"].get<std::string>() != kSchemaVersion)
    throw PreconditionError("schema version mismatch: expected " + std::string(kSchemaVersion));
}

json to_json(const PureState& s) {
  json amps = json::array();
  for (long i = 0; i < s.dim(); ++i) amps.push_back(complex_to_json(s.amplitudes()(i)));
  return json{{"version", kSchemaVersion},
              {"kind", "pure"},
              {"n_qubits", s.n_qubits()},
              {"amplitudes", std::move(amps)}};
}

json to_json(const DensityMatrix& s) {
  return json{{"version", kSchemaVersion},
              {"kind", "density"},
              {"n_qubits", s.n_qubits()},
              {"matrix", complex_matrix_to_json(s.matrix())}};
}

json to_json(const HermitianOperator& s) {
  return json{{"version", kSchemaVersion},
              {"kind", "hermitian"},
              {"n_qubits", s.n_qubits()},
              {"matrix", complex_matrix_to_json(s.matrix())}};
}

json to_json(const GateCircuit& c) {
  json gates = json::array();
  for (const Gate& g : c.gates())
    gates.push_back(json{{"name", gate_name(g.kind)}, {"qubits", g.qubits}});
  return json{{"version", kSchemaVersion}, {"n_qubits", c.n_qubits()}, {"gates", std::move(gates)}};
}

PureState pure_state_from_json(const json& j) {
  check_schema_version(j);
  const int n = j.at("n_qubits").get<int>();
  const json& amps = j.at("amplitudes");
  Vector v(static_cast<long>(amps.size()));
  for (long i = 0; i < v.size(); ++i) v(i) = complex_from_json(amps[i]);
  return PureState(n, std::move(v));
}

DensityMatrix density_from_json(const json& j) {
  check_schema_version(j);
  return DensityMatrix(j.at("n_qubits").get<int>(), complex_matrix_from_json(j.at("matrix")));
}

HermitianOperator hermitian_from_json(const json& j) {
  check_schema_version(j);
  return HermitianOperator(j.at("n_qubits").get<int>(), complex_matrix_from_json(j.at("matrix")));
}

GateCircuit circuit_from_json(const json& j) {
  if (j.contains("version")) check_schema_version(j);
  const int n = j.at("n_qubits").get<int>();
  std::vector<Gate> gates;
  for (const json& g : j.at("gates")) {
    Gate gate;
    gate.kind = gate_kind_from_name(g.at("name").get<std::string>());
    gate.qubits = g.at("qubits").get<std::vector<int>>();
    gates.push_back(std::move(gate));
  }
  return GateCircuit(n, std::move(gates));
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("parse error in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qplab
