#pragma once

#include <string>

#include <json.hpp>

#include "qplab/gates.hpp"
#include "qplab/state.hpp"

namespace qplab {

// File formats share schema version "qplab-1". Complex entries are [re, im]
// pairs; matrices are row-major; qubit 0 is the least significant bit.
inline constexpr const char* kSchemaVersion = "qplab-1";

nlohmann::json to_json(const PureState& s);
nlohmann::json to_json(const DensityMatrix& s);
nlohmann::json to_json(const HermitianOperator& s);
nlohmann::json to_json(const GateCircuit& c);

PureState pure_state_from_json(const nlohmann::json& j);
DensityMatrix density_from_json(const nlohmann::json& j);
HermitianOperator hermitian_from_json(const nlohmann::json& j);
GateCircuit circuit_from_json(const nlohmann::json& j);

nlohmann::json complex_matrix_to_json(const Matrix& m);
Matrix complex_matrix_from_json(const nlohmann::json& j);

void check_schema_version(const nlohmann::json& j);

// Read/write helpers; writes are deterministic byte-for-byte per content.
nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace qplab
