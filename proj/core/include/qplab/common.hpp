#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qplab {

using cxd = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Hard cap on register width: dense O(8^n) eigensolves stay cheap below it.
inline constexpr int kMaxQubits = 12;

inline constexpr double kHermTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kNormTol = 1e-10;
inline constexpr double kSupportCutoff = 1e-12;
inline constexpr double kUnreachableProb = 1e-12;

class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// A constructed or observed object contradicts its promise (energy bound,
// overlap separation, case classification). CLI maps this to exit code 2.
class PromiseViolation : public std::runtime_error {
 public:
  explicit PromiseViolation(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

inline long dim_of(int n_qubits) {
  require(n_qubits >= 0 && n_qubits <= kMaxQubits,
          "register width " + std::to_string(n_qubits) + " outside [0," +
              std::to_string(kMaxQubits) + "]");
  return 1L << n_qubits;
}

inline int qubits_of_dim(long dim) {
  int n = 0;
  while ((1L << n) < dim) ++n;
  require((1L << n) == dim, "dimension is not a power of two");
  return n;
}

}  // namespace qplab
