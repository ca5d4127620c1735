#pragma once

// Bare operators on the truncated qubit (x) cavity space and the tensor
// primitives the rest of the library is built on.
//
// Joint basis ordering is qubit (x) cavity everywhere: joint index
// i = q * (n_max + 1) + n, with q = 0 for |e> and q = 1 for |g>.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rabi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Raised when a Lindblad integration or eigen-solve leaves its validity bounds.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Basis { bare, dressed };
enum class Subsystem { qubit, cavity };

const char* to_string(Basis b);

inline constexpr int kQubitDim = 2;
inline constexpr int kExcited = 0;
inline constexpr int kGround = 1;

/// Fock truncation {|0>, ..., |n_max>}.
class FockCutoff {
 public:
  static constexpr int kDefault = 50;

  FockCutoff() = default;
  explicit FockCutoff(int n_max);

  int n_max() const { return n_max_; }
  int cavity_dim() const { return n_max_ + 1; }
  int joint_dim() const { return kQubitDim * cavity_dim(); }

  friend bool operator==(const FockCutoff&, const FockCutoff&) = default;

 private:
  int n_max_ = kDefault;
};

struct ModelParams {
  double omega_c = 0.1;
  double omega_q = 10.0;
  double g = 0.0;

  /// Throws std::invalid_argument. With `constrained`, also enforces omega_c * omega_q = 1.
  void validate(bool constrained = false) const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct SubsystemDims {
  int qubit = kQubitDim;
  int cavity = FockCutoff::kDefault + 1;

  int joint() const { return qubit * cavity; }
  friend bool operator==(const SubsystemDims&, const SubsystemDims&) = default;
};

struct OperatorMatrix {
  Matrix data;
  Basis basis = Basis::bare;

  Eigen::Index dim() const { return data.rows(); }
};

struct DensityMatrix {
  Matrix data;
  Basis basis = Basis::bare;
  std::optional<SubsystemDims> dims;

  Eigen::Index dim() const { return data.rows(); }

  static DensityMatrix pure(const Vector& psi, Basis basis = Basis::bare,
                            std::optional<SubsystemDims> dims = std::nullopt);
};

struct DensityTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double min_eigenvalue = -1e-8;
};

/// Throws std::invalid_argument describing the first violated invariant.
void validate_density_matrix(const DensityMatrix& rho, const DensityTolerances& tol = {});

/// Largest elementwise |A - A^dagger|.
double hermiticity_defect(const Matrix& a);

OperatorMatrix identity(Eigen::Index dim, Basis basis = Basis::bare);

OperatorMatrix annihilation(FockCutoff cutoff);
OperatorMatrix number_operator(FockCutoff cutoff);

struct QubitOperators {
  OperatorMatrix sigma_z;
  OperatorMatrix sigma_plus;
  OperatorMatrix sigma_minus;
};

QubitOperators qubit_operators();

OperatorMatrix tensor_product(const OperatorMatrix& a, const OperatorMatrix& b);

/// Lifts a cavity operator to the joint space as I_2 (x) op.
OperatorMatrix embed_cavity(const OperatorMatrix& op);
/// Lifts a qubit operator to the joint space as op (x) I_cavity.
OperatorMatrix embed_qubit(const OperatorMatrix& op, FockCutoff cutoff);

/// omega_c a^dag a + (omega_q / 2) sigma_z + g (a + a^dag)(sigma_- + sigma_+).
OperatorMatrix build_hamiltonian(const ModelParams& p, FockCutoff cutoff);

/// sigma_z (x) (-1)^{a^dag a}; diagonal with entries +-1.
OperatorMatrix parity_operator(FockCutoff cutoff);

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);
OperatorMatrix partial_transpose(const DensityMatrix& rho, Subsystem on);

void require_same_basis(Basis a, Basis b, const char* what);

}  // namespace rabi
