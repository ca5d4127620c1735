#include "rabi/operators.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace rabi {

const char* to_string(Basis b) { return b == Basis::bare ? "bare" : "dressed"; }

FockCutoff::FockCutoff(int n_max) : n_max_(n_max) {
  if (n_max < 1) {
    throw std::invalid_argument("Fock cutoff n_max must be >= 1, got " + std::to_string(n_max));
  }
}

void ModelParams::validate(bool constrained) const {
  if (!(omega_c > 0.0) || !std::isfinite(omega_c)) {
    throw std::invalid_argument("omega_c must be positive and finite");
  }
  if (!(omega_q > 0.0) || !std::isfinite(omega_q)) {
    throw std::invalid_argument("omega_q must be positive and finite");
  }
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw std::invalid_argument("coupling g must be non-negative and finite");
  }
  if (constrained && std::abs(omega_c * omega_q - 1.0) > 1e-12) {
    throw std::invalid_argument("constrained sweep requires omega_c * omega_q = 1");
  }
}

DensityMatrix DensityMatrix::pure(const Vector& psi, Basis basis,
                                  std::optional<SubsystemDims> dims) {
  return DensityMatrix{psi * psi.adjoint(), basis, dims};
}

double hermiticity_defect(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

void validate_density_matrix(const DensityMatrix& rho, const DensityTolerances& tol) {
  if (rho.data.rows() != rho.data.cols() || rho.data.rows() == 0) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
  if (rho.dims && rho.dims->joint() != rho.dim()) {
    throw std::invalid_argument("subsystem dimensions do not match the density matrix");
  }
  const double herm = hermiticity_defect(rho.data);
  if (herm > tol.hermiticity) {
    std::ostringstream os;
    os << "density matrix not Hermitian (defect " << herm << ")";
    throw std::invalid_argument(os.str());
  }
  const Complex tr = rho.data.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream os;
    os << "density matrix trace " << tr.real() << " differs from 1";
    throw std::invalid_argument(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.data, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < tol.min_eigenvalue) {
    std::ostringstream os;
    os << "density matrix has eigenvalue " << es.eigenvalues()(0);
    throw std::invalid_argument(os.str());
  }
}

void require_same_basis(Basis a, Basis b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": basis mismatch (" + to_string(a) +
                                " vs " + to_string(b) + ")");
  }
}

OperatorMatrix identity(Eigen::Index dim, Basis basis) {
  return {Matrix::Identity(dim, dim), basis};
}

OperatorMatrix annihilation(FockCutoff cutoff) {
  const int d = cutoff.cavity_dim();
  Matrix a = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {a, Basis::bare};
}

OperatorMatrix number_operator(FockCutoff cutoff) {
  const int d = cutoff.cavity_dim();
  Matrix n = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return {n, Basis::bare};
}

QubitOperators qubit_operators() {
  Matrix sz = Matrix::Zero(2, 2);
  sz(kExcited, kExcited) = 1.0;
  sz(kGround, kGround) = -1.0;
  Matrix sp = Matrix::Zero(2, 2);
  sp(kExcited, kGround) = 1.0;
  return {{sz, Basis::bare}, {sp, Basis::bare}, {sp.adjoint(), Basis::bare}};
}

OperatorMatrix tensor_product(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a.basis, b.basis, "tensor_product");
  const Eigen::Index ra = a.data.rows(), ca = a.data.cols();
  const Eigen::Index rb = b.data.rows(), cb = b.data.cols();
  Matrix out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i) {
    for (Eigen::Index j = 0; j < ca; ++j) {
      out.block(i * rb, j * cb, rb, cb) = a.data(i, j) * b.data;
    }
  }
  return {out, a.basis};
}

OperatorMatrix embed_cavity(const OperatorMatrix& op) {
  return tensor_product(identity(kQubitDim, op.basis), op);
}

OperatorMatrix embed_qubit(const OperatorMatrix& op, FockCutoff cutoff) {
  return tensor_product(op, identity(cutoff.cavity_dim(), op.basis));
}

OperatorMatrix build_hamiltonian(const ModelParams& p, FockCutoff cutoff) {
  p.validate();
  const auto a = annihilation(cutoff);
  const auto q = qubit_operators();
  const Matrix x = a.data + a.data.adjoint();
  const Matrix sx = q.sigma_minus.data + q.sigma_plus.data;

  Matrix h = p.omega_c * embed_cavity(number_operator(cutoff)).data +
             0.5 * p.omega_q * embed_qubit(q.sigma_z, cutoff).data +
             p.g * tensor_product({sx, Basis::bare}, {x, Basis::bare}).data;
  return {h, Basis::bare};
}

OperatorMatrix parity_operator(FockCutoff cutoff) {
  const int dc = cutoff.cavity_dim();
  Matrix pi = Matrix::Zero(cutoff.joint_dim(), cutoff.joint_dim());
  for (int q = 0; q < kQubitDim; ++q) {
    const double sz = q == kExcited ? 1.0 : -1.0;
    for (int n = 0; n < dc; ++n) pi(q * dc + n, q * dc + n) = (n % 2 == 0) ? sz : -sz;
  }
  return {pi, Basis::bare};
}

namespace {

const SubsystemDims& require_dims(const DensityMatrix& rho, const char* what) {
  if (!rho.dims) throw std::invalid_argument(std::string(what) + ": missing subsystem dimensions");
  if (rho.dims->joint() != rho.dim()) {
    throw std::invalid_argument(std::string(what) + ": subsystem dimensions do not match matrix");
  }
  return *rho.dims;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  const auto& d = require_dims(rho, "partial_trace");
  const int dq = d.qubit, dc = d.cavity;
  if (keep == Subsystem::cavity) {
    Matrix out = Matrix::Zero(dc, dc);
    for (int q = 0; q < dq; ++q) out += rho.data.block(q * dc, q * dc, dc, dc);
    return {out, rho.basis, std::nullopt};
  }
  Matrix out(dq, dq);
  for (int a = 0; a < dq; ++a) {
    for (int b = 0; b < dq; ++b) out(a, b) = rho.data.block(a * dc, b * dc, dc, dc).trace();
  }
  return {out, rho.basis, std::nullopt};
}

OperatorMatrix partial_transpose(const DensityMatrix& rho, Subsystem on) {
  const auto& d = require_dims(rho, "partial_transpose");
  const int dq = d.qubit, dc = d.cavity;
  Matrix out(rho.dim(), rho.dim());
  for (int a = 0; a < dq; ++a) {
    for (int b = 0; b < dq; ++b) {
      if (on == Subsystem::qubit) {
        out.block(a * dc, b * dc, dc, dc) = rho.data.block(b * dc, a * dc, dc, dc);
      } else {
        out.block(a * dc, b * dc, dc, dc) = rho.data.block(a * dc, b * dc, dc, dc).transpose();
      }
    }
  }
  return {out, rho.basis};
}

}  // namespace rabi
