#include "rabi/observables.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <spdlog/spdlog.h>

namespace rabi {

QfiGenerator QfiGenerator::quadrature_x(FockCutoff cutoff) {
  const auto a = annihilation(cutoff);
  return {GeneratorKind::quadrature_x,
          {(a.data + a.data.adjoint()) / std::numbers::sqrt2, Basis::bare}};
}

QfiGenerator QfiGenerator::number(FockCutoff cutoff) {
  return {GeneratorKind::number, number_operator(cutoff)};
}

QfiGenerator QfiGenerator::custom(OperatorMatrix m) {
  return {GeneratorKind::custom, std::move(m)};
}

Complex expectation_complex(const DensityMatrix& rho, const OperatorMatrix& op) {
  if (rho.dim() != op.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  require_same_basis(rho.basis, op.basis, "expectation");
  return rho.data.cwiseProduct(op.data.transpose()).sum();
}

double expectation(const DensityMatrix& rho, const OperatorMatrix& op) {
  const Complex v = expectation_complex(rho, op);
  if (std::abs(v.imag()) > 1e-8 && hermiticity_defect(op.data) < 1e-10) {
    spdlog::warn("expectation of Hermitian operator has imaginary part {:.3e}", v.imag());
  }
  return v.real();
}

double quantum_fisher_information(const DensityMatrix& rho_c, const QfiGenerator& gen) {
  const Matrix& g = gen.matrix.data;
  if (g.rows() != rho_c.dim()) throw std::invalid_argument("QFI: generator dimension mismatch");
  if (hermiticity_defect(g) > 1e-10) throw std::invalid_argument("QFI: generator is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_c.data);
  const RealVector& p = es.eigenvalues();
  const Matrix& psi = es.eigenvectors();
  const Matrix g_eig = psi.adjoint() * g * psi;
  const Matrix g2_eig = psi.adjoint() * (g * g) * psi;

  double first = 0.0;
  double correction = 0.0;
  const Eigen::Index d = p.size();
  for (Eigen::Index n = 0; n < d; ++n) {
    if (p(n) < kSpectralCutoff) continue;
    first += p(n) * (g2_eig(n, n).real() - std::norm(g_eig(n, n)));
    for (Eigen::Index m = 0; m < d; ++m) {
      if (m == n || p(m) < kSpectralCutoff) continue;
      correction += 8.0 * p(m) * p(n) / (p(m) + p(n)) * std::norm(g_eig(m, n));
    }
  }
  return std::max(0.0, 4.0 * first - correction);
}

double negativity_witness(const DensityMatrix& rho, Subsystem on) {
  const Matrix pt = partial_transpose(rho, on).data;
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (double l : es.eigenvalues()) {
    if (l < 0.0) sum -= l;
  }
  return sum;
}

double entropy_from_eigenvalues(const RealVector& lambda) {
  double s = 0.0;
  for (double l : lambda) {
    if (l > kSpectralCutoff) s -= l * std::log(l);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.data, Eigen::EigenvaluesOnly);
  return entropy_from_eigenvalues(es.eigenvalues());
}

double mutual_information(const DensityMatrix& rho, const RealVector& joint_eigenvalues) {
  const double sq = von_neumann_entropy(partial_trace(rho, Subsystem::qubit));
  const double sc = von_neumann_entropy(partial_trace(rho, Subsystem::cavity));
  return sq + sc - entropy_from_eigenvalues(joint_eigenvalues);
}

double mutual_information(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.data, Eigen::EigenvaluesOnly);
  return mutual_information(rho, es.eigenvalues());
}

double quadrature_variance(const DensityMatrix& rho, const DressedOperators& d, double theta) {
  const Complex phase = std::polar(1.0, theta);
  const Matrix x = (d.x_minus.data * phase + d.x_plus.data * std::conj(phase)) / std::numbers::sqrt2;
  const Complex mean = rho.data.cwiseProduct(x.transpose()).sum();
  const Complex second = rho.data.cwiseProduct((x * x).transpose()).sum();
  return second.real() - mean.real() * mean.real();
}

QuadratureMinimum min_quadrature_variance(const DensityMatrix& rho, const DressedOperators& d) {
  require_same_basis(rho.basis, d.x_plus.basis, "min_quadrature_variance");
  const Matrix& xp = d.x_plus.data;
  const Matrix& xm = d.x_minus.data;
  auto tr = [&](const Matrix& op) -> Complex { return rho.data.cwiseProduct(op.transpose()).sum(); };

  const Complex m = tr(xp);
  const double n_mp = tr(xm * xp).real();
  const double n_pm = tr(xp * xm).real();
  const Complex pp = tr(xp * xp);

  // V(theta) = A + Re[c e^{-2 i theta}]
  const double a = 0.5 * (n_mp + n_pm) - std::norm(m);
  const Complex c = pp - m * m;
  double theta = 0.5 * (std::arg(c) + std::numbers::pi);
  theta = std::fmod(theta, std::numbers::pi);
  if (theta < 0.0) theta += std::numbers::pi;
  return {a - std::abs(c), theta};
}

RealVector linspace(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("linspace: count must be >= 1");
  if (count == 1) return RealVector::Constant(1, lo);
  return RealVector::LinSpaced(count, lo, hi);
}

}  // namespace rabi
