#include <cmath>

#include "rabi/dynamics.hpp"

namespace rabi {

double thermal_occupation(double delta, double temperature) {
  if (!(delta > 0.0)) throw std::invalid_argument("thermal_occupation: delta must be positive");
  if (temperature < 0.0) throw std::invalid_argument("thermal_occupation: negative temperature");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(delta / temperature);
}

RealMatrix relaxation_coefficients(const EigenSystem& es, const OperatorMatrix& bare_x,
                                   double gamma, double omega_0) {
  if (gamma < 0.0) throw std::invalid_argument("relaxation_coefficients: negative damping rate");
  if (!(omega_0 > 0.0)) throw std::invalid_argument("relaxation_coefficients: omega_0 must be positive");
  if (bare_x.dim() != es.dim()) throw std::invalid_argument("relaxation_coefficients: dimension mismatch");

  const Matrix c = es.states.adjoint() * (bare_x.data - bare_x.data.adjoint()) * es.states;
  const Eigen::Index d = es.dim();
  RealMatrix rates = RealMatrix::Zero(d, d);
  for (Eigen::Index k = 1; k < d; ++k) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double delta = es.energies(k) - es.energies(j);
      if (delta < kRateDegeneracy) continue;
      rates(j, k) = gamma * (delta / omega_0) * std::norm(c(j, k));
    }
  }
  return rates;
}

LindbladGenerator::LindbladGenerator(const RealVector& energies,
                                     const std::vector<RealMatrix>& channel_rates,
                                     double temperature)
    : energies_(energies) {
  const Eigen::Index d = energies.size();
  transitions_ = RealMatrix::Zero(d, d);
  for (const auto& rates : channel_rates) {
    if (rates.rows() != d || rates.cols() != d) {
      throw std::invalid_argument("LindbladGenerator: rate matrix dimension mismatch");
    }
    for (Eigen::Index k = 1; k < d; ++k) {
      for (Eigen::Index j = 0; j < k; ++j) {
        const double r = rates(j, k);
        if (r == 0.0) continue;
        const double nbar = thermal_occupation(energies(k) - energies(j), temperature);
        transitions_(j, k) += r * (1.0 + nbar);  // decay k -> j
        transitions_(k, j) += r * nbar;          // excitation j -> k
      }
    }
  }
  out_rates_ = transitions_.colwise().sum().transpose();

  coherence_factor_.resize(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index m = 0; m < d; ++m) {
      coherence_factor_(m, n) =
          Complex(-0.5 * (out_rates_(m) + out_rates_(n)), -(energies(m) - energies(n)));
    }
  }
}

std::vector<Jump> LindbladGenerator::jumps() const {
  std::vector<Jump> out;
  for (Eigen::Index k = 0; k < dim(); ++k) {
    for (Eigen::Index m = 0; m < dim(); ++m) {
      if (transitions_(m, k) != 0.0) out.push_back({m, k, transitions_(m, k)});
    }
  }
  return out;
}

void LindbladGenerator::apply(const Matrix& rho, Matrix& drho) const {
  const Eigen::Index d = dim();
  drho.resize(d, d);
  const Vector populations = rho.diagonal();
#pragma omp parallel for schedule(static)
  for (Eigen::Index n = 0; n < d; ++n) {
    drho.col(n) = coherence_factor_.col(n).cwiseProduct(rho.col(n));
    Complex gain = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) gain += transitions_(n, k) * populations(k);
    drho(n, n) += gain;
  }
}

LindbladGenerator make_generator(const EigenSystem& es, FockCutoff cutoff, const BathSpec& bath) {
  bath.validate();
  if (es.dim() != cutoff.joint_dim()) throw std::invalid_argument("make_generator: dimension mismatch");
  const auto a = embed_cavity(annihilation(cutoff));
  const auto sm = embed_qubit(qubit_operators().sigma_minus, cutoff);
  std::vector<RealMatrix> channels;
  channels.push_back(relaxation_coefficients(es, a, bath.gamma_c, bath.omega_0));
  channels.push_back(relaxation_coefficients(es, sm, bath.gamma_q, bath.omega_0));
  return LindbladGenerator(es.energies, channels, bath.temperature);
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho, const LindbladGenerator& gen) {
  require_same_basis(rho.basis, Basis::dressed, "lindblad_rhs");
  if (rho.dim() != gen.dim()) throw std::invalid_argument("lindblad_rhs: dimension mismatch");
  DensityMatrix out{Matrix(), Basis::dressed, rho.dims};
  gen.apply(rho.data, out.data);
  return out;
}

namespace reference {

Matrix lindblad_rhs_dense(const Matrix& rho, const RealVector& energies,
                          const std::vector<Jump>& jumps) {
  const Eigen::Index d = rho.rows();
  const Matrix h = energies.cast<Complex>().asDiagonal();
  const Complex i(0.0, 1.0);
  Matrix out = i * (rho * h - h * rho);
  for (const auto& jump : jumps) {
    Matrix l = Matrix::Zero(d, d);
    l(jump.to, jump.from) = 1.0;
    const Matrix ldl = l.adjoint() * l;
    out += jump.weight * (l * rho * l.adjoint() - 0.5 * (rho * ldl + ldl * rho));
  }
  return out;
}

}  // namespace reference

}  // namespace rabi
