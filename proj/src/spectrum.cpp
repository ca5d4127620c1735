#include "rabi/spectrum.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace rabi {

namespace {

void fix_phase(Eigen::Ref<Vector> v) {
  const double vmax = v.cwiseAbs().maxCoeff();
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= vmax * (1.0 - 1e-9)) {
      pick = i;
      break;
    }
  }
  const Complex phase = std::conj(v(pick)) / std::abs(v(pick));
  v *= phase;
}

void require_hermitian(const OperatorMatrix& h) {
  if (h.data.rows() != h.data.cols() || h.data.rows() == 0) {
    throw std::invalid_argument("diagonalize: matrix must be square and non-empty");
  }
  if (hermiticity_defect(h.data) > 1e-10) {
    throw std::invalid_argument("diagonalize: matrix is not Hermitian");
  }
}

}  // namespace

EigenSystem diagonalize(const OperatorMatrix& h) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.data);
  if (solver.info() != Eigen::Success) throw NumericalError("diagonalize: eigensolver failed");
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors(), RealVector()};
  for (Eigen::Index k = 0; k < es.dim(); ++k) fix_phase(es.states.col(k));
  return es;
}

EigenSystem diagonalize(const OperatorMatrix& h, const OperatorMatrix& parity) {
  require_hermitian(h);
  const Eigen::Index d = h.dim();
  if (parity.dim() != d) throw std::invalid_argument("diagonalize: parity dimension mismatch");

  // Sector -1 first so that index 0 of `sectors` is the one holding |g,0>.
  std::vector<int> sector_index[2];
  for (Eigen::Index i = 0; i < d; ++i) {
    const double p = parity.data(i, i).real();
    sector_index[p > 0 ? 1 : 0].push_back(static_cast<int>(i));
  }

  RealVector sector_energies[2];
  Matrix sector_states[2];
  for (int s = 0; s < 2; ++s) {
    const auto& idx = sector_index[s];
    if (idx.empty()) continue;
    Matrix block = h.data(idx, idx);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(block);
    if (solver.info() != Eigen::Success) throw NumericalError("diagonalize: eigensolver failed");
    sector_energies[s] = solver.eigenvalues();
    sector_states[s] = solver.eigenvectors();
  }

  EigenSystem es;
  es.energies.resize(d);
  es.states = Matrix::Zero(d, d);
  es.parities.resize(d);
  Eigen::Index head[2] = {0, 0};
  for (Eigen::Index k = 0; k < d; ++k) {
    int take;
    const bool has0 = head[0] < sector_energies[0].size();
    const bool has1 = head[1] < sector_energies[1].size();
    if (!has1) {
      take = 0;
    } else if (!has0) {
      take = 1;
    } else {
      const double e0 = sector_energies[0](head[0]);
      const double e1 = sector_energies[1](head[1]);
      take = (std::abs(e0 - e1) < kDegeneracyTolerance || e0 < e1) ? 0 : 1;
    }
    const Eigen::Index col = head[take]++;
    es.energies(k) = sector_energies[take](col);
    es.parities(k) = take == 0 ? -1.0 : 1.0;
    const auto& idx = sector_index[take];
    for (std::size_t r = 0; r < idx.size(); ++r) {
      es.states(idx[r], k) = sector_states[take](static_cast<Eigen::Index>(r), col);
    }
    fix_phase(es.states.col(k));
  }
  return es;
}

EigenSystem solve_model(const ModelParams& p, FockCutoff cutoff) {
  return diagonalize(build_hamiltonian(p, cutoff), parity_operator(cutoff));
}

double energy_gap(const EigenSystem& es) {
  if (es.dim() < 2) throw std::invalid_argument("energy_gap: need at least two levels");
  return std::max(0.0, es.energies(1) - es.energies(0));
}

double critical_coupling(double omega_c, double omega_q) {
  if (!(omega_c > 0.0) || !(omega_q > 0.0)) {
    throw std::invalid_argument("critical_coupling: frequencies must be positive");
  }
  return std::sqrt(omega_c * omega_q) / 2.0;
}

double mean_field_occupation(const ModelParams& p) {
  const double gc = critical_coupling(p.omega_c, p.omega_q);
  if (p.g <= gc) return 0.0;
  const double ratio = std::pow(gc / p.g, 4);
  return (p.g * p.g) / (p.omega_c * p.omega_c) * (1.0 - ratio);
}

OperatorMatrix to_dressed(const EigenSystem& es, const OperatorMatrix& op) {
  if (op.dim() != es.dim()) throw std::invalid_argument("to_dressed: dimension mismatch");
  require_same_basis(op.basis, Basis::bare, "to_dressed");
  return {es.states.adjoint() * op.data * es.states, Basis::dressed};
}

DensityMatrix to_dressed(const EigenSystem& es, const DensityMatrix& rho) {
  if (rho.dim() != es.dim()) throw std::invalid_argument("to_dressed: dimension mismatch");
  require_same_basis(rho.basis, Basis::bare, "to_dressed");
  return {es.states.adjoint() * rho.data * es.states, Basis::dressed, rho.dims};
}

DensityMatrix to_bare(const EigenSystem& es, const DensityMatrix& rho) {
  if (rho.dim() != es.dim()) throw std::invalid_argument("to_bare: dimension mismatch");
  require_same_basis(rho.basis, Basis::dressed, "to_bare");
  return {es.states * rho.data * es.states.adjoint(), Basis::bare, rho.dims};
}

FrequencyPair dressed_frequency_operators(const EigenSystem& es, const OperatorMatrix& bare_x) {
  const Matrix full = to_dressed(es, bare_x).data;
  Matrix plus = full.triangularView<Eigen::StrictlyUpper>();
  Matrix minus = plus.adjoint();
  return {{plus, Basis::dressed}, {minus, Basis::dressed}};
}

DressedOperators dressed_operators(const EigenSystem& es, FockCutoff cutoff) {
  const auto a = annihilation(cutoff);
  const auto q = qubit_operators();
  const OperatorMatrix x = embed_cavity({a.data + a.data.adjoint(), Basis::bare});
  const OperatorMatrix s = embed_qubit({q.sigma_minus.data + q.sigma_plus.data, Basis::bare}, cutoff);
  auto cav = dressed_frequency_operators(es, x);
  auto qub = dressed_frequency_operators(es, s);
  return {std::move(cav.plus), std::move(cav.minus), std::move(qub.plus), std::move(qub.minus)};
}

}  // namespace rabi
