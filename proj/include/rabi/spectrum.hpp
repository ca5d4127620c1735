#pragma once

#include "rabi/operators.hpp"

namespace rabi {

/// Levels closer than this are treated as degenerate when ordering.
inline constexpr double kDegeneracyTolerance = 1e-10;

/// Ascending spectrum with column eigenvectors expressed in the bare basis.
///
/// Each eigenvector carries a fixed global phase: its largest-magnitude
/// component is real and positive. When diagonalized with a parity operator,
/// `parities(k)` holds the parity eigenvalue of level k and degenerate pairs are
/// ordered with the sector of |g,0> (parity -1) first.
struct EigenSystem {
  RealVector energies;
  Matrix states;
  RealVector parities;

  Eigen::Index dim() const { return energies.size(); }
  Vector state(Eigen::Index k) const { return states.col(k); }
  Vector ground_state() const { return states.col(0); }
};

EigenSystem diagonalize(const OperatorMatrix& h);

/// Diagonalizes within the +-1 sectors of a diagonal parity operator that commutes with `h`.
EigenSystem diagonalize(const OperatorMatrix& h, const OperatorMatrix& parity);

/// Builds H(p) and diagonalizes it parity-resolved.
EigenSystem solve_model(const ModelParams& p, FockCutoff cutoff);

double energy_gap(const EigenSystem& es);

/// sqrt(omega_c * omega_q) / 2.
double critical_coupling(double omega_c, double omega_q);

/// Mean-field cavity occupation (g^2 / omega_c^2)(1 - g_c^4 / g^4) above g_c, zero below.
double mean_field_occupation(const ModelParams& p);

struct FrequencyPair {
  OperatorMatrix plus;
  OperatorMatrix minus;
};

/// Energy-ordered split of a bare operator: X+ = sum_{j<k} X_jk |j><k|, X- = (X+)^dagger.
FrequencyPair dressed_frequency_operators(const EigenSystem& es, const OperatorMatrix& bare_x);

struct DressedOperators {
  OperatorMatrix x_plus;
  OperatorMatrix x_minus;
  OperatorMatrix s_plus;
  OperatorMatrix s_minus;
};

/// Cavity pair from a + a^dag, qubit pair from sigma_- + sigma_+.
DressedOperators dressed_operators(const EigenSystem& es, FockCutoff cutoff);

OperatorMatrix to_dressed(const EigenSystem& es, const OperatorMatrix& op);
DensityMatrix to_dressed(const EigenSystem& es, const DensityMatrix& rho);
DensityMatrix to_bare(const EigenSystem& es, const DensityMatrix& rho);

}  // namespace rabi
