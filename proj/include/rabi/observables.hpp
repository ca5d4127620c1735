#pragma once

#include "rabi/operators.hpp"
#include "rabi/spectrum.hpp"

namespace rabi {

/// Eigenvalues below this are dropped from entropy and Fisher-information sums.
inline constexpr double kSpectralCutoff = 1e-12;

enum class GeneratorKind { quadrature_x, number, custom };

/// Phase-shift generator acting on the cavity.
struct QfiGenerator {
  GeneratorKind kind = GeneratorKind::quadrature_x;
  OperatorMatrix matrix;

  /// (a + a^dag) / sqrt(2).
  static QfiGenerator quadrature_x(FockCutoff cutoff);
  static QfiGenerator number(FockCutoff cutoff);
  static QfiGenerator custom(OperatorMatrix m);
};

/// Re Tr[rho O]; logs a warning when O is Hermitian but the trace has an imaginary part.
double expectation(const DensityMatrix& rho, const OperatorMatrix& op);
Complex expectation_complex(const DensityMatrix& rho, const OperatorMatrix& op);

/// Spectral form: 4 sum_n p_n Var_n(G) - sum_{m != n} 8 p_m p_n / (p_m + p_n) |G_mn|^2.
double quantum_fisher_information(const DensityMatrix& rho_c, const QfiGenerator& gen);

/// Sum of |lambda| over negative eigenvalues of the partial transpose.
double negativity_witness(const DensityMatrix& rho, Subsystem on = Subsystem::qubit);

/// -sum lambda ln lambda over lambda > kSpectralCutoff.
double entropy_from_eigenvalues(const RealVector& lambda);
double von_neumann_entropy(const DensityMatrix& rho);

/// S_qubit + S_cavity - S_joint.
double mutual_information(const DensityMatrix& rho);

/// Mutual information with the joint spectrum supplied by the caller.
double mutual_information(const DensityMatrix& rho, const RealVector& joint_eigenvalues);

struct QuadratureMinimum {
  double v_min = 0.0;
  double theta_min = 0.0;  // in [0, pi)
};

/// Variance of X(theta) = (X- e^{i theta} + X+ e^{-i theta}) / sqrt(2) by direct evaluation.
double quadrature_variance(const DensityMatrix& rho, const DressedOperators& d, double theta);

/// Closed-form minimum over theta: V(theta) = A + B cos 2theta + C sin 2theta.
QuadratureMinimum min_quadrature_variance(const DensityMatrix& rho, const DressedOperators& d);

/// W(x, p) sampled on a rectangular grid; values(i, j) = W(x_i, p_j).
struct WignerGrid {
  RealVector x_values;
  RealVector p_values;
  RealMatrix values;

  /// Riemann sum of W dx dp on the (uniform) grid.
  double integral() const;
  /// Integral of W over p at each x.
  RealVector x_marginal() const;
};

/// Wigner function of a cavity state with alpha = (x + i p) / sqrt(2):
/// W = (1 / pi) Tr[rho D(alpha) Pi D(alpha)^dag], using exact Fock matrix elements of the
/// displacement (no truncation error at large |alpha|). Grid points are evaluated in parallel.
WignerGrid wigner_function(const DensityMatrix& rho_c, const RealVector& x, const RealVector& p);

/// Uniform grid helper: `count` points from lo to hi inclusive.
RealVector linspace(double lo, double hi, int count);

}  // namespace rabi
