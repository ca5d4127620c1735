#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rabi/observables.hpp"
#include "rabi/operators.hpp"
#include "rabi/spectrum.hpp"

namespace rabi {

/// Dressed transitions with Delta below this carry no rate.
inline constexpr double kRateDegeneracy = 1e-9;

struct BathSpec {
  double gamma_c = 0.0;
  double gamma_q = 0.0;
  double temperature = 0.0;
  double omega_0 = 1.0;

  /// gamma_c = gamma_q = 0.01 omega_c, T = 0, omega_0 = omega_c.
  static BathSpec defaults_for(const ModelParams& p);
  void validate() const;

  friend bool operator==(const BathSpec&, const BathSpec&) = default;
};

/// Canonical observable names, also the quench CSV column order after `t`.
inline const std::vector<std::string> kQuenchObservables = {
    "f", "occupation", "qfi", "negativity", "mutual_info", "min_variance"};

struct QuenchProtocol {
  double g0 = 0.0;
  double g_prime = 0.3;
  double t_max = 100.0;
  double dt = 1e-3;
  int record_stride = 100;
  std::vector<std::string> observables = kQuenchObservables;
  std::vector<double> snapshot_times;

  /// g' = g0 + 0.3, t_max = 100, dt = 0.01 / omega_q, records every 0.1 time units.
  static QuenchProtocol defaults_for(double g0, const ModelParams& p);
  void validate() const;
  bool tracks(const std::string& name) const;

  friend bool operator==(const QuenchProtocol&, const QuenchProtocol&) = default;
};

/// 1 / (exp(delta / T) - 1); exactly 0 at T = 0.
double thermal_occupation(double delta, double temperature);

/// Gamma(j, k) = gamma (Delta_kj / omega_0) |<j|(x - x^dag)|k>|^2 for j < k, zero elsewhere
/// and for quasi-degenerate pairs.
RealMatrix relaxation_coefficients(const EigenSystem& es, const OperatorMatrix& bare_x,
                                   double gamma, double omega_0);

/// A single dressed jump |to><from| with its dissipator weight.
struct Jump {
  Eigen::Index to;
  Eigen::Index from;
  double weight;
};

/// Dressed-basis Lindblad generator with thermal decay and excitation channels.
///
/// Every jump operator is a dressed projector |j><k|, so the generator acts as
///   drho_mn = (-i (w_m - w_n) - (G_m + G_n) / 2) rho_mn + delta_mn sum_k W_mk rho_kk
/// with W_mk the total rate k -> m and G_m the total rate out of level m.
class LindbladGenerator {
 public:
  /// `channel_rates` are relaxation-coefficient matrices, one per dissipation channel.
  LindbladGenerator(const RealVector& energies, const std::vector<RealMatrix>& channel_rates,
                    double temperature);

  Eigen::Index dim() const { return energies_.size(); }
  const RealVector& energies() const { return energies_; }
  /// transitions()(m, k) is the rate from level k to level m.
  const RealMatrix& transitions() const { return transitions_; }
  const RealVector& out_rates() const { return out_rates_; }
  std::vector<Jump> jumps() const;

  /// drho = L[rho]; columns are processed in parallel.
  void apply(const Matrix& rho, Matrix& drho) const;

 private:
  RealVector energies_;
  RealMatrix transitions_;
  RealVector out_rates_;
  Matrix coherence_factor_;
};

/// Builds the generator for H(p): cavity channel x = a, qubit channel x = sigma_-.
LindbladGenerator make_generator(const EigenSystem& es, FockCutoff cutoff, const BathSpec& bath);

/// Right-hand side of the master equation for a dressed-basis state.
DensityMatrix lindblad_rhs(const DensityMatrix& rho, const LindbladGenerator& gen);

namespace reference {

/// Serial dense evaluation of -i[H, rho] + sum_jumps w D[L] rho with explicit |to><from| matrices.
Matrix lindblad_rhs_dense(const Matrix& rho, const RealVector& energies,
                          const std::vector<Jump>& jumps);

}  // namespace reference

struct EvolveOptions {
  double dt = 1e-3;
  std::size_t steps = 0;
  int record_stride = 1;
  /// Extra steps at which the observer is invoked (e.g. Wigner snapshots).
  std::vector<std::size_t> extra_records;
  double step_trace_tolerance = 1e-10;
  double record_trace_tolerance = 1e-8;
  double clip_threshold = 1e-12;
  double positivity_tolerance = 1e-6;
};

struct TrajectoryDiagnostics {
  std::size_t steps = 0;
  std::size_t records = 0;
  std::size_t clip_events = 0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 1.0;
  double max_hermiticity_defect = 0.0;
};

/// Called at every recorded step with the (validated) state and its spectrum.
using Observer = std::function<void(std::size_t step, double t, const DensityMatrix& rho,
                                    const RealVector& eigenvalues)>;

/// Fixed-step RK4 integration. Throws NumericalError when the trace drifts by more than
/// `step_trace_tolerance` in one step or a recorded state violates positivity.
TrajectoryDiagnostics evolve(const DensityMatrix& rho0, const LindbladGenerator& gen,
                             const EvolveOptions& opts, const Observer& observer);

/// f = -ln G with G = sqrt(<psi0|rho|psi0>) floored at 1e-300.
double return_rate(const Vector& psi0, const DensityMatrix& rho_t);

struct WignerSnapshot {
  double time = 0.0;
  WignerGrid grid;
};

struct QuenchResult {
  std::vector<double> times;
  std::map<std::string, std::vector<double>> series;
  std::vector<WignerSnapshot> wigner_snapshots;
  TrajectoryDiagnostics diagnostics;
};

struct SnapshotGrid {
  RealVector x;
  RealVector p;
};

/// Sudden quench H(g0) -> H(g'): starts in the pure ground state of H(g0) and evolves under
/// the dressed master equation of H(g'). `p.g` is ignored.
QuenchResult run_quench(const ModelParams& p, FockCutoff cutoff, const QuenchProtocol& protocol,
                        const BathSpec& bath, const SnapshotGrid& snapshot_grid = {});

struct CuspReport {
  std::size_t events = 0;
  double median_curvature = 0.0;
  double max_curvature = 0.0;
  std::vector<std::size_t> indices;
};

/// Flags sign changes of the discrete second difference of `f` where the larger of the two
/// straddling |second differences| exceeds `factor` times their median.
CuspReport detect_cusps(const std::vector<double>& f, double factor = 10.0);

}  // namespace rabi
