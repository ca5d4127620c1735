#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rabi/operators.hpp"

namespace rabi {

enum class Quantity { gap, occupation, qfi, negativity, mutual_info, min_variance };

inline constexpr std::array<Quantity, 6> kAllQuantities = {
    Quantity::gap, Quantity::occupation, Quantity::qfi,
    Quantity::negativity, Quantity::mutual_info, Quantity::min_variance};

const char* to_string(Quantity q);
std::optional<Quantity> parse_quantity(const std::string& name);

struct SweepSpec {
  std::vector<double> g_values;
  std::vector<double> omega_c_values;
  /// Enforce omega_q = 1 / omega_c; otherwise `omega_q` is used at every point.
  bool constrained = true;
  double omega_q = 1.0;
  FockCutoff cutoff;
  std::vector<Quantity> quantities{kAllQuantities.begin(), kAllQuantities.end()};

  /// 40 x 20 grid: g in [0, 1], omega_c in [0.02, 0.5], constrained.
  static SweepSpec defaults();
  void validate() const;
  double omega_q_for(double omega_c) const { return constrained ? 1.0 / omega_c : omega_q; }

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// Ground-state quantities at one parameter point. Unrequested quantities are NaN.
struct PointRecord {
  double g = 0.0;
  double omega_c = 0.0;
  double omega_q = 0.0;
  std::array<double, kAllQuantities.size()> values{};
  bool converged = true;
  std::string reason;

  double value(Quantity q) const { return values[static_cast<std::size_t>(q)]; }
};

/// Ground state of H(g, omega_c, omega_q) and its requested quantities. The point is flagged
/// non-converged when the top five Fock levels hold more than 1e-6 population or the
/// mean-field occupation exceeds 0.6 n_max.
PointRecord compute_point(double g, double omega_c, double omega_q, FockCutoff cutoff,
                          const std::vector<Quantity>& quantities);

struct PhaseDiagramGrid {
  std::vector<double> g_values;
  std::vector<double> omega_c_values;
  std::vector<Quantity> quantities;
  /// Row-major in (g, omega_c): index = ig * omega_c_values.size() + ic.
  std::vector<PointRecord> points;

  /// |g_values| x |omega_c_values| matrix of one quantity.
  RealMatrix matrix(Quantity q) const;
  const PointRecord& at(std::size_t ig, std::size_t ic) const {
    return points[ig * omega_c_values.size() + ic];
  }
  std::size_t flagged() const;
};

/// Evaluates every grid point in parallel (workers <= 0 uses the OpenMP default).
PhaseDiagramGrid run_sweep(const SweepSpec& spec, int workers = 0);

namespace reference {

/// Serial sweep in row-major order; the parallel sweep must reproduce it bit for bit.
PhaseDiagramGrid run_sweep_serial(const SweepSpec& spec);

}  // namespace reference

}  // namespace rabi
