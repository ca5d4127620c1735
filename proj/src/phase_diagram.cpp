#include "rabi/phase_diagram.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <omp.h>

#include "rabi/observables.hpp"
#include "rabi/spectrum.hpp"

namespace rabi {

const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::gap: return "gap";
    case Quantity::occupation: return "occupation";
    case Quantity::qfi: return "qfi";
    case Quantity::negativity: return "negativity";
    case Quantity::mutual_info: return "mutual_info";
    case Quantity::min_variance: return "min_variance";
  }
  return "?";
}

std::optional<Quantity> parse_quantity(const std::string& name) {
  for (Quantity q : kAllQuantities) {
    if (name == to_string(q)) return q;
  }
  return std::nullopt;
}

SweepSpec SweepSpec::defaults() {
  SweepSpec s;
  const RealVector g = linspace(0.0, 1.0, 40);
  const RealVector wc = linspace(0.02, 0.5, 20);
  s.g_values.assign(g.data(), g.data() + g.size());
  s.omega_c_values.assign(wc.data(), wc.data() + wc.size());
  return s;
}

void SweepSpec::validate() const {
  auto increasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] > v[i - 1])) return false;
    }
    return true;
  };
  if (g_values.empty() || omega_c_values.empty()) throw std::invalid_argument("sweep axes must be non-empty");
  if (!increasing(g_values) || !increasing(omega_c_values)) {
    throw std::invalid_argument("sweep axes must be strictly increasing");
  }
  if (g_values.front() < 0.0) throw std::invalid_argument("sweep g values must be non-negative");
  if (!(omega_c_values.front() > 0.0)) throw std::invalid_argument("sweep omega_c values must be positive");
  if (!constrained && !(omega_q > 0.0)) throw std::invalid_argument("sweep omega_q must be positive");
  if (quantities.empty()) throw std::invalid_argument("sweep must request at least one quantity");
}

PointRecord compute_point(double g, double omega_c, double omega_q, FockCutoff cutoff,
                          const std::vector<Quantity>& quantities) {
  PointRecord rec;
  rec.g = g;
  rec.omega_c = omega_c;
  rec.omega_q = omega_q;
  rec.values.fill(std::numeric_limits<double>::quiet_NaN());

  const ModelParams params{omega_c, omega_q, g};
  const EigenSystem es = solve_model(params, cutoff);
  const SubsystemDims dims{kQubitDim, cutoff.cavity_dim()};
  const DensityMatrix rho = DensityMatrix::pure(es.ground_state(), Basis::bare, dims);
  const DensityMatrix rho_c = partial_trace(rho, Subsystem::cavity);

  std::ostringstream reason;
  const int dc = cutoff.cavity_dim();
  const int top = std::min(5, dc);
  const double tail = rho_c.data.diagonal().real().tail(top).sum();
  if (tail > 1e-6) {
    rec.converged = false;
    reason << "top-" << top << " Fock population " << tail;
  }
  const double mf = mean_field_occupation(params);
  if (mf > 0.6 * cutoff.n_max()) {
    rec.converged = false;
    if (reason.tellp() > 0) reason << "; ";
    reason << "mean-field occupation " << mf << " > 0.6 n_max";
  }
  rec.reason = reason.str();

  auto set = [&](Quantity q, double v) { rec.values[static_cast<std::size_t>(q)] = v; };
  for (Quantity q : quantities) {
    switch (q) {
      case Quantity::gap:
        set(q, energy_gap(es));
        break;
      case Quantity::occupation:
        set(q, expectation(rho_c, number_operator(cutoff)));
        break;
      case Quantity::qfi:
        set(q, quantum_fisher_information(rho_c, QfiGenerator::quadrature_x(cutoff)));
        break;
      case Quantity::negativity:
        set(q, negativity_witness(rho));
        break;
      case Quantity::mutual_info: {
        // The ground state is pure: S_joint = 0 up to rounding, kept explicit.
        set(q, mutual_information(rho));
        break;
      }
      case Quantity::min_variance: {
        const DressedOperators d = dressed_operators(es, cutoff);
        Vector e0 = Vector::Zero(es.dim());
        e0(0) = 1.0;
        set(q, min_quadrature_variance(DensityMatrix::pure(e0, Basis::dressed, dims), d).v_min);
        break;
      }
    }
  }
  return rec;
}

namespace {

PointRecord safe_point(const SweepSpec& spec, std::size_t ig, std::size_t ic) {
  const double g = spec.g_values[ig];
  const double wc = spec.omega_c_values[ic];
  const double wq = spec.omega_q_for(wc);
  try {
    return compute_point(g, wc, wq, spec.cutoff, spec.quantities);
  } catch (const std::exception& e) {
    PointRecord rec;
    rec.g = g;
    rec.omega_c = wc;
    rec.omega_q = wq;
    rec.values.fill(std::numeric_limits<double>::quiet_NaN());
    rec.converged = false;
    rec.reason = std::string("error: ") + e.what();
    return rec;
  }
}

PhaseDiagramGrid empty_grid(const SweepSpec& spec) {
  PhaseDiagramGrid grid{spec.g_values, spec.omega_c_values, spec.quantities, {}};
  grid.points.resize(spec.g_values.size() * spec.omega_c_values.size());
  return grid;
}

}  // namespace

RealMatrix PhaseDiagramGrid::matrix(Quantity q) const {
  RealMatrix m(g_values.size(), omega_c_values.size());
  for (std::size_t ig = 0; ig < g_values.size(); ++ig) {
    for (std::size_t ic = 0; ic < omega_c_values.size(); ++ic) {
      m(static_cast<Eigen::Index>(ig), static_cast<Eigen::Index>(ic)) = at(ig, ic).value(q);
    }
  }
  return m;
}

std::size_t PhaseDiagramGrid::flagged() const {
  std::size_t n = 0;
  for (const auto& p : points) n += p.converged ? 0 : 1;
  return n;
}

PhaseDiagramGrid run_sweep(const SweepSpec& spec, int workers) {
  spec.validate();
  PhaseDiagramGrid grid = empty_grid(spec);
  const std::size_t nc = spec.omega_c_values.size();
  const auto total = static_cast<std::ptrdiff_t>(grid.points.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const auto i = static_cast<std::size_t>(idx);
    grid.points[i] = safe_point(spec, i / nc, i % nc);
  }
  return grid;
}

namespace reference {

PhaseDiagramGrid run_sweep_serial(const SweepSpec& spec) {
  spec.validate();
  PhaseDiagramGrid grid = empty_grid(spec);
  const std::size_t nc = spec.omega_c_values.size();
  for (std::size_t i = 0; i < grid.points.size(); ++i) grid.points[i] = safe_point(spec, i / nc, i % nc);
  return grid;
}

}  // namespace reference

}  // namespace rabi
