#include "rabi/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>
#include <spdlog/spdlog.h>

namespace rabi {

BathSpec BathSpec::defaults_for(const ModelParams& p) {
  return {0.01 * p.omega_c, 0.01 * p.omega_c, 0.0, p.omega_c};
}

void BathSpec::validate() const {
  if (!(gamma_c >= 0.0) || !(gamma_q >= 0.0)) throw std::invalid_argument("damping rates must be non-negative");
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("temperature must be non-negative and finite");
  }
  if (!(omega_0 > 0.0)) throw std::invalid_argument("omega_0 must be positive");
}

QuenchProtocol QuenchProtocol::defaults_for(double g0, const ModelParams& p) {
  QuenchProtocol q;
  q.g0 = g0;
  q.g_prime = g0 + 0.3;
  q.t_max = 100.0;
  q.dt = 0.01 / p.omega_q;
  q.record_stride = std::max(1, static_cast<int>(std::lround(0.1 / q.dt)));
  return q;
}

void QuenchProtocol::validate() const {
  if (!(g0 >= 0.0) || !(g_prime >= 0.0)) throw std::invalid_argument("couplings must be non-negative");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t_max >= dt)) throw std::invalid_argument("t_max must be at least dt");
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  for (const auto& name : observables) {
    if (std::find(kQuenchObservables.begin(), kQuenchObservables.end(), name) == kQuenchObservables.end()) {
      throw std::invalid_argument("unknown quench observable '" + name + "'");
    }
  }
  for (double t : snapshot_times) {
    if (t < 0.0 || t > t_max) throw std::invalid_argument("snapshot time outside [0, t_max]");
  }
}

bool QuenchProtocol::tracks(const std::string& name) const {
  return std::find(observables.begin(), observables.end(), name) != observables.end();
}

TrajectoryDiagnostics evolve(const DensityMatrix& rho0, const LindbladGenerator& gen,
                             const EvolveOptions& opts, const Observer& observer) {
  require_same_basis(rho0.basis, Basis::dressed, "evolve");
  if (rho0.dim() != gen.dim()) throw std::invalid_argument("evolve: dimension mismatch");
  if (!(opts.dt > 0.0) || opts.record_stride < 1) throw std::invalid_argument("evolve: bad step options");

  const std::set<std::size_t> extra(opts.extra_records.begin(), opts.extra_records.end());
  TrajectoryDiagnostics diag;
  diag.steps = opts.steps;

  const Eigen::Index d = gen.dim();
  Matrix rho = rho0.data;
  Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
  const double h = opts.dt;

  auto record = [&](std::size_t step) {
    const Complex tr = rho.trace();
    const double drift = std::abs(tr - 1.0);
    diag.max_trace_drift = std::max(diag.max_trace_drift, drift);
    if (!(drift <= opts.record_trace_tolerance)) {
      throw NumericalError("evolve: trace drifted to " + std::to_string(tr.real()) + " at step " +
                           std::to_string(step));
    }
    diag.max_hermiticity_defect = std::max(diag.max_hermiticity_defect, hermiticity_defect(rho));
    rho = 0.5 * (rho + rho.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    RealVector lambda = es.eigenvalues();
    diag.min_eigenvalue = std::min(diag.min_eigenvalue, lambda(0));
    if (!(lambda(0) >= -opts.positivity_tolerance)) {
      throw NumericalError("evolve: state lost positivity (eigenvalue " + std::to_string(lambda(0)) +
                           ") at step " + std::to_string(step));
    }
    if (lambda(0) < -opts.clip_threshold) {
      lambda = lambda.cwiseMax(0.0);
      lambda /= lambda.sum();
      rho = es.eigenvectors() * lambda.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
      ++diag.clip_events;
    }
    ++diag.records;
    if (observer) {
      observer(step, static_cast<double>(step) * h, DensityMatrix{rho, Basis::dressed, rho0.dims}, lambda);
    }
  };

  record(0);
  for (std::size_t step = 1; step <= opts.steps; ++step) {
    const Complex tr_before = rho.trace();
    gen.apply(rho, k1);
    tmp = rho + (0.5 * h) * k1;
    gen.apply(tmp, k2);
    tmp = rho + (0.5 * h) * k2;
    gen.apply(tmp, k3);
    tmp = rho + h * k3;
    gen.apply(tmp, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double step_drift = std::abs(rho.trace() - tr_before);
    if (!(step_drift <= opts.step_trace_tolerance)) {
      throw NumericalError("evolve: trace changed by " + std::to_string(step_drift) +
                           " in one step; reduce dt");
    }
    if (step % static_cast<std::size_t>(opts.record_stride) == 0 || extra.count(step)) record(step);
  }
  if (diag.clip_events > 0) {
    spdlog::info("evolve: clipped negative eigenvalues {} times over {} records", diag.clip_events,
                 diag.records);
  }
  return diag;
}

double return_rate(const Vector& psi0, const DensityMatrix& rho_t) {
  if (psi0.size() != rho_t.dim()) throw std::invalid_argument("return_rate: dimension mismatch");
  const double overlap = (psi0.adjoint() * rho_t.data * psi0)(0, 0).real();
  const double g = std::max(std::sqrt(std::max(overlap, 0.0)), 1e-300);
  return -std::log(g);
}

QuenchResult run_quench(const ModelParams& p, FockCutoff cutoff, const QuenchProtocol& protocol,
                        const BathSpec& bath, const SnapshotGrid& snapshot_grid) {
  protocol.validate();
  bath.validate();
  ModelParams pre = p, post = p;
  pre.g = protocol.g0;
  post.g = protocol.g_prime;
  pre.validate();
  post.validate();

  const EigenSystem es0 = solve_model(pre, cutoff);
  const EigenSystem es1 = solve_model(post, cutoff);
  const LindbladGenerator gen = make_generator(es1, cutoff, bath);

  const SubsystemDims dims{kQubitDim, cutoff.cavity_dim()};
  const Vector psi0 = es1.states.adjoint() * es0.ground_state();
  const DensityMatrix rho0 = DensityMatrix::pure(psi0, Basis::dressed, dims);

  const DressedOperators dressed = dressed_operators(es1, cutoff);
  const Matrix photon_count = dressed.x_minus.data * dressed.x_plus.data;
  const QfiGenerator qfi_gen = QfiGenerator::quadrature_x(cutoff);

  const auto steps = static_cast<std::size_t>(std::llround(protocol.t_max / protocol.dt));
  EvolveOptions opts;
  opts.dt = protocol.dt;
  opts.steps = steps;
  opts.record_stride = protocol.record_stride;
  std::map<std::size_t, double> snapshot_steps;
  for (double t : protocol.snapshot_times) {
    const auto s = static_cast<std::size_t>(std::llround(t / protocol.dt));
    snapshot_steps[std::min(s, steps)] = t;
    opts.extra_records.push_back(std::min(s, steps));
  }

  const bool want_f = protocol.tracks("f");
  const bool want_occ = protocol.tracks("occupation");
  const bool want_qfi = protocol.tracks("qfi");
  const bool want_neg = protocol.tracks("negativity");
  const bool want_mi = protocol.tracks("mutual_info");
  const bool want_var = protocol.tracks("min_variance");
  const bool want_bare = want_qfi || want_neg || want_mi || !snapshot_steps.empty();

  QuenchResult result;
  for (const auto& name : protocol.observables) result.series[name];

  auto observer = [&](std::size_t step, double t, const DensityMatrix& rho, const RealVector& lambda) {
    DensityMatrix bare;
    if (want_bare) bare = to_bare(es1, rho);
    if (auto snap = snapshot_steps.find(step); snap != snapshot_steps.end()) {
      if (snapshot_grid.x.size() > 0 && snapshot_grid.p.size() > 0) {
        result.wigner_snapshots.push_back(
            {snap->second, wigner_function(partial_trace(bare, Subsystem::cavity), snapshot_grid.x,
                                           snapshot_grid.p)});
      }
    }
    if (step % static_cast<std::size_t>(protocol.record_stride) != 0) return;

    result.times.push_back(t);
    if (want_f) result.series["f"].push_back(return_rate(psi0, rho));
    if (want_occ) result.series["occupation"].push_back(expectation(rho, {photon_count, Basis::dressed}));
    if (want_qfi) {
      result.series["qfi"].push_back(
          quantum_fisher_information(partial_trace(bare, Subsystem::cavity), qfi_gen));
    }
    if (want_neg) result.series["negativity"].push_back(negativity_witness(bare));
    if (want_mi) result.series["mutual_info"].push_back(mutual_information(bare, lambda));
    if (want_var) result.series["min_variance"].push_back(min_quadrature_variance(rho, dressed).v_min);
  };

  result.diagnostics = evolve(rho0, gen, opts, observer);
  return result;
}

CuspReport detect_cusps(const std::vector<double>& f, double factor) {
  CuspReport report;
  if (f.size() < 4) return report;
  std::vector<double> d2(f.size() - 2);
  for (std::size_t i = 1; i + 1 < f.size(); ++i) d2[i - 1] = f[i + 1] - 2.0 * f[i] + f[i - 1];

  std::vector<double> mags(d2.size());
  std::transform(d2.begin(), d2.end(), mags.begin(), [](double v) { return std::abs(v); });
  std::vector<double> sorted = mags;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  report.median_curvature = sorted[sorted.size() / 2];
  report.max_curvature = *std::max_element(mags.begin(), mags.end());

  const double threshold = factor * report.median_curvature;
  for (std::size_t i = 1; i < d2.size(); ++i) {
    const bool sign_change = (d2[i] > 0.0) != (d2[i - 1] > 0.0);
    if (sign_change && std::max(mags[i], mags[i - 1]) > threshold) {
      ++report.events;
      report.indices.push_back(i);
    }
  }
  return report;
}

}  // namespace rabi
