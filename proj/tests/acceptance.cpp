// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <tuple>

#include <spdlog/spdlog.h>

#include "oracles.hpp"
#include "rabi/dynamics.hpp"
#include "rabi/observables.hpp"
#include "rabi/phase_diagram.hpp"
#include "rabi/spectrum.hpp"

using namespace rabi;

namespace {

int failures = 0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

std::string num(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void criterion(int id, const char* title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("threw: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0) out.require(secs < budget_s, "runtime " + num("%.1f", secs) + " s < " + num("%g", budget_s) + " s");
  if (!out.pass) ++failures;
  std::printf("%s criterion %d (%s): %s\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.c_str());
  std::fflush(stdout);
}

double range(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

double rel_change(double a, double b) { return std::abs(a - b) / std::abs(a); }

const ModelParams kModel{0.1, 10.0, 0.0};

// Shared trajectories: criteria 5, 6, 7(c) and 9 reuse them.
struct Runs {
  QuenchResult q035, q010, q060, q035_hot, q035_half, q035_big, q010_big;
  std::vector<TrajectoryDiagnostics> diagnostics;
};

QuenchResult quench(Runs& runs, double g0, FockCutoff cutoff, double temperature, double dt_scale,
                    std::vector<std::string> observables) {
  QuenchProtocol proto = QuenchProtocol::defaults_for(g0, kModel);
  proto.dt *= dt_scale;
  proto.record_stride = static_cast<int>(std::lround(0.1 / proto.dt));
  proto.observables = std::move(observables);
  BathSpec bath = BathSpec::defaults_for(kModel);
  bath.temperature = temperature;
  auto res = run_quench(kModel, cutoff, proto, bath);
  runs.diagnostics.push_back(res.diagnostics);
  return res;
}

const std::vector<std::string> kEverything{"f", "occupation", "qfi", "negativity", "mutual_info", "min_variance"};

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  Runs runs;
  const FockCutoff n50(50), n80(80), n100(100);

  criterion(1, "critical coupling", 1.0, [](Outcome& o) {
    for (double wc : {0.02, 0.1, 0.5}) {
      const double gc = critical_coupling(wc, 1.0 / wc);
      o.require(std::abs(gc - 0.5) < 1e-12, "g_c(" + num("%g", wc) + ") = " + num("%.17g", gc));
    }
  });

  criterion(2, "transition sharpness", 10.0, [&](Outcome& o) {
    const double below = compute_point(0.45, 0.1, 10.0, n80, {Quantity::occupation}).value(Quantity::occupation);
    const double above = compute_point(0.55, 0.1, 10.0, n80, {Quantity::occupation}).value(Quantity::occupation);
    const double mf = oracle::mean_field_occupation(0.55, 0.1, 10.0);
    o.require(below < 0.05, "<n>(0.45) = " + num("%.4f", below) + " < 0.05");
    o.require(std::abs(above - mf) < 0.25 * mf, "<n>(0.55) = " + num("%.3f", above) + " vs mean field " + num("%.3f", mf));
  });

  criterion(3, "gap closing", 5.0, [&](Outcome& o) {
    const double g_hi = energy_gap(solve_model({0.1, 10.0, 0.7}, n80));
    const double g_lo = energy_gap(solve_model({0.1, 10.0, 0.2}, n80));
    o.require(g_hi / g_lo < 1e-2, "gap(0.7)/gap(0.2) = " + num("%.3g", g_hi / g_lo));
  });

  criterion(4, "cat-state Wigner signature", 30.0, [&](Outcome& o) {
    const auto es = solve_model({0.1, 10.0, 0.7}, n80);
    const auto rho = DensityMatrix::pure(es.ground_state(), Basis::bare, SubsystemDims{kQubitDim, n80.cavity_dim()});
    const RealVector axis = linspace(-8.0, 8.0, 161);
    const auto w = wigner_function(partial_trace(rho, Subsystem::cavity), axis, axis);
    o.require(w.values.minCoeff() < -0.01, "min W = " + num("%.4f", w.values.minCoeff()));
    // bimodal: a maximum on each side of x = 0 (the window edge counts) and a dip between
    // them below 10% of the smaller one
    const RealVector m = w.x_marginal();
    const Eigen::Index mid = axis.size() / 2;
    Eigen::Index il = 0, ir = mid + 1;
    const double left = m.head(mid).maxCoeff(&il);
    const double right = m.tail(axis.size() - mid - 1).maxCoeff(&ir);
    ir += mid + 1;
    const double dip = m.segment(il, ir - il + 1).minCoeff();
    o.require(dip < 0.1 * std::min(left, right),
              "marginal peaks " + num("%.3g", left) + " @ x=" + num("%.2f", axis(il)) + ", " + num("%.3g", right) +
                  " @ x=" + num("%.2f", axis(ir)) + ", dip " + num("%.2g", dip));
  });

  criterion(5, "quench regions", 300.0, [&](Outcome& o) {
    runs.q035 = quench(runs, 0.35, n50, 0.0, 1.0, kEverything);
    runs.q010 = quench(runs, 0.10, n50, 0.0, 1.0, {"f", "occupation"});
    runs.q060 = quench(runs, 0.60, n50, 0.0, 1.0, {"f", "occupation"});
    const double m35 = max_of(runs.q035.series.at("occupation"));
    const double m10 = max_of(runs.q010.series.at("occupation"));
    o.require(m35 >= 5.0 * m10, "max <X-X+> " + num("%.4g", m35) + " vs " + num("%.4g", m10));
    const auto c35 = detect_cusps(runs.q035.series.at("f"));
    const auto c60 = detect_cusps(runs.q060.series.at("f"));
    o.require(c35.events > 0, "cusps(0.35) = " + std::to_string(c35.events) + " (max/median curvature " +
                                  num("%.3g", c35.max_curvature / c35.median_curvature) + ")");
    o.require(c60.events == 0, "cusps(0.60) = " + std::to_string(c60.events));
  });

  criterion(6, "temperature smoothing", 300.0, [&](Outcome& o) {
    runs.q035_hot = quench(runs, 0.35, n50, 0.5 * kModel.omega_q, 1.0, kEverything);
    for (const char* name : {"qfi", "negativity", "mutual_info"}) {
      const double cold = range(runs.q035.series.at(name)), hot = range(runs.q035_hot.series.at(name));
      o.require(hot < cold, std::string(name) + " range " + num("%.4g", hot) + " < " + num("%.4g", cold));
    }
  });

  criterion(7, "open-system sanity", 0.0, [&](Outcome& o) {
    {
      ModelParams p = kModel;
      p.g = 0.65;
      const auto es = solve_model(p, n50);
      const auto gen = make_generator(es, n50, BathSpec::defaults_for(p));
      const auto rho0 = DensityMatrix::pure(Vector::Unit(es.dim(), 0), Basis::dressed);
      EvolveOptions opts;
      opts.dt = 0.001;
      opts.steps = 10000;
      opts.record_stride = 1000;
      double worst = 0.0;
      runs.diagnostics.push_back(evolve(rho0, gen, opts, [&](std::size_t, double, const DensityMatrix& r, const RealVector&) {
        worst = std::max(worst, (r.data - rho0.data).cwiseAbs().maxCoeff());
      }));
      o.require(worst < 1e-10, "(a) ground-state drift " + num("%.2g", worst));
    }
    {
      const FockCutoff cutoff(25);
      const ModelParams p{0.1, 10.0, 0.0};
      const double temperature = p.omega_c / std::log(2.0);  // nbar = 1
      const double nbar = 1.0 / (std::exp(p.omega_c / temperature) - 1.0);
      const auto es = solve_model(p, cutoff);
      const auto gen = make_generator(es, cutoff, {0.1, 0.1, temperature, p.omega_c});
      const auto rho0 = DensityMatrix::pure(Vector::Unit(es.dim(), 0), Basis::dressed);
      const auto n_dressed = to_dressed(es, embed_cavity(number_operator(cutoff)));
      EvolveOptions opts;
      opts.dt = 0.01;
      opts.steps = 10000;
      opts.record_stride = 10000;
      double n_final = 0.0;
      runs.diagnostics.push_back(evolve(rho0, gen, opts, [&](std::size_t, double, const DensityMatrix& r, const RealVector&) {
        n_final = expectation(r, n_dressed);
      }));
      o.require(std::abs(n_final - nbar) < 0.05 * nbar, "(b) <n> = " + num("%.4f", n_final) + " vs " + num("%.4f", nbar));
    }
    double drift = 0.0, min_ev = 1.0;
    for (const auto& d : runs.diagnostics) {
      drift = std::max(drift, d.max_trace_drift);
      min_ev = std::min(min_ev, d.min_eigenvalue);
    }
    o.require(drift < 1e-8 && min_ev > -1e-6, "(c) over " + std::to_string(runs.diagnostics.size()) +
                                                  " runs: trace drift " + num("%.2g", drift) + ", min eigenvalue " +
                                                  num("%.2g", min_ev));
  });

  criterion(8, "formula oracles", 0.0, [](Outcome& o) {
    oracle::Rng rng(20240607);
    double qfi = 0.0, pure = 0.0, neg = 0.0, var = 0.0;
    for (int i = 0; i < 25; ++i) {
      const int dim = 2 + i % 3;
      const Matrix rho = oracle::random_density(dim, rng);
      const Matrix g = oracle::random_hermitian(dim, rng);
      qfi = std::max(qfi, std::abs(quantum_fisher_information(DensityMatrix{rho}, QfiGenerator::custom({g})) -
                                   oracle::qfi_sld(rho, g)));
    }
    for (int i = 0; i < 25; ++i) {
      const int dim = 2 + i % 7;
      const Vector psi = oracle::random_state(dim, rng);
      const Matrix g = oracle::random_hermitian(dim, rng);
      const Complex m = psi.dot(g * psi), m2 = psi.dot(g * g * psi);
      pure = std::max(pure, std::abs(quantum_fisher_information(DensityMatrix::pure(psi), QfiGenerator::custom({g})) -
                                     4.0 * (m2 - m * m).real()));
    }
    for (int i = 0; i < 25; ++i) {
      const Matrix rho = oracle::random_density(6, rng);
      const RealVector ev =
          Eigen::SelfAdjointEigenSolver<Matrix>(oracle::partial_transpose_first(rho, 2, 3)).eigenvalues();
      neg = std::max(neg, std::abs(negativity_witness(DensityMatrix{rho, Basis::bare, SubsystemDims{2, 3}}) +
                                   ev.cwiseMin(0.0).sum()));
    }
    const FockCutoff cutoff(12);
    const auto es = solve_model({0.1, 10.0, 0.55}, cutoff);
    const auto d = dressed_operators(es, cutoff);
    for (int i = 0; i < 10; ++i) {
      const DensityMatrix rho{oracle::random_density(static_cast<int>(es.dim()), rng), Basis::dressed};
      var = std::max(var, std::abs(min_quadrature_variance(rho, d).v_min - oracle::min_variance_grid(rho, d, 10000)));
    }
    o.require(qfi < 1e-8, "QFI vs SLD " + num("%.2g", qfi));
    o.require(pure < 1e-9, "pure QFI vs 4Var " + num("%.2g", pure));
    o.require(neg < 1e-10, "negativity vs eigensolve " + num("%.2g", neg));
    o.require(var < 1e-8, "theta minimum vs grid " + num("%.2g", var));
  });

  criterion(9, "numerical convergence", 0.0, [&](Outcome& o) {
    for (double g : {0.45, 0.55}) {
      const double a = compute_point(g, 0.1, 10.0, n50, {Quantity::occupation}).value(Quantity::occupation);
      const double b = compute_point(g, 0.1, 10.0, n100, {Quantity::occupation}).value(Quantity::occupation);
      o.require(rel_change(a, b) < 0.02, "<n>(" + num("%g", g) + ") n_max 50->100 " + num("%.2g", rel_change(a, b)));
    }
    if (runs.q035.times.empty() || runs.q010.times.empty()) throw std::runtime_error("criterion 5 runs missing");
    runs.q035_big = quench(runs, 0.35, n100, 0.0, 1.0, {"f", "occupation"});
    runs.q010_big = quench(runs, 0.10, n100, 0.0, 1.0, {"f", "occupation"});
    for (auto [name, small, big] : {std::tuple{"0.35", &runs.q035, &runs.q035_big},
                                    std::tuple{"0.10", &runs.q010, &runs.q010_big}}) {
      const double a = max_of(small->series.at("occupation")), b = max_of(big->series.at("occupation"));
      o.require(rel_change(a, b) < 0.02, std::string("max <X-X+>(") + name + ") n_max 50->100 " + num("%.2g", rel_change(a, b)));
    }
    runs.q035_half = quench(runs, 0.35, n50, 0.0, 0.5, kEverything);
    double worst = 0.0;
    std::string worst_name;
    for (const auto& [name, series] : runs.q035.series) {
      const auto& half = runs.q035_half.series.at(name);
      if (half.size() != series.size()) throw std::runtime_error("dt halving changed the record grid");
      for (std::size_t i = 0; i < series.size(); ++i) {
        if (std::abs(series[i] - half[i]) > worst) worst = std::abs(series[i] - half[i]), worst_name = name;
      }
    }
    o.require(worst < 1e-6, "dt halving max change " + num("%.2g", worst) + " (" + worst_name + ")");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
