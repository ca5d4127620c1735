#include <cmath>
#include <numbers>

#include <spdlog/spdlog.h>

#include "rabi/observables.hpp"

namespace rabi {

namespace {

double grid_step(const RealVector& v) { return v.size() > 1 ? (v(v.size() - 1) - v(0)) / (v.size() - 1) : 1.0; }

}  // namespace

double WignerGrid::integral() const {
  return values.sum() * grid_step(x_values) * grid_step(p_values);
}

RealVector WignerGrid::x_marginal() const { return values.rowwise().sum() * grid_step(p_values); }

namespace {

// W at one point from the exact Fock matrix elements of D(beta), beta = 2 alpha:
//   Tr[rho D(alpha) Pi D(alpha)^dag] = sum_mn rho_mn (-1)^m <n|D(beta)|m>.
// Along each lower diagonal n = m + k,
//   <m+k|D(beta)|m> = beta^k e^{-|beta|^2/2} / sqrt(k!) * t_m,
// with t_m = sqrt(k! m! / (m+k)!) L_m^(k)(|beta|^2) from the normalized three-term
// recurrence; the prefactor is formed in log space. Hermiticity folds the upper triangle.
double wigner_point(const Matrix& rho, double x, double p) {
  const Eigen::Index d = rho.rows();
  const Complex beta = std::numbers::sqrt2 * Complex(x, p);
  const double r2 = std::norm(beta);
  const double log_abs = r2 > 0.0 ? 0.5 * std::log(r2) : 0.0;
  const double arg = std::arg(beta);

  double acc = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (r2 == 0.0 && k > 0) break;
    const double kk = static_cast<double>(k);
    const Complex prefactor =
        std::polar(std::exp(kk * log_abs - 0.5 * r2 - 0.5 * std::lgamma(kk + 1.0)), kk * arg);
    Complex diag = 0.0;
    double t_prev = 0.0, t = 1.0;
    for (Eigen::Index m = 0; m + k < d; ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      diag += sign * rho(m, m + k) * t;
      const double md = static_cast<double>(m);
      const double t_next = ((2.0 * md + 1.0 + kk - r2) * t - std::sqrt(md * (md + kk)) * t_prev) /
                            std::sqrt((md + 1.0) * (md + 1.0 + kk));
      t_prev = t;
      t = t_next;
    }
    acc += (k == 0 ? 1.0 : 2.0) * (prefactor * diag).real();
  }
  return acc / std::numbers::pi;
}

}  // namespace

WignerGrid wigner_function(const DensityMatrix& rho_c, const RealVector& x, const RealVector& p) {
  if (rho_c.dims) throw std::invalid_argument("wigner_function: expects a cavity-only state");
  if (x.size() == 0 || p.size() == 0) throw std::invalid_argument("wigner_function: empty grid");
  if (!x.allFinite() || !p.allFinite()) throw std::invalid_argument("wigner_function: non-finite grid");

  const Eigen::Index d = rho_c.dim();
  const FockCutoff cutoff(static_cast<int>(d) - 1);
  {
    const double n = expectation(rho_c, number_operator(cutoff));
    const double support = std::sqrt(2.0 * n + 1.0);
    const double edge = std::min({std::abs(x(0)), std::abs(x(x.size() - 1)), std::abs(p(0)),
                                  std::abs(p(p.size() - 1))});
    if (support > edge) {
      spdlog::warn("Wigner grid edge {:.3g} lies inside the state's phase-space support {:.3g}",
                   edge, support);
    }
  }

  WignerGrid out{x, p, RealMatrix(x.size(), p.size())};
  const Eigen::Index np = p.size();
  const Eigen::Index total = x.size() * np;
#pragma omp parallel for schedule(static)
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    const Eigen::Index i = idx / np, j = idx % np;
    out.values(i, j) = wigner_point(rho_c.data, x(i), p(j));
  }
  return out;
}

}  // namespace rabi
