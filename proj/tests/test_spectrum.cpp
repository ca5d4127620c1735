#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "rabi/observables.hpp"
#include "rabi/spectrum.hpp"

using namespace rabi;

TEST_CASE("decoupled ladder") {
  const auto es = solve_model({0.1, 10.0, 0.0}, FockCutoff(2));
  const double expected[] = {-5.0, -4.9, -4.8, 5.0, 5.1, 5.2};
  REQUIRE(es.dim() == 6);
  for (int k = 0; k < 6; ++k) CHECK(es.energies(k) == doctest::Approx(expected[k]).epsilon(1e-14));
  CHECK(energy_gap(es) == doctest::Approx(0.1));
}

TEST_CASE("eigensystem reconstructs H and is orthonormal") {
  const FockCutoff cutoff(30);
  for (double g : {0.2, 0.5, 0.7}) {
    const auto h = build_hamiltonian({0.1, 10.0, g}, cutoff);
    const auto es = diagonalize(h, parity_operator(cutoff));
    const Matrix rebuilt = es.states * es.energies.cast<Complex>().asDiagonal() * es.states.adjoint();
    CHECK((rebuilt - h.data).cwiseAbs().maxCoeff() < 1e-8);
    const Matrix overlap = es.states.adjoint() * es.states - Matrix::Identity(es.dim(), es.dim());
    CHECK(overlap.cwiseAbs().sum() < 1e-8 * es.dim() * es.dim());
    for (Eigen::Index k = 1; k < es.dim(); ++k) CHECK(es.energies(k) >= es.energies(k - 1));
  }
}

TEST_CASE("parity-resolved and plain diagonalization agree on the spectrum") {
  const FockCutoff cutoff(25);
  const auto h = build_hamiltonian({0.1, 10.0, 0.45}, cutoff);
  const auto a = diagonalize(h);
  const auto b = diagonalize(h, parity_operator(cutoff));
  CHECK((a.energies - b.energies).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("eigenvector phase convention: largest component real positive") {
  const auto es = solve_model({0.1, 10.0, 0.3}, FockCutoff(20));
  for (Eigen::Index k = 0; k < es.dim(); ++k) {
    Eigen::Index idx = 0;
    es.states.col(k).cwiseAbs().maxCoeff(&idx);
    CHECK(es.states(idx, k).real() > 0.0);
    CHECK(std::abs(es.states(idx, k).imag()) < 1e-14);
  }
}

TEST_CASE("ground energy at g = 0.7 is converged against n_max = 120") {
  const ModelParams p{0.1, 10.0, 0.7};
  const double e80 = solve_model(p, FockCutoff(80)).energies(0);
  const double e120 = solve_model(p, FockCutoff(120)).energies(0);
  CHECK(std::abs(e80 - e120) < 1e-6);
}

TEST_CASE("energy gap") {
  SUBCASE("continuity in g") {
    const FockCutoff cutoff(40);
    const double a = energy_gap(solve_model({0.1, 10.0, 0.3}, cutoff));
    const double b = energy_gap(solve_model({0.1, 10.0, 0.3 + 1e-6}, cutoff));
    CHECK(std::abs(a - b) < 1e-4);
  }
  SUBCASE("closes in the superradiant phase") {
    CHECK(energy_gap(solve_model({0.1, 10.0, 0.7}, FockCutoff(80))) < 1e-2 * 0.1);
  }
  SUBCASE("needs two levels") { CHECK_THROWS(energy_gap(EigenSystem{RealVector::Zero(1), Matrix(), RealVector()})); }
}

TEST_CASE("critical coupling") {
  CHECK(critical_coupling(0.1, 10.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(critical_coupling(1.0, 1.0) == 0.5);
  CHECK(std::abs(critical_coupling(0.04, 25.0) - 0.5) < 1e-12);
  for (double s : {0.3, 2.0, 7.5}) {
    CHECK(std::abs(critical_coupling(s * 0.2, s * 3.0) - s * critical_coupling(0.2, 3.0)) < 1e-12);
  }
  CHECK_THROWS_AS(critical_coupling(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(critical_coupling(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("mean-field occupation agrees with the oracle") {
  for (double g : {0.3, 0.5, 0.55, 0.7, 0.9}) {
    CHECK(mean_field_occupation({0.1, 10.0, g}) ==
          doctest::Approx(oracle::mean_field_occupation(g, 0.1, 10.0)).epsilon(1e-12));
  }
}

TEST_CASE("ground-state parity") {
  const FockCutoff cutoff(40);
  const auto pi = parity_operator(cutoff);
  for (double g : {0.0, 0.2, 0.45}) {
    const auto es = solve_model({0.1, 10.0, g}, cutoff);
    REQUIRE(energy_gap(es) > 1e-6);
    const double parity = expectation(DensityMatrix::pure(es.ground_state()), pi);
    CHECK(std::abs(std::abs(parity) - 1.0) < 1e-6);
    CHECK(es.parities(0) == doctest::Approx(parity));
  }
}

TEST_CASE("degenerate pairs put the parity of |g,0> first") {
  const auto es = solve_model({0.1, 10.0, 0.7}, FockCutoff(80));
  REQUIRE(es.energies(1) - es.energies(0) < kDegeneracyTolerance);
  CHECK(es.parities(0) == -1.0);
  CHECK(es.parities(1) == 1.0);
}

TEST_CASE("dressed frequency operators") {
  const FockCutoff cutoff(15);

  SUBCASE("weak coupling recovers a") {
    const auto es = solve_model({0.1, 10.0, 1e-6}, cutoff);
    const auto d = dressed_operators(es, cutoff);
    const auto a_dressed = to_dressed(es, embed_cavity(annihilation(cutoff)));
    CHECK((d.x_plus.data - a_dressed.data).cwiseAbs().maxCoeff() < 1e-4);
    const auto sm_dressed = to_dressed(es, embed_qubit(qubit_operators().sigma_minus, cutoff));
    CHECK((d.s_plus.data - sm_dressed.data).cwiseAbs().maxCoeff() < 1e-4);
  }

  SUBCASE("strictly upper triangular with X- = X+^dag") {
    const auto es = solve_model({0.1, 10.0, 0.6}, cutoff);
    const auto d = dressed_operators(es, cutoff);
    CHECK(d.x_plus.basis == Basis::dressed);
    for (Eigen::Index j = 0; j < es.dim(); ++j) {
      for (Eigen::Index k = 0; k <= j; ++k) CHECK(d.x_plus.data(j, k) == Complex(0.0));
    }
    CHECK((d.x_minus.data - d.x_plus.data.adjoint()).norm() == 0.0);
    // X+ + X- reproduces the full dressed quadrature off the diagonal
    const auto x = to_dressed(es, embed_cavity({annihilation(cutoff).data + annihilation(cutoff).data.adjoint()}));
    Matrix off = x.data;
    off.diagonal().setZero();
    CHECK((d.x_plus.data + d.x_minus.data - off).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("dressed vacuum emits nothing") {
    for (double g : {0.1, 0.5, 0.8}) {
      const auto es = solve_model({0.1, 10.0, g}, cutoff);
      const auto d = dressed_operators(es, cutoff);
      Vector v0 = Vector::Zero(es.dim());
      v0(0) = 1.0;
      const auto rho = DensityMatrix::pure(v0, Basis::dressed);
      CHECK(expectation(rho, {d.x_minus.data * d.x_plus.data, Basis::dressed}) == 0.0);
    }
  }

  SUBCASE("dimension mismatch") {
    const auto es = solve_model({0.1, 10.0, 0.2}, cutoff);
    CHECK_THROWS_AS(dressed_frequency_operators(es, identity(5)), std::invalid_argument);
  }
}

TEST_CASE("basis round trip") {
  oracle::Rng rng(17);
  const FockCutoff cutoff(6);
  const auto es = solve_model({0.1, 10.0, 0.4}, cutoff);
  const DensityMatrix rho{oracle::random_density(cutoff.joint_dim(), rng), Basis::bare,
                          SubsystemDims{2, cutoff.cavity_dim()}};
  const auto back = to_bare(es, to_dressed(es, rho));
  CHECK((back.data - rho.data).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(back.dims == rho.dims);
  CHECK_THROWS_AS(to_bare(es, rho), std::invalid_argument);
}
