#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <complex>

#include "polfock/constants.hpp"
#include "polfock/dynamics.hpp"
#include "polfock/oracle.hpp"

using namespace polfock;

namespace {

PotentialBuilder scalar_potential(const std::function<double(double)>& v) {
  return [v](double r) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = v(r);
    return m;
  };
}

Wavepacket single_channel_packet(const RadialGrid& grid,
                                 const std::function<std::complex<double>(double)>& f) {
  Wavepacket wp{grid, BasisSpec{BasisKind::DiabaticPFS, 2},
                Eigen::MatrixXcd(grid.n_points, 1), 0.0};
  const Eigen::VectorXd x = grid.points();
  for (int i = 0; i < grid.n_points; ++i) wp.amps(i, 0) = f(x[i]);
  wp.normalize();
  return wp;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(RadialGrid(0.0, 10.0, 1000), std::invalid_argument);
  CHECK_THROWS_AS(RadialGrid(5.0, 5.0, 128), std::invalid_argument);
  const RadialGrid g(1.5, 41.5, 1024);
  CHECK(g.dr() == doctest::Approx(40.0 / 1024));
  CHECK(g.momenta()[0] == 0.0);
  CHECK(g.momenta()[512] < 0.0);
}

TEST_CASE("fft round trip and delta spectrum") {
  const int n = 256;
  Eigen::VectorXcd data = Eigen::VectorXcd::Random(n);
  Eigen::VectorXcd copy = data;
  fft(copy.data(), n);
  ifft(copy.data(), n);
  CHECK((copy - data).cwiseAbs().maxCoeff() < 1e-13);

  Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(n);
  delta[0] = 1.0;
  fft(delta.data(), n);
  CHECK((delta.array() - 1.0).abs().maxCoeff() < 1e-13);
}

TEST_CASE("free gaussian disperses analytically") {
  const double mass = 1000.0, alpha = 5.0, t_final = 400.0;
  const RadialGrid grid(-16.0, 16.0, 512);

  Wavepacket wp = single_channel_packet(grid, [&](double x) {
    return std::exp(-alpha * x * x);
  });

  PropagatorOptions opts;
  opts.dt = 1.0;
  SplitOperatorPropagator prop(scalar_potential([](double) { return 0.0; }),
                               grid, 1, mass, opts);
  prop.advance(wp, 400);

  // psi(x,t) = (2a/pi)^(1/4) (1+2iat/M)^(-1/2) exp(-a x^2/(1+2iat/M))
  const std::complex<double> im(0.0, 1.0);
  const std::complex<double> denom = 1.0 + 2.0 * im * alpha * t_final / mass;
  const double norm_factor = std::pow(2.0 * alpha / M_PI, 0.25);
  const Eigen::VectorXd x = grid.points();
  double max_err = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    const std::complex<double> expect =
        norm_factor / std::sqrt(denom) * std::exp(-alpha * x[i] * x[i] / denom);
    max_err = std::max(max_err, std::abs(wp.amps(i, 0) - expect));
  }
  CHECK(max_err < 1e-8);
}

TEST_CASE("coherent state returns after one harmonic period") {
  const double mass = 1000.0, omega = 0.01, x_d = 2.0;
  const RadialGrid grid(-8.0, 8.0, 256);
  const double period = 2.0 * M_PI / omega;
  const int n_steps = 8192;

  Wavepacket wp = single_channel_packet(grid, [&](double x) {
    return std::exp(-0.5 * mass * omega * (x - x_d) * (x - x_d));
  });
  const Eigen::MatrixXcd start = wp.amps;

  PropagatorOptions opts;
  opts.dt = period / n_steps;
  SplitOperatorPropagator prop(
      scalar_potential([&](double x) { return 0.5 * mass * omega * omega * x * x; }),
      grid, 1, mass, opts);
  prop.advance(wp, n_steps);

  std::complex<double> ov(0.0, 0.0);
  for (int i = 0; i < grid.n_points; ++i)
    ov += std::conj(start(i, 0)) * wp.amps(i, 0);
  CHECK(std::abs(ov) * grid.dr() > 1.0 - 1e-8);
  CHECK(std::abs(wp.norm() - 1.0) < 1e-12);
}

TEST_CASE("split operator matches the dense propagator on a small PF problem") {
  const DiabaticModel m = lif_default();
  const double omega = units::ev_to_hartree(7.5), chi = 0.01;
  const RadialGrid grid(1.7, 14.5, 128);
  const BasisSpec basis{BasisKind::DiabaticPFS, 4};

  const PotentialBuilder builder =
      make_potential_builder(m, chi, omega, ModelVariant::PauliFierz, basis);
  const PolaritonField field = eigensolve_field(
      m, grid.points(), chi, omega, ModelVariant::PauliFierz, basis, 4);
  Wavepacket wp = initial_state(field, grid, 3.01, 19.12, 1);

  // flatten in the dense layout (channel-major)
  const int n = grid.n_points, nc = basis.n_channels();
  Eigen::VectorXcd psi0(n * nc);
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < n; ++i) psi0[c * n + i] = wp.amps(i, c);

  const double t_final = 250.0;
  PropagatorOptions opts;
  opts.dt = 0.25;
  SplitOperatorPropagator prop(builder, grid, nc, m.mass, opts);
  prop.advance(wp, 1000);

  const Eigen::MatrixXcd h =
      oracle::assemble_dense_hamiltonian(builder, grid, nc, m.mass);
  const Eigen::VectorXcd exact = oracle::dense_exact_propagator(h, psi0, t_final);

  std::complex<double> ov(0.0, 0.0);
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < n; ++i) ov += std::conj(exact[c * n + i]) * wp.amps(i, c);
  CHECK(std::abs(ov) * grid.dr() > 1.0 - 1e-8);
}

TEST_CASE("derivative-coupling toggle is inert for flat dipoles") {
  DiabaticModel m = lif_default();
  m.mu_ion_offset = 2.0;
  m.mu_ion_slope = 1e-300;
  m.mu_cov_slope = 0.0;

  const double omega = units::ev_to_hartree(7.5), chi = 0.01;
  const RadialGrid grid(1.7, 14.5, 128);
  const BasisSpec basis{BasisKind::DiabaticPFS, 4};
  const PotentialBuilder builder =
      make_potential_builder(m, chi, omega, ModelVariant::PauliFierz, basis);
  const PolaritonField field = eigensolve_field(
      m, grid.points(), chi, omega, ModelVariant::PauliFierz, basis, 2);

  Wavepacket off = initial_state(field, grid, 3.01, 19.12, 1);
  Wavepacket on = off;

  PropagatorOptions opts_off;
  opts_off.dt = 1.0;
  SplitOperatorPropagator prop_off(builder, grid, basis.n_channels(), m.mass,
                                   opts_off);
  PropagatorOptions opts_on = opts_off;
  opts_on.include_derivative_couplings = true;
  const KineticBlocks blocks = nuclear_kinetic_blocks(m, basis.n_fock, chi, omega);
  SplitOperatorPropagator prop_on(builder, grid, basis.n_channels(), m.mass,
                                  opts_on, &blocks);

  prop_off.advance(off, 50);
  prop_on.advance(on, 50);
  CHECK((off.amps - on.amps).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("derivative couplings preserve the norm") {
  const DiabaticModel m = lif_default();
  const double omega = units::ev_to_hartree(7.5), chi = 0.01;
  const RadialGrid grid(1.7, 14.5, 128);
  const BasisSpec basis{BasisKind::DiabaticPFS, 4};
  const PotentialBuilder builder =
      make_potential_builder(m, chi, omega, ModelVariant::PauliFierz, basis);
  const PolaritonField field = eigensolve_field(
      m, grid.points(), chi, omega, ModelVariant::PauliFierz, basis, 2);
  Wavepacket wp = initial_state(field, grid, 3.01, 19.12, 1);

  PropagatorOptions opts;
  opts.dt = 1.0;
  opts.include_derivative_couplings = true;
  const KineticBlocks blocks = nuclear_kinetic_blocks(m, basis.n_fock, chi, omega);
  SplitOperatorPropagator prop(builder, grid, basis.n_channels(), m.mass, opts,
                               &blocks);
  for (int step = 0; step < 100; ++step) {
    prop.advance(wp, 1);
    CHECK(std::abs(wp.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("initial state construction") {
  const DiabaticModel m = lif_default();
  const double omega = units::ev_to_hartree(7.5);
  const RadialGrid grid(1.5, 41.5, 512);

  SUBCASE("normalization and channel purity at chi = 0 in the adiabatic basis") {
    const BasisSpec basis{BasisKind::AdiabaticFock, 4};
    const PolaritonField field = eigensolve_field(
        m, grid.points(), 0.0, omega, ModelVariant::PauliFierz, basis, 2);
    const Wavepacket wp = initial_state(field, grid, 3.01, 19.12, 0);
    CHECK(wp.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // ground adiabat, zero photons: only channel 0 occupied
    for (int c = 1; c < basis.n_channels(); ++c)
      CHECK(wp.amps.col(c).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("gaussian tails at the grid edge are rejected") {
    const BasisSpec basis{BasisKind::DiabaticPFS, 4};
    const PolaritonField field = eigensolve_field(
        m, grid.points(), 0.0, omega, ModelVariant::PauliFierz, basis, 2);
    CHECK_THROWS_AS(initial_state(field, grid, 2.0, 19.12, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(initial_state(field, grid, 3.01, 1e-4, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(initial_state(field, grid, 3.01, 19.12, 7),
                    std::invalid_argument);
  }
}

TEST_CASE("halving the time step leaves observables converged") {
  const DiabaticModel m = lif_default();
  const double omega = units::ev_to_hartree(1.5), chi = 0.007;
  const RadialGrid grid(1.8, 27.4, 512);
  const BasisSpec basis{BasisKind::DiabaticPFS, 8};
  const PotentialBuilder builder =
      make_potential_builder(m, chi, omega, ModelVariant::PauliFierz, basis);
  const PolaritonField field = eigensolve_field(
      m, grid.points(), chi, omega, ModelVariant::PauliFierz, basis, 8);

  const int j0 = 5;
  Wavepacket coarse = initial_state(field, grid, 3.01, 19.12, j0);
  Wavepacket fine = coarse;

  PropagatorOptions copts;
  copts.dt = 1.0;
  SplitOperatorPropagator cprop(builder, grid, basis.n_channels(), m.mass, copts);
  cprop.advance(coarse, 600);

  PropagatorOptions fopts;
  fopts.dt = 0.5;
  SplitOperatorPropagator fprop(builder, grid, basis.n_channels(), m.mass, fopts);
  fprop.advance(fine, 1200);

  CHECK(coarse.time == doctest::Approx(fine.time));
  // fidelity between the two endpoints implies convergence of any observable
  std::complex<double> ov(0.0, 0.0);
  for (int c = 0; c < basis.n_channels(); ++c)
    for (int i = 0; i < grid.n_points; ++i)
      ov += std::conj(fine.amps(i, c)) * coarse.amps(i, c);
  CHECK(std::abs(std::abs(ov) * grid.dr() - 1.0) < 1e-6);

  // energy is conserved along the way
  CHECK(std::abs(cprop.energy(coarse) - cprop.energy(fine)) /
            std::abs(cprop.energy(fine)) <
        1e-6);
}
