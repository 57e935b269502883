#ifndef POLFOCK_ORACLE_HPP
#define POLFOCK_ORACLE_HPP

#include <Eigen/Dense>
#include <complex>

#include "polfock/grid.hpp"
#include "polfock/hamiltonian.hpp"

// Independent brute-force references used by the test and acceptance suites.
// These deliberately avoid the production numerical kernels: overlaps come
// from Gauss-Hermite quadrature over explicit oscillator eigenfunctions, and
// exact propagation from a dense eigendecomposition with a plane-wave-sum
// kinetic matrix.

namespace polfock::oracle {

// <m|D(lambda)|n> = integral phi_m(x) phi_n(x - sqrt(2) lambda) dx by
// high-order Gauss-Hermite quadrature; target accuracy 1e-12.
// Preconditions m, n <= 40 and |lambda| <= 5; throws std::invalid_argument
// outside them and std::runtime_error if two quadrature orders disagree.
double fc_overlap_quadrature(int m, int n, double lambda);

// Dense discretized Hamiltonian (flat index c * n_points + i) with
// Fourier-spectral kinetic blocks. When kinetic_blocks is non-null the
// first-derivative coupling and its second-order term are included.
Eigen::MatrixXcd assemble_dense_hamiltonian(const PotentialBuilder& v_builder,
                                            const RadialGrid& grid,
                                            int n_channels, double mass,
                                            const KineticBlocks* kinetic_blocks = nullptr);

// psi(t) = exp(-i H t) psi0 via full eigendecomposition; refuses dimensions
// above 4096.
Eigen::VectorXcd dense_exact_propagator(const Eigen::MatrixXcd& h_total,
                                        const Eigen::VectorXcd& psi0, double t);

// Centered finite difference of the inter-ladder overlap of one diabat's PFS
// ladder at R against itself at R +/- dr; converges to
// pfs_derivative_coupling as dr -> 0. state 0 = ionic, 1 = covalent.
Eigen::MatrixXd finite_difference_dc(const DiabaticModel& model, int n_fock,
                                     double chi, double omega_c, double r,
                                     double dr, int state = 0);

}  // namespace polfock::oracle

#endif
