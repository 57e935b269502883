#ifndef POLFOCK_FOCK_HPP
#define POLFOCK_FOCK_HPP

#include <Eigen/Dense>

namespace polfock {

// Truncated Fock space of one harmonic photon mode.
struct FockSpace {
  double omega_c;  // cavity frequency, atomic units (hbar*omega in hartree)
  int n_max;       // states 0 .. n_max-1

  FockSpace(double omega, int n);  // validates n_max >= 2, omega_c > 0
};

struct LadderOps {
  Eigen::MatrixXd create;      // b_dagger, sqrt(n+1) on the first subdiagonal
  Eigen::MatrixXd annihilate;  // b
  Eigen::MatrixXd number;      // b_dagger * b
};

LadderOps ladder_matrices(const FockSpace& space);

// Dimensionless relative displacement between two polarized Fock ladders,
// lambda = chi * dmu / omega_c. Positive lambda means the ionic ladder is
// displaced toward negative q relative to the covalent one.
struct Displacement {
  double lambda;
  double sanity_limit = 10.0;  // guards truncation quality
};

// S[m,n] = <m|D(lambda)|n> with D(lambda) = exp(lambda (b_dagger - b)),
// computed by a two-term recurrence seeded at S[0,0] = exp(-lambda^2/2).
// No factorials or Laguerre evaluations, stable up to a few hundred states.
// Throws std::invalid_argument when |lambda| exceeds the sanity limit.
Eigen::MatrixXd overlap_matrix(const FockSpace& space, const Displacement& d);

// Analytic polarized-Fock derivative coupling <m_a|d/dR|n_a> =
// -(chi * dmu_dR / omega_c) * (b_dagger - b); exactly antisymmetric.
Eigen::MatrixXd pfs_derivative_coupling(const FockSpace& space, double dmu_dr,
                                        double chi);

}  // namespace polfock

#endif
