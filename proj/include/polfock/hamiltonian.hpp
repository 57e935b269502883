#ifndef POLFOCK_HAMILTONIAN_HPP
#define POLFOCK_HAMILTONIAN_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "polfock/fock.hpp"
#include "polfock/model.hpp"

namespace polfock {

// Channel layout is always  c = alpha * n_fock + n  with two electronic
// labels. For the Fock bases alpha = {0: ground/ionic, 1: excited/covalent};
// for DiabaticPFS alpha = {0: ionic, 1: covalent} and n counts quanta of the
// state's own displaced ladder.
enum class BasisKind {
  AdiabaticFock,  // adiabatic electronic states x vacuum Fock states
  DiabaticFock,   // strict diabats x vacuum Fock states (same spectrum as
                  // AdiabaticFock at every R; the propagation representation)
  DiabaticPFS     // strict diabats x polarized Fock states
};

enum class ModelVariant { PauliFierz, Rabi, JaynesCummings };

std::string to_string(BasisKind kind);
std::string to_string(ModelVariant variant);

struct BasisSpec {
  BasisKind kind = BasisKind::DiabaticPFS;
  int n_fock = 8;
  static constexpr int n_electronic = 2;
  int n_channels() const { return n_electronic * n_fock; }
};

// Full light-matter Hamiltonian at fixed R in the adiabatic x vacuum-Fock
// basis. PauliFierz carries the full dipole matrix through chi*(a+a^dag) and
// the complete dipole self-energy (chi*mu)^2/omega including cross terms;
// Rabi keeps only mu_eg*(a+a^dag); JaynesCummings keeps only the co-rotating
// sigma^dag a + sigma a^dag block.
Eigen::MatrixXd build_hpl_fock(const DiabaticModel& model, double r, double chi,
                               double omega_c, ModelVariant variant, int n_fock);

// Same Pauli-Fierz operator in the strict-diabat x vacuum-Fock channels
// (exactly unitary-equivalent to build_hpl_fock at every R).
Eigen::MatrixXd build_hpl_fock_diabatic(const DiabaticModel& model, double r,
                                        double chi, double omega_c, int n_fock);

// Pauli-Fierz Hamiltonian in the polarized-Fock basis: diagonal displaced
// ladders V_alpha + (n+1/2) omega, and the diabatic coupling scaled by the
// inter-ladder overlaps V_IC(R) * <n_I|m_C>.
Eigen::MatrixXd build_hpl_pfs(const DiabaticModel& model, double r, double chi,
                              double omega_c, int n_fock);

// Dispatch on basis/variant; Rabi and JC exist only in AdiabaticFock.
Eigen::MatrixXd build_hpl(const DiabaticModel& model, double r, double chi,
                          double omega_c, ModelVariant variant,
                          const BasisSpec& basis);

using PotentialBuilder = std::function<Eigen::MatrixXd(double)>;

PotentialBuilder make_potential_builder(const DiabaticModel& model, double chi,
                                        double omega_c, ModelVariant variant,
                                        const BasisSpec& basis);

// Polarized photon-number operator sum_alpha b_alpha^dag b_alpha in the
// requested channel representation at fixed R. In the PFS channels it is the
// block-diagonal number operator; in the vacuum-Fock channels each diabatic
// block is (a^dag - xi)(a - xi) with xi = -chi*mu_alpha(R)/omega, optionally
// rotated into the adiabatic electronic basis.
Eigen::MatrixXd polarized_number_operator(const DiabaticModel& model, double r,
                                          double chi, double omega_c,
                                          const BasisSpec& basis);

struct PolaritonField {
  DiabaticModel model;
  BasisSpec basis;
  ModelVariant variant = ModelVariant::PauliFierz;
  double chi = 0.0;
  double omega_c = 0.0;
  Eigen::VectorXd grid;                  // R values, ascending
  Eigen::MatrixXd energies;              // n_points x n_states, sorted per point
  std::vector<Eigen::MatrixXd> states;   // per point: n_channels x n_states
  Eigen::MatrixXd photon_number;         // n_points x n_states

  int n_points() const { return static_cast<int>(grid.size()); }
  int n_states() const { return static_cast<int>(energies.cols()); }
};

// Eigensolve H_pl on every grid point. Eigenvector phases are fixed by
// maximal-overlap continuity with the previous grid point (first point:
// largest-magnitude component positive). Throws polfock::NumericalError with
// the offending R if the eigensolver fails.
PolaritonField eigensolve_field(const DiabaticModel& model,
                                const Eigen::VectorXd& grid, double chi,
                                double omega_c, ModelVariant variant,
                                const BasisSpec& basis, int n_states);

struct AvoidedCrossing {
  double r;    // refined location of the local gap minimum
  double gap;  // refined E_k - E_j at the minimum (clamped at 0)
};

// Local minima of E_k(R) - E_j(R): grid scan plus parabolic refinement.
// Returns an empty list when the gap has no interior local minimum.
std::vector<AvoidedCrossing> find_avoided_crossings(const PolaritonField& field,
                                                    int j, int k);

// Nuclear-kinetic machinery: per-diabat derivative-coupling matrices and the
// second-order (coupling squared) potential-like term. For the linear-dipole
// model family the matrices are R-independent.
struct KineticBlocks {
  Eigen::MatrixXd dc_ionic;      // <m_I|d/dR|n_I>, antisymmetric
  Eigen::MatrixXd dc_covalent;   // <m_C|d/dR|n_C>
  Eigen::MatrixXd second_order;  // block-diagonal D^T D / (2M) over both diabats
};

KineticBlocks nuclear_kinetic_blocks(const DiabaticModel& model, int n_fock,
                                     double chi, double omega_c);

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace polfock

#endif
