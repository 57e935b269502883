#ifndef POLFOCK_DYNAMICS_HPP
#define POLFOCK_DYNAMICS_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "polfock/grid.hpp"
#include "polfock/hamiltonian.hpp"

namespace polfock {

// Complex amplitudes over (grid point x hybrid channel). The discrete norm
// is sum |psi|^2 * dr.
struct Wavepacket {
  RadialGrid grid;
  BasisSpec basis;
  Eigen::MatrixXcd amps;  // n_points x n_channels
  double time = 0.0;

  double norm() const;
  void normalize();
};

// N * exp(-alpha (R - r_center)^2) * Phi_j(R), normalized. The field must
// have been solved on exactly this grid. Throws std::invalid_argument when
// the Gaussian tail at either grid edge exceeds 1e-10 of the peak.
Wavepacket initial_state(const PolaritonField& field, const RadialGrid& grid,
                         double r_center, double width_alpha, int state_index);

struct PropagatorOptions {
  double dt = 1.0;
  bool include_derivative_couplings = false;
  // optional smooth absorbing mask near r_max for long dissociative runs
  bool absorbing_mask = false;
  double mask_start = 0.0;
};

// Split-operator propagator for a time-independent channel Hamiltonian
// V(R) + P^2/2M: half-step potential, full kinetic step per channel in
// momentum space, half-step potential. The channel potential matrix is
// eigendecomposed once per grid point and cached. With derivative couplings
// enabled (DiabaticPFS only) the momentum-coupled term exp(-dt k D / M) is
// applied in momentum space -- it commutes with the kinetic factor, so the
// combined kinetic+coupling step is exact -- and the D^T D/2M term joins the
// potential matrix.
class SplitOperatorPropagator {
 public:
  SplitOperatorPropagator(const PotentialBuilder& v_builder,
                          const RadialGrid& grid, int n_channels, double mass,
                          const PropagatorOptions& opts,
                          const KineticBlocks* kinetic_blocks = nullptr);

  // advance by n_steps * dt; throws NumericalError on norm instability
  void advance(Wavepacket& wp, int n_steps);

  double energy(const Wavepacket& wp) const;  // <psi|H|psi> / <psi|psi>

  const PropagatorOptions& options() const { return opts_; }
  double mass() const { return mass_; }

 private:
  void apply_potential(Eigen::MatrixXcd& amps,
                       const std::vector<Eigen::MatrixXcd>& props) const;
  void apply_kinetic(Eigen::MatrixXcd& amps) const;

  RadialGrid grid_;
  int n_channels_;
  double mass_;
  PropagatorOptions opts_;

  std::vector<Eigen::MatrixXd> v_raw_;          // cached potential matrices
  std::vector<Eigen::MatrixXcd> exp_v_half_;    // exp(-i V dt/2) per point
  std::vector<Eigen::MatrixXcd> exp_v_full_;
  Eigen::VectorXcd exp_t_full_;                 // exp(-i k^2 dt/2M) per k

  bool has_dc_ = false;
  Eigen::MatrixXd dc_matrix_;        // block-diagonal antisymmetric D
  Eigen::MatrixXcd dc_eigvecs_;      // iD = W diag(lam) W^dag
  Eigen::VectorXd dc_eigvals_;
  Eigen::VectorXd mask_;             // absorbing mask, 1 when disabled

  mutable Eigen::MatrixXcd k_space_;  // scratch
  long steps_since_norm_check_ = 0;
};

// Convenience trajectory driver: emits a snapshot (by calling the observer)
// at t = 0 and after every `snapshot_stride` steps.
using SnapshotObserver = std::function<void(const Wavepacket&)>;

void propagate(Wavepacket& wp, SplitOperatorPropagator& prop, int n_steps,
               int snapshot_stride, const SnapshotObserver& observer);

}  // namespace polfock

#endif
