#include "polfock/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace polfock {

double Wavepacket::norm() const {
  return std::sqrt(amps.squaredNorm() * grid.dr());
}

void Wavepacket::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a null wavepacket");
  amps /= n;
}

Wavepacket initial_state(const PolaritonField& field, const RadialGrid& grid,
                         double r_center, double width_alpha, int state_index) {
  const int n_pts = grid.n_points;
  if (field.n_points() != n_pts ||
      std::abs(field.grid[0] - grid.r_min) > 1e-12 ||
      std::abs(field.grid[n_pts - 1] - (grid.r_max - grid.dr())) > 1e-9) {
    throw std::invalid_argument("polariton field was not solved on this grid");
  }
  if (state_index < 0 || state_index >= field.n_states())
    throw std::invalid_argument("initial state index out of range");
  if (!(width_alpha > 0.0))
    throw std::invalid_argument("gaussian width alpha must be positive");

  const double edge_lo = std::exp(-width_alpha * std::pow(grid.r_min - r_center, 2));
  const double edge_hi = std::exp(-width_alpha * std::pow(grid.r_max - r_center, 2));
  if (edge_lo > 1e-10 || edge_hi > 1e-10) {
    std::ostringstream msg;
    msg << "initial gaussian tail at the grid edge is " << std::max(edge_lo, edge_hi)
        << " of the peak (limit 1e-10); enlarge the grid or narrow the packet";
    throw std::invalid_argument(msg.str());
  }

  Wavepacket wp{grid, field.basis, Eigen::MatrixXcd(n_pts, field.basis.n_channels()), 0.0};
  const Eigen::VectorXd r = grid.points();
  for (int i = 0; i < n_pts; ++i) {
    const double env = std::exp(-width_alpha * std::pow(r[i] - r_center, 2));
    wp.amps.row(i) = env * field.states[i].col(state_index).transpose().cast<std::complex<double>>();
  }
  wp.normalize();
  return wp;
}

SplitOperatorPropagator::SplitOperatorPropagator(
    const PotentialBuilder& v_builder, const RadialGrid& grid, int n_channels,
    double mass, const PropagatorOptions& opts,
    const KineticBlocks* kinetic_blocks)
    : grid_(grid), n_channels_(n_channels), mass_(mass), opts_(opts) {
  if (!(mass_ > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(opts_.dt > 0.0)) throw std::invalid_argument("dt must be positive");

  const int n_pts = grid_.n_points;
  const Eigen::VectorXd r = grid_.points();
  const std::complex<double> im(0.0, 1.0);

  if (opts_.include_derivative_couplings) {
    if (kinetic_blocks == nullptr)
      throw std::invalid_argument(
          "derivative couplings requested but no kinetic blocks supplied");
    const int nf = static_cast<int>(kinetic_blocks->dc_ionic.rows());
    if (2 * nf != n_channels_)
      throw std::invalid_argument("kinetic block size does not match channels");
    has_dc_ = true;
    dc_matrix_ = Eigen::MatrixXd::Zero(n_channels_, n_channels_);
    dc_matrix_.block(0, 0, nf, nf) = kinetic_blocks->dc_ionic;
    dc_matrix_.block(nf, nf, nf, nf) = kinetic_blocks->dc_covalent;

    // iD is Hermitian; D = W (-i lam) W^dag with real lam
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(im * dc_matrix_);
    if (es.info() != Eigen::Success)
      throw NumericalError("eigendecomposition of the derivative coupling failed");
    dc_eigvecs_ = es.eigenvectors();
    dc_eigvals_ = es.eigenvalues();
  }

  v_raw_.resize(n_pts);
  exp_v_half_.resize(n_pts);
  exp_v_full_.resize(n_pts);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  for (int i = 0; i < n_pts; ++i) {
    Eigen::MatrixXd v = v_builder(r[i]);
    if (v.rows() != n_channels_ || v.cols() != n_channels_)
      throw std::invalid_argument("potential builder dimension mismatch");
    if (has_dc_ && kinetic_blocks)
      v += kinetic_blocks->second_order;
    v_raw_[i] = v;
    solver.compute(v);
    if (solver.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "potential eigendecomposition failed at R = " << r[i];
      throw NumericalError(msg.str());
    }
    const Eigen::MatrixXd& u = solver.eigenvectors();
    const Eigen::VectorXd& e = solver.eigenvalues();
    const Eigen::VectorXcd ph_half =
        (-im * 0.5 * opts_.dt * e.array()).exp().matrix();
    const Eigen::VectorXcd ph_full = (-im * opts_.dt * e.array()).exp().matrix();
    exp_v_half_[i] = u.cast<std::complex<double>>() * ph_half.asDiagonal() *
                     u.transpose().cast<std::complex<double>>();
    exp_v_full_[i] = u.cast<std::complex<double>>() * ph_full.asDiagonal() *
                     u.transpose().cast<std::complex<double>>();
  }

  const Eigen::VectorXd k = grid_.momenta();
  exp_t_full_.resize(n_pts);
  for (int j = 0; j < n_pts; ++j)
    exp_t_full_[j] = std::exp(-im * (k[j] * k[j] * opts_.dt / (2.0 * mass_)));

  mask_ = Eigen::VectorXd::Ones(n_pts);
  if (opts_.absorbing_mask) {
    const double start = opts_.mask_start;
    if (!(start > grid_.r_min && start < grid_.r_max))
      throw std::invalid_argument("absorbing mask start must lie inside the grid");
    for (int i = 0; i < n_pts; ++i) {
      const double ri = r[i];
      if (ri > start) {
        const double x = (ri - start) / (grid_.r_max - start);
        mask_[i] = std::pow(std::cos(0.5 * std::numbers::pi * x), 2);
      }
    }
  }
}

void SplitOperatorPropagator::apply_potential(
    Eigen::MatrixXcd& amps, const std::vector<Eigen::MatrixXcd>& props) const {
  for (int i = 0; i < grid_.n_points; ++i)
    amps.row(i) = (props[i] * amps.row(i).transpose()).transpose();
}

void SplitOperatorPropagator::apply_kinetic(Eigen::MatrixXcd& amps) const {
  const int n_pts = grid_.n_points;
  const Eigen::VectorXd k = grid_.momenta();
  k_space_ = amps;
  for (int c = 0; c < n_channels_; ++c) fft(k_space_.col(c).data(), n_pts);

  for (int c = 0; c < n_channels_; ++c)
    k_space_.col(c).array() *= exp_t_full_.array();

  if (has_dc_) {
    // exp(-dt k D / M) = W exp(i dt k lam / M) W^dag
    const std::complex<double> im(0.0, 1.0);
    for (int j = 0; j < n_pts; ++j) {
      const double theta = opts_.dt * k[j] / mass_;
      Eigen::VectorXcd u = dc_eigvecs_.adjoint() * k_space_.row(j).transpose();
      u.array() *= (im * theta * dc_eigvals_.array()).exp();
      k_space_.row(j) = (dc_eigvecs_ * u).transpose();
    }
  }

  for (int c = 0; c < n_channels_; ++c) ifft(k_space_.col(c).data(), n_pts);
  amps = k_space_;
}

void SplitOperatorPropagator::advance(Wavepacket& wp, int n_steps) {
  if (n_steps <= 0) return;
  if (wp.amps.rows() != grid_.n_points || wp.amps.cols() != n_channels_)
    throw std::invalid_argument("wavepacket does not match the propagator layout");

  const double norm_before = wp.norm();

  apply_potential(wp.amps, exp_v_half_);
  for (int s = 0; s < n_steps; ++s) {
    apply_kinetic(wp.amps);
    apply_potential(wp.amps, s + 1 < n_steps ? exp_v_full_ : exp_v_half_);
    if (opts_.absorbing_mask)
      wp.amps.array().colwise() *= mask_.array();
  }
  wp.time += n_steps * opts_.dt;

  steps_since_norm_check_ += n_steps;
  if (!opts_.absorbing_mask && steps_since_norm_check_ >= 1000) {
    const double drift = std::abs(wp.norm() - norm_before);
    const double budget = 1e-8 * (double(steps_since_norm_check_) / 1000.0);
    if (drift > budget) {
      std::ostringstream msg;
      msg << "norm drift " << drift << " over " << steps_since_norm_check_
          << " steps exceeds the stability budget; reduce dt or enlarge the grid";
      throw NumericalError(msg.str());
    }
    steps_since_norm_check_ = 0;
  }
}

double SplitOperatorPropagator::energy(const Wavepacket& wp) const {
  const int n_pts = grid_.n_points;
  const double dr = grid_.dr();

  double e_pot = 0.0;
  for (int i = 0; i < n_pts; ++i) {
    const Eigen::VectorXcd row = wp.amps.row(i).transpose();
    e_pot += row.dot(v_raw_[i] * row).real();
  }
  e_pot *= dr;

  k_space_ = wp.amps;
  for (int c = 0; c < n_channels_; ++c) fft(k_space_.col(c).data(), n_pts);
  const Eigen::VectorXd k = grid_.momenta();

  double e_kin = 0.0;
  for (int j = 0; j < n_pts; ++j)
    e_kin += (k[j] * k[j] / (2.0 * mass_)) * k_space_.row(j).squaredNorm();
  e_kin *= dr / n_pts;  // Parseval for the unnormalized forward transform

  double e_dc = 0.0;
  if (has_dc_) {
    const std::complex<double> im(0.0, 1.0);
    for (int j = 0; j < n_pts; ++j) {
      const Eigen::VectorXcd row = k_space_.row(j).transpose();
      // H_dc(k) = -i k D / M
      e_dc += (row.dot((-im * k[j] / mass_) * (dc_matrix_ * row))).real();
    }
    e_dc *= dr / n_pts;
  }

  const double nrm2 = wp.amps.squaredNorm() * dr;
  return (e_pot + e_kin + e_dc) / nrm2;
}

void propagate(Wavepacket& wp, SplitOperatorPropagator& prop, int n_steps,
               int snapshot_stride, const SnapshotObserver& observer) {
  if (snapshot_stride <= 0) throw std::invalid_argument("snapshot stride must be positive");
  if (observer) observer(wp);
  int done = 0;
  while (done < n_steps) {
    const int chunk = std::min(snapshot_stride, n_steps - done);
    prop.advance(wp, chunk);
    done += chunk;
    if (observer) observer(wp);
  }
}

}  // namespace polfock
