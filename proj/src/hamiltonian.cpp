#include "polfock/hamiltonian.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polfock {

namespace {

// kron(A_el, B_ph) for 2x2 electronic A and n_fock-dim photonic B, matching
// the channel layout c = alpha * n_fock + n
Eigen::MatrixXd kron2(const Eigen::Matrix2d& a, const Eigen::MatrixXd& b) {
  const int nf = static_cast<int>(b.rows());
  Eigen::MatrixXd out(2 * nf, 2 * nf);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block(i * nf, j * nf, nf, nf) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd photon_diag(double omega_c, int n_fock) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_fock, n_fock);
  for (int n = 0; n < n_fock; ++n) h(n, n) = (n + 0.5) * omega_c;
  return h;
}

}  // namespace

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::AdiabaticFock: return "adiabatic-fock";
    case BasisKind::DiabaticFock: return "diabatic-fock";
    case BasisKind::DiabaticPFS: return "diabatic-pfs";
  }
  return "?";
}

std::string to_string(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::PauliFierz: return "pauli-fierz";
    case ModelVariant::Rabi: return "rabi";
    case ModelVariant::JaynesCummings: return "jaynes-cummings";
  }
  return "?";
}

Eigen::MatrixXd build_hpl_fock(const DiabaticModel& model, double r, double chi,
                               double omega_c, ModelVariant variant, int n_fock) {
  const AdiabaticSlice s = adiabatize(model, r);
  const FockSpace space(omega_c, n_fock);
  const LadderOps ops = ladder_matrices(space);
  const Eigen::MatrixXd q_op = ops.create + ops.annihilate;  // a^dag + a
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n_fock, n_fock);

  Eigen::Matrix2d e_el;
  e_el << s.e_ground, 0.0, 0.0, s.e_excited;

  Eigen::MatrixXd h = kron2(e_el, id);
  h += kron2(Eigen::Matrix2d::Identity(), photon_diag(omega_c, n_fock));

  switch (variant) {
    case ModelVariant::PauliFierz: {
      Eigen::Matrix2d mu;
      mu << s.mu_gg, s.mu_eg, s.mu_eg, s.mu_ee;
      const Eigen::Matrix2d dse = (chi * chi / omega_c) * (mu * mu).eval();
      h += kron2(chi * mu, q_op);
      h += kron2(dse, id);
      break;
    }
    case ModelVariant::Rabi: {
      Eigen::Matrix2d mu;
      mu << 0.0, s.mu_eg, s.mu_eg, 0.0;
      h += kron2(chi * mu, q_op);
      break;
    }
    case ModelVariant::JaynesCummings: {
      // sigma^dag a + sigma a^dag couples (e,n) <-> (g,n+1)
      const double g = chi * s.mu_eg;
      for (int n = 0; n + 1 < n_fock; ++n) {
        const int ge = 0 * n_fock + (n + 1);
        const int ex = 1 * n_fock + n;
        h(ex, ge) += g * std::sqrt(n + 1.0);
        h(ge, ex) += g * std::sqrt(n + 1.0);
      }
      break;
    }
  }
  return h;
}

Eigen::MatrixXd build_hpl_fock_diabatic(const DiabaticModel& model, double r,
                                        double chi, double omega_c, int n_fock) {
  const ModelPoint p = evaluate(model, r);
  const FockSpace space(omega_c, n_fock);
  const LadderOps ops = ladder_matrices(space);
  const Eigen::MatrixXd q_op = ops.create + ops.annihilate;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n_fock, n_fock);

  Eigen::Matrix2d h_el;
  h_el << p.v_ionic, p.v_coupling, p.v_coupling, p.v_covalent;
  Eigen::Matrix2d mu = Eigen::Matrix2d::Zero();
  mu(0, 0) = p.mu_ionic;
  mu(1, 1) = p.mu_covalent;

  Eigen::MatrixXd h = kron2(h_el, id);
  h += kron2(Eigen::Matrix2d::Identity(), photon_diag(omega_c, n_fock));
  h += kron2(chi * mu, q_op);
  h += kron2((chi * chi / omega_c) * (mu * mu).eval(), id);
  return h;
}

Eigen::MatrixXd build_hpl_pfs(const DiabaticModel& model, double r, double chi,
                              double omega_c, int n_fock) {
  const ModelPoint p = evaluate(model, r);
  const FockSpace space(omega_c, n_fock);

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n_fock, 2 * n_fock);
  for (int n = 0; n < n_fock; ++n) {
    h(n, n) = p.v_ionic + (n + 0.5) * omega_c;
    h(n_fock + n, n_fock + n) = p.v_covalent + (n + 0.5) * omega_c;
  }

  // <n_I|m_C> = <n|D(+lambda)|m>, lambda = chi (mu_I - mu_C) / omega
  const double lambda = chi * (p.mu_ionic - p.mu_covalent) / omega_c;
  const Eigen::MatrixXd s = overlap_matrix(space, Displacement{lambda});
  h.block(0, n_fock, n_fock, n_fock) = p.v_coupling * s;
  h.block(n_fock, 0, n_fock, n_fock) = p.v_coupling * s.transpose();
  return h;
}

Eigen::MatrixXd build_hpl(const DiabaticModel& model, double r, double chi,
                          double omega_c, ModelVariant variant,
                          const BasisSpec& basis) {
  if (variant != ModelVariant::PauliFierz &&
      basis.kind != BasisKind::AdiabaticFock) {
    throw std::invalid_argument(
        "Rabi and Jaynes-Cummings variants exist only in the adiabatic-Fock basis");
  }
  switch (basis.kind) {
    case BasisKind::AdiabaticFock:
      return build_hpl_fock(model, r, chi, omega_c, variant, basis.n_fock);
    case BasisKind::DiabaticFock:
      return build_hpl_fock_diabatic(model, r, chi, omega_c, basis.n_fock);
    case BasisKind::DiabaticPFS:
      return build_hpl_pfs(model, r, chi, omega_c, basis.n_fock);
  }
  throw std::logic_error("unreachable basis kind");
}

PotentialBuilder make_potential_builder(const DiabaticModel& model, double chi,
                                        double omega_c, ModelVariant variant,
                                        const BasisSpec& basis) {
  return [=](double r) { return build_hpl(model, r, chi, omega_c, variant, basis); };
}

Eigen::MatrixXd polarized_number_operator(const DiabaticModel& model, double r,
                                          double chi, double omega_c,
                                          const BasisSpec& basis) {
  const int nf = basis.n_fock;
  if (basis.kind == BasisKind::DiabaticPFS) {
    Eigen::MatrixXd num = Eigen::MatrixXd::Zero(2 * nf, 2 * nf);
    for (int n = 0; n < nf; ++n) {
      num(n, n) = n;
      num(nf + n, nf + n) = n;
    }
    return num;
  }

  const ModelPoint p = evaluate(model, r);
  const FockSpace space(omega_c, nf);
  const LadderOps ops = ladder_matrices(space);
  const Eigen::MatrixXd q_op = ops.create + ops.annihilate;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(nf, nf);

  // per-diabat b^dag b = a^dag a - xi (a + a^dag) + xi^2, xi = -chi mu/omega
  auto block = [&](double mu) {
    const double xi = -chi * mu / omega_c;
    return (ops.number - xi * q_op + xi * xi * id).eval();
  };
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(2 * nf, 2 * nf);
  num.block(0, 0, nf, nf) = block(p.mu_ionic);
  num.block(nf, nf, nf, nf) = block(p.mu_covalent);

  if (basis.kind == BasisKind::AdiabaticFock) {
    // rotate the diabatic blocks into the adiabatic electronic basis:
    // |g> = cos t |I> - sin t |C>, |e> = sin t |I> + cos t |C>
    const AdiabaticSlice s = adiabatize(model, r);
    Eigen::Matrix2d u;  // columns are |g>, |e> expressed in (I, C)
    u << std::cos(s.mixing_angle), std::sin(s.mixing_angle),
        -std::sin(s.mixing_angle), std::cos(s.mixing_angle);
    const Eigen::MatrixXd u_full = kron2(u, id);
    num = (u_full.transpose() * num * u_full).eval();
  }
  return num;
}

PolaritonField eigensolve_field(const DiabaticModel& model,
                                const Eigen::VectorXd& grid, double chi,
                                double omega_c, ModelVariant variant,
                                const BasisSpec& basis, int n_states) {
  const int n_pts = static_cast<int>(grid.size());
  const int n_ch = basis.n_channels();
  if (n_states < 1 || n_states > n_ch)
    throw std::invalid_argument("n_states must be in [1, n_channels]");
  for (int i = 1; i < n_pts; ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("grid must be sorted ascending");

  PolaritonField field;
  field.model = model;
  field.basis = basis;
  field.variant = variant;
  field.chi = chi;
  field.omega_c = omega_c;
  field.grid = grid;
  field.energies.resize(n_pts, n_states);
  field.photon_number.resize(n_pts, n_states);
  field.states.resize(n_pts);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  for (int i = 0; i < n_pts; ++i) {
    const double r = grid[i];
    solver.compute(build_hpl(model, r, chi, omega_c, variant, basis));
    if (solver.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "eigensolver failed at R = " << r << " bohr";
      throw NumericalError(msg.str());
    }
    field.energies.row(i) = solver.eigenvalues().head(n_states);
    Eigen::MatrixXd vec = solver.eigenvectors().leftCols(n_states);

    if (i == 0) {
      for (int j = 0; j < n_states; ++j) {
        int imax = 0;
        vec.col(j).cwiseAbs().maxCoeff(&imax);
        if (vec(imax, j) < 0.0) vec.col(j) = -vec.col(j);
      }
    } else {
      for (int j = 0; j < n_states; ++j) {
        if (field.states[i - 1].col(j).dot(vec.col(j)) < 0.0)
          vec.col(j) = -vec.col(j);
      }
    }
    field.states[i] = vec;

    const Eigen::MatrixXd num =
        polarized_number_operator(model, r, chi, omega_c, basis);
    for (int j = 0; j < n_states; ++j)
      field.photon_number(i, j) = vec.col(j).dot(num * vec.col(j));
  }
  return field;
}

std::vector<AvoidedCrossing> find_avoided_crossings(const PolaritonField& field,
                                                    int j, int k) {
  const int n_pts = field.n_points();
  if (j < 0 || k < 0 || j >= field.n_states() || k >= field.n_states())
    throw std::invalid_argument("surface index out of range");

  Eigen::VectorXd gap(n_pts);
  for (int i = 0; i < n_pts; ++i)
    gap[i] = field.energies(i, k) - field.energies(i, j);

  std::vector<AvoidedCrossing> out;
  for (int i = 1; i + 1 < n_pts; ++i) {
    if (!(gap[i] <= gap[i - 1] && gap[i] < gap[i + 1])) continue;

    // require prominence above eigensolver roundoff so flat (parallel) gap
    // profiles are not reported as crossings
    const double noise = 1e-13 * (1.0 + std::abs(field.energies(i, j)) +
                                  std::abs(field.energies(i, k)));
    if (std::max(gap[i - 1], gap[i + 1]) - gap[i] < noise) continue;

    // three-point parabolic vertex around the sampled minimum
    const double x0 = field.grid[i - 1], x1 = field.grid[i], x2 = field.grid[i + 1];
    const double y0 = gap[i - 1], y1 = gap[i], y2 = gap[i + 1];

    AvoidedCrossing c{x1, y1};
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom > 0.0) {
      const double h = 0.5 * (x2 - x0);
      double xr = x1 + 0.5 * h * (y0 - y2) / denom;
      xr = std::min(std::max(xr, x0), x2);
      const double yr = y1 - (y0 - y2) * (y0 - y2) / (8.0 * denom);
      c.r = xr;
      c.gap = std::max(yr, 0.0);
    }
    out.push_back(c);
  }
  return out;
}

KineticBlocks nuclear_kinetic_blocks(const DiabaticModel& model, int n_fock,
                                     double chi, double omega_c) {
  const FockSpace space(omega_c, n_fock);
  KineticBlocks blocks;
  // slopes are R-independent for the linear-dipole family
  const double r_ref = 0.5 * (model.r_min + model.r_max);
  blocks.dc_ionic =
      pfs_derivative_coupling(space, model.dmu_ionic(r_ref), chi);
  blocks.dc_covalent =
      pfs_derivative_coupling(space, model.dmu_covalent(r_ref), chi);

  const int nf = n_fock;
  blocks.second_order = Eigen::MatrixXd::Zero(2 * nf, 2 * nf);
  blocks.second_order.block(0, 0, nf, nf) =
      blocks.dc_ionic.transpose() * blocks.dc_ionic / (2.0 * model.mass);
  blocks.second_order.block(nf, nf, nf, nf) =
      blocks.dc_covalent.transpose() * blocks.dc_covalent / (2.0 * model.mass);
  return blocks;
}

}  // namespace polfock
