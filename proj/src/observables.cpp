#include "polfock/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace polfock {

namespace {

void require_same_layout(const Wavepacket& wp, const PolaritonField& field) {
  if (field.basis.kind != wp.basis.kind || field.basis.n_fock != wp.basis.n_fock)
    throw std::invalid_argument("field basis does not match the wavepacket");
  if (field.n_points() != wp.grid.n_points ||
      std::abs(field.grid[0] - wp.grid.r_min) > 1e-12)
    throw std::invalid_argument("field grid does not match the wavepacket");
}

// amplitudes at one grid point rotated into the diabatic x PFS channels
Eigen::VectorXcd pfs_amplitudes_at(const Wavepacket& wp, int i,
                                   const DiabaticModel& model, double chi,
                                   double omega_c) {
  const int nf = wp.basis.n_fock;
  Eigen::VectorXcd c = wp.amps.row(i).transpose();

  if (wp.basis.kind == BasisKind::DiabaticPFS) return c;

  const double r = wp.grid.r_min + i * wp.grid.dr();
  if (wp.basis.kind == BasisKind::AdiabaticFock) {
    const AdiabaticSlice s = adiabatize(model, r);
    const double ct = std::cos(s.mixing_angle), st = std::sin(s.mixing_angle);
    Eigen::VectorXcd dia(2 * nf);
    // |g> = cos t |I> - sin t |C>, |e> = sin t |I> + cos t |C>
    dia.head(nf) = ct * c.head(nf) + st * c.tail(nf);
    dia.tail(nf) = -st * c.head(nf) + ct * c.tail(nf);
    c = dia;
  }

  // vacuum Fock -> PFS per diabat: <n_alpha|m> = S(chi mu_alpha / omega)[n,m]
  const ModelPoint p = evaluate(model, r);
  const FockSpace space(omega_c, nf);
  Eigen::VectorXcd out(2 * nf);
  const Eigen::MatrixXd s_ion =
      overlap_matrix(space, Displacement{chi * p.mu_ionic / omega_c});
  const Eigen::MatrixXd s_cov =
      overlap_matrix(space, Displacement{chi * p.mu_covalent / omega_c});
  out.head(nf) = s_ion * c.head(nf);
  out.tail(nf) = s_cov * c.tail(nf);
  return out;
}

}  // namespace

Eigen::VectorXd pfs_populations(const Wavepacket& wp, const DiabaticModel& model,
                                double chi, double omega_c) {
  const int nf = wp.basis.n_fock;
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(nf);
  for (int i = 0; i < wp.grid.n_points; ++i) {
    const Eigen::VectorXcd c = pfs_amplitudes_at(wp, i, model, chi, omega_c);
    for (int n = 0; n < nf; ++n)
      rho[n] += std::norm(c[n]) + std::norm(c[nf + n]);
  }
  return rho * wp.grid.dr();
}

double photon_number(const Wavepacket& wp, const DiabaticModel& model,
                     double chi, double omega_c) {
  const Eigen::VectorXd rho = pfs_populations(wp, model, chi, omega_c);
  double n_exp = 0.0;
  for (int n = 0; n < rho.size(); ++n) n_exp += n * rho[n];
  return n_exp;
}

double dissociation_probability(const Wavepacket& wp, const PolaritonField& field,
                                double r_cut) {
  require_same_layout(wp, field);
  double p = 0.0;
  for (int i = 0; i < wp.grid.n_points; ++i) {
    if (field.grid[i] <= r_cut) continue;
    const std::complex<double> amp =
        field.states[i].col(0).cast<std::complex<double>>().dot(
            wp.amps.row(i).transpose());
    p += std::norm(amp);
  }
  return p * wp.grid.dr();
}

Eigen::VectorXd polariton_populations(const Wavepacket& wp,
                                      const PolaritonField& field) {
  require_same_layout(wp, field);
  Eigen::VectorXd pops = Eigen::VectorXd::Zero(field.n_states());
  for (int i = 0; i < wp.grid.n_points; ++i) {
    const Eigen::VectorXcd c = wp.amps.row(i).transpose();
    for (int j = 0; j < field.n_states(); ++j) {
      const std::complex<double> amp =
          field.states[i].col(j).cast<std::complex<double>>().dot(c);
      pops[j] += std::norm(amp);
    }
  }
  return pops * wp.grid.dr();
}

std::vector<double>& ObservableSeries::channel(const std::string& name) {
  for (auto& [n, v] : channels)
    if (n == name) return v;
  channels.emplace_back(name, std::vector<double>{});
  return channels.back().second;
}

const std::vector<double>* ObservableSeries::find(const std::string& name) const {
  for (const auto& [n, v] : channels)
    if (n == name) return &v;
  return nullptr;
}

bool locate_liac(const DiabaticModel& model, double omega_c, int photon_delta,
                 double& r_out) {
  if (photon_delta == 0) {
    r_out = diabatic_crossing(model);
    return true;
  }
  // resonances V_C - V_I = n*omega are searched outward from the well, where
  // the diabatic gap decreases monotonically toward the crossing
  auto gap = [&](double r) { return model.v_covalent(r) - model.v_ionic(r); };
  double lo = ionic_well_minimum(model);
  double hi = diabatic_crossing(model);
  const double target = photon_delta * omega_c;
  if (gap(lo) <= target) return false;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12) break;
  }
  r_out = 0.5 * (lo + hi);
  return true;
}

std::vector<SplittingRow> splitting_scan(const DiabaticModel& model,
                                         double omega_c,
                                         const std::vector<double>& chi_values,
                                         const std::vector<ModelVariant>& variants,
                                         int max_photon_delta) {
  std::vector<SplittingRow> rows;

  // successive local zooms; the innermost pass resolves tiny gaps against
  // the steep diabatic slopes
  struct Pass {
    double half_window;
    int n_points;
  };
  const Pass passes[] = {{0.8, 321}, {0.04, 161}, {0.002, 161}};

  for (const ModelVariant variant : variants) {
    BasisSpec basis;
    basis.kind = variant == ModelVariant::PauliFierz ? BasisKind::DiabaticPFS
                                                     : BasisKind::AdiabaticFock;
    basis.n_fock = 12;

    for (const double chi : chi_values) {
      for (int n = 0; n <= max_photon_delta; ++n) {
        SplittingRow row{variant, chi, n, false, 0.0, 0.0, 0.0};
        double center = 0.0;
        if (locate_liac(model, omega_c, n, center)) {
          for (const Pass& pass : passes) {
            Eigen::VectorXd local(pass.n_points);
            const double lo = std::max(center - pass.half_window, model.r_min);
            const double dr = 2.0 * pass.half_window / (pass.n_points - 1);
            for (int i = 0; i < pass.n_points; ++i) local[i] = lo + i * dr;

            const PolaritonField field = eigensolve_field(
                model, local, chi, omega_c, variant, basis, n + 2);
            const auto crossings = find_avoided_crossings(field, n, n + 1);
            double best = 1e300;
            bool found_here = false;
            for (const auto& c : crossings) {
              if (std::abs(c.r - center) < best) {
                best = std::abs(c.r - center);
                row.r_star = c.r;
                row.gap = c.gap;
                found_here = true;
              }
            }
            if (!found_here) break;
            row.found = true;
            center = row.r_star;
          }
          if (row.found) {
            const ModelPoint p = evaluate(model, row.r_star);
            const double lambda = chi * (p.mu_ionic - p.mu_covalent) / omega_c;
            const FockSpace space(omega_c, std::max(n + 2, 2));
            const Eigen::MatrixXd s = overlap_matrix(space, Displacement{lambda});
            row.prediction = 2.0 * std::abs(p.v_coupling * s(n, 0));
          }
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace polfock
