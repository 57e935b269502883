#include "polfock/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "polfock/constants.hpp"

namespace polfock {

double DiabaticModel::v_ionic(double r) const {
  return a_ion * std::exp(-beta_ion * r) - 1.0 / r + e_ion_offset;
}

double DiabaticModel::v_covalent(double r) const {
  return a_cov * std::exp(-beta_cov * r);
}

double DiabaticModel::v_coupling(double r) const {
  return b_coup * std::exp(-gamma_coup * r);
}

double DiabaticModel::mu_ionic(double r) const {
  return mu_ion_offset + mu_ion_slope * r;
}

double DiabaticModel::mu_covalent(double r) const {
  return mu_cov_offset + mu_cov_slope * r;
}

double DiabaticModel::dmu_ionic(double /*r*/) const { return mu_ion_slope; }

double DiabaticModel::dmu_covalent(double /*r*/) const { return mu_cov_slope; }

void DiabaticModel::require_in_window(double r) const {
  if (!(r >= r_min && r <= r_max)) {
    std::ostringstream msg;
    msg << "R = " << r << " bohr outside the model window [" << r_min << ", "
        << r_max << "]";
    throw std::domain_error(msg.str());
  }
}

ModelPoint evaluate(const DiabaticModel& model, double r) {
  model.require_in_window(r);
  return ModelPoint{model.v_ionic(r),    model.v_covalent(r),
                    model.v_coupling(r), model.mu_ionic(r),
                    model.mu_covalent(r), model.dmu_ionic(r),
                    model.dmu_covalent(r)};
}

AdiabaticSlice adiabatize(const DiabaticModel& model, double r) {
  const ModelPoint p = evaluate(model, r);

  // H_el = [[V_I, V_IC], [V_IC, V_C]] in the (|I>, |C>) basis. With
  // mean = (V_I+V_C)/2, delta = (V_C-V_I)/2 and rho = sqrt(delta^2+V_IC^2),
  // the eigenpair is E_g/e = mean -/+ rho and the rotation angle obeys
  // 2t = atan2(V_IC, delta), which keeps t continuous through the crossing.
  const double mean = 0.5 * (p.v_ionic + p.v_covalent);
  const double delta = 0.5 * (p.v_covalent - p.v_ionic);
  const double rho = std::hypot(delta, p.v_coupling);
  const double theta = 0.5 * std::atan2(p.v_coupling, delta);

  const double c = std::cos(theta);
  const double s = std::sin(theta);

  AdiabaticSlice slice;
  slice.e_ground = mean - rho;
  slice.e_excited = mean + rho;
  slice.mixing_angle = theta;
  slice.mu_gg = c * c * p.mu_ionic + s * s * p.mu_covalent;
  slice.mu_ee = s * s * p.mu_ionic + c * c * p.mu_covalent;
  slice.mu_eg = s * c * (p.mu_ionic - p.mu_covalent);
  return slice;
}

double diabatic_crossing(const DiabaticModel& model) {
  auto gap = [&](double r) { return model.v_ionic(r) - model.v_covalent(r); };

  // bracket the sign change on a coarse scan, then bisect
  const int n_scan = 4000;
  const double dr = (model.r_max - model.r_min) / n_scan;
  double lo = model.r_min;
  double glo = gap(lo);
  double hi = lo;
  bool found = false;
  for (int i = 1; i <= n_scan; ++i) {
    hi = model.r_min + i * dr;
    const double ghi = gap(hi);
    if (glo == 0.0) return lo;
    if (glo * ghi < 0.0) {
      found = true;
      break;
    }
    lo = hi;
    glo = ghi;
  }
  if (!found) throw std::runtime_error("diabats do not cross inside the model window");

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = gap(mid);
    if (gm == 0.0 || hi - lo < 1e-13) return mid;
    if (gm * glo < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  return 0.5 * (lo + hi);
}

double ionic_well_minimum(const DiabaticModel& model) {
  // dV_I/dR = -a*b*exp(-b R) + 1/R^2; bisect the sign change of the slope
  auto slope = [&](double r) {
    return -model.a_ion * model.beta_ion * std::exp(-model.beta_ion * r) +
           1.0 / (r * r);
  };
  double lo = model.r_min, hi = model.r_max;
  if (slope(lo) >= 0.0) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-13) break;
  }
  return 0.5 * (lo + hi);
}

DiabaticModel lif_default() {
  DiabaticModel m;
  m.name = "lif-default";
  m.a_ion = 27.994;
  m.beta_ion = 2.0829;
  m.e_ion_offset = 1.0 / 13.5;  // pins the diabatic crossing at ~13.5 bohr
  m.a_cov = 95.514;
  m.beta_cov = 2.6;
  m.b_coup = 0.14844;
  m.gamma_coup = 0.34;
  m.mu_ion_offset = 0.0;
  m.mu_ion_slope = 1.0;  // unit charge-transfer dipole
  m.mu_cov_offset = 0.0;
  m.mu_cov_slope = 0.0;
  m.mass = units::lif_reduced_mass_me;
  m.r_min = 0.5;
  m.r_max = 100.0;
  return m;
}

DiabaticModel named_model(const std::string& name) {
  if (name == "lif-default") return lif_default();
  throw std::invalid_argument("unknown model name: " + name);
}

}  // namespace polfock
