#ifndef POLFOCK_MODEL_HPP
#define POLFOCK_MODEL_HPP

#include <string>

namespace polfock {

// Two-state diabatic molecular model on a single nuclear coordinate R (bohr).
// The diabats are an ionic/covalent pair of fixed functional form:
//
//   V_I(R)  = a_ion * exp(-beta_ion * R) - 1/R + e_ion_offset
//   V_C(R)  = a_cov * exp(-beta_cov * R)
//   V_IC(R) = b_coup * exp(-gamma_coup * R)
//   mu_I(R) = mu_ion_offset + mu_ion_slope * R
//   mu_C(R) = mu_cov_offset + mu_cov_slope * R
//
// |I> and |C> are strict diabats (R-independent electronic states), so the
// only electronic derivative couplings in any derived representation come
// from rotating to the adiabatic basis.
struct DiabaticModel {
  std::string name = "custom";

  double a_ion = 0.0;
  double beta_ion = 0.0;
  double e_ion_offset = 0.0;
  double a_cov = 0.0;
  double beta_cov = 0.0;
  double b_coup = 0.0;
  double gamma_coup = 0.0;
  double mu_ion_offset = 0.0;
  double mu_ion_slope = 1.0;
  double mu_cov_offset = 0.0;
  double mu_cov_slope = 0.0;

  // reduced nuclear mass, electron masses
  double mass = 0.0;

  // validity window for the nuclear coordinate
  double r_min = 0.5;
  double r_max = 100.0;

  double v_ionic(double r) const;
  double v_covalent(double r) const;
  double v_coupling(double r) const;
  double mu_ionic(double r) const;
  double mu_covalent(double r) const;
  double dmu_ionic(double r) const;
  double dmu_covalent(double r) const;

  // throws std::domain_error when r is outside [r_min, r_max]
  void require_in_window(double r) const;
};

// All diabatic quantities at one R.
struct ModelPoint {
  double v_ionic;
  double v_covalent;
  double v_coupling;
  double mu_ionic;
  double mu_covalent;
  double dmu_ionic;
  double dmu_covalent;
};

// Eigen-decomposition of the 2x2 electronic Hamiltonian at one R, with the
// diagonal diabatic dipole matrix rotated into the adiabatic basis.
struct AdiabaticSlice {
  double e_ground;
  double e_excited;
  double mixing_angle;  // rad; |g> = cos(t)|I> - sin(t)|C>, |e> = sin(t)|I> + cos(t)|C>
  double mu_gg;
  double mu_ee;
  double mu_eg;
};

ModelPoint evaluate(const DiabaticModel& model, double r);
AdiabaticSlice adiabatize(const DiabaticModel& model, double r);

// Location R0 of the single diabatic crossing V_I(R0) = V_C(R0) inside the
// window. Bisection to ~1e-12 bohr; throws std::runtime_error if the diabats
// do not cross.
double diabatic_crossing(const DiabaticModel& model);

// Position of the ionic-well minimum (the Franck-Condon region).
double ionic_well_minimum(const DiabaticModel& model);

// LiF-like defaults, calibrated so that the diabatic crossing sits at
// R0 ~ 13.5 bohr and the ionic well bottom at ~3.01 bohr with a ground-state
// Gaussian width parameter alpha = M*omega_vib/2 ~ 19.12 bohr^-2.
DiabaticModel lif_default();

// Registry lookup ("lif-default"); throws std::invalid_argument for unknown
// names.
DiabaticModel named_model(const std::string& name);

}  // namespace polfock

#endif
