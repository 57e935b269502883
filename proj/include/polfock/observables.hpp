#ifndef POLFOCK_OBSERVABLES_HPP
#define POLFOCK_OBSERVABLES_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "polfock/dynamics.hpp"
#include "polfock/hamiltonian.hpp"

namespace polfock {

// Polarized-Fock photon-number populations rho_n, traced over the electronic
// label and R. Vacuum-Fock amplitudes are rotated into the PFS ladders per
// grid point first. For a normalized packet sum_n rho_n = 1.
Eigen::VectorXd pfs_populations(const Wavepacket& wp, const DiabaticModel& model,
                                double chi, double omega_c);

// <N> = <sum_alpha b_alpha^dag b_alpha> = sum_n n * rho_n
double photon_number(const Wavepacket& wp, const DiabaticModel& model,
                     double chi, double omega_c);

// Projection of the packet onto the lowest polariton surface, integrated over
// R > r_cut. The field must live on the packet's grid and basis.
double dissociation_probability(const Wavepacket& wp, const PolaritonField& field,
                                double r_cut);

// Populations of the polariton surfaces Phi_j.
Eigen::VectorXd polariton_populations(const Wavepacket& wp,
                                      const PolaritonField& field);

// Named time series emitted by the scenario drivers.
struct ObservableSeries {
  std::vector<double> times;
  std::vector<std::pair<std::string, std::vector<double>>> channels;

  std::vector<double>& channel(const std::string& name);
  const std::vector<double>* find(const std::string& name) const;
};

// One row of the light-induced-avoided-crossing scan (Fig.-2b style).
struct SplittingRow {
  ModelVariant variant;
  double chi;
  int photon_delta;   // 0 labels the bare electronic crossing R0
  bool found;
  double r_star;      // refined crossing location
  double gap;         // measured splitting
  double prediction;  // 2 V_IC(R*) |<n_I|0_C>|, the PFS estimate
};

// Diabatic-gap location of the photon_delta-quantum resonance
// V_C(R) - V_I(R) = n * omega (photon_delta = 0 falls back to the diabatic
// crossing). Returns false when there is no such resonance.
bool locate_liac(const DiabaticModel& model, double omega_c, int photon_delta,
                 double& r_out);

// Scan energy splittings at the crossings R0..R3 for each chi and variant,
// eigensolving on dense local grids around each crossing.
std::vector<SplittingRow> splitting_scan(const DiabaticModel& model,
                                         double omega_c,
                                         const std::vector<double>& chi_values,
                                         const std::vector<ModelVariant>& variants,
                                         int max_photon_delta = 3);

}  // namespace polfock

#endif
