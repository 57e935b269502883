#ifndef POLFOCK_SCENARIO_HPP
#define POLFOCK_SCENARIO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "polfock/dynamics.hpp"
#include "polfock/hamiltonian.hpp"
#include "polfock/model.hpp"
#include "polfock/observables.hpp"

namespace polfock {

inline constexpr const char* kVersion = "0.1.0";

// Configuration error with the offending field path in the message.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_path(field) {}
  std::string field_path;
};

// Resolved run description. All members are in atomic units except
// omega_c_ev, which is the configuration-boundary value.
struct ScenarioConfig {
  DiabaticModel model = lif_default();

  double chi = 0.007;
  std::vector<double> chi_scan;  // non-empty: fan the run out over chi values
  double omega_c_ev = 1.5;

  BasisSpec basis{BasisKind::DiabaticPFS, 8};
  ModelVariant variant = ModelVariant::PauliFierz;

  double r_min = 1.5;
  double r_max = 40.0;
  int n_points = 1024;

  double dt = 0.5;  // set by the energy-conservation convergence tests
  double t_final = 8000.0;
  int snapshot_stride = 40;

  double r_center = 3.01;
  double width_alpha = 19.12;
  // -1 selects the polariton state matching the upper diabat's zero-photon
  // channel at r_center (the photoexcited state)
  int state_index = -1;

  int n_states = 8;  // surfaces / polariton projections
  std::vector<std::string> observables;  // defaults chosen per command

  bool derivative_couplings = false;
  bool absorbing_mask = false;
  double mask_start = 36.0;

  std::vector<double> splitting_chis = {0.001, 0.002, 0.003, 0.004,
                                        0.005, 0.006, 0.007};
  std::vector<ModelVariant> splitting_variants = {ModelVariant::PauliFierz,
                                                  ModelVariant::Rabi};

  bool emit_cavity_sheets = false;
  int sheet_n_r = 96;
  int sheet_n_q = 48;

  std::string output_dir;
  bool emit_plots_data = false;
  bool write_trajectory = false;
  int jobs = 1;

  double omega_c() const;  // hartree

  std::vector<double> chis() const;  // chi_scan or {chi}
};

// Parse + validate. Unknown keys are rejected so typos cannot silently fall
// back to defaults.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config_file(const std::string& path);

// Fully-resolved configuration (model constants, units, code version) used
// as the reproducibility metadata block of every output file.
nlohmann::json resolved_json(const ScenarioConfig& config);

// Polariton state index whose character at r_center matches the upper
// diabat's zero-photon channel.
int select_initial_state(const PolaritonField& field, const ScenarioConfig& config);

struct RunResult {
  double chi = 0.0;
  int initial_state_index = -1;
  ObservableSeries series;
  nlohmann::json info;
};

struct ScenarioResult {
  std::string command;
  std::vector<RunResult> runs;
  nlohmann::json summary;
};

ScenarioResult run_downconversion(const ScenarioConfig& config);
ScenarioResult run_dissociation(const ScenarioConfig& config);

struct SurfacesResult {
  Eigen::VectorXd r;
  Eigen::MatrixXd energies;       // n_points x n_states
  Eigen::MatrixXd photon_number;  // n_points x n_states
  // optional (R, q) cavity sheets V_alpha + w^2/2 (q + q0_alpha)^2
  Eigen::VectorXd sheet_r, sheet_q;
  Eigen::MatrixXd sheet_ionic, sheet_covalent;  // n_r x n_q
  nlohmann::json summary;
};

SurfacesResult run_surfaces(const ScenarioConfig& config);

struct SplittingsResult {
  std::vector<SplittingRow> rows;
  nlohmann::json summary;
};

SplittingsResult run_splittings(const ScenarioConfig& config);

// Deterministic file emission (CSV series + JSON summaries + optional tidy
// long-format plots table). Returns the list of files written.
std::vector<std::string> write_downconversion_outputs(const ScenarioResult& r,
                                                      const ScenarioConfig& c,
                                                      const std::string& outdir);
std::vector<std::string> write_dissociation_outputs(const ScenarioResult& r,
                                                    const ScenarioConfig& c,
                                                    const std::string& outdir);
std::vector<std::string> write_surfaces_outputs(const SurfacesResult& r,
                                                const ScenarioConfig& c,
                                                const std::string& outdir);
std::vector<std::string> write_splittings_outputs(const SplittingsResult& r,
                                                  const ScenarioConfig& c,
                                                  const std::string& outdir);

std::string format_double(double x);  // shared %.12g formatting

}  // namespace polfock

#endif
