#include "polfock/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "polfock/constants.hpp"

namespace polfock {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::string& path,
                         const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key))
      throw ConfigError(path + "." + key, "unknown configuration key");
  }
}

double get_number(const json& j, const std::string& path, const std::string& key,
                  double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError(path + "." + key, "expected a number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& path, const std::string& key,
            int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw ConfigError(path + "." + key, "expected an integer");
  return j.at(key).get<int>();
}

bool get_bool(const json& j, const std::string& path, const std::string& key,
              bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean())
    throw ConfigError(path + "." + key, "expected a boolean");
  return j.at(key).get<bool>();
}

BasisKind parse_basis_kind(const std::string& s, const std::string& path) {
  if (s == "diabatic-pfs") return BasisKind::DiabaticPFS;
  if (s == "adiabatic-fock") return BasisKind::AdiabaticFock;
  throw ConfigError(path, "unknown basis kind '" + s +
                              "' (expected diabatic-pfs or adiabatic-fock)");
}

ModelVariant parse_variant(const std::string& s, const std::string& path) {
  if (s == "pauli-fierz") return ModelVariant::PauliFierz;
  if (s == "rabi") return ModelVariant::Rabi;
  if (s == "jaynes-cummings") return ModelVariant::JaynesCummings;
  throw ConfigError(path, "unknown model variant '" + s + "'");
}

DiabaticModel parse_model(const json& j) {
  const std::string path = "model";
  reject_unknown_keys(j, path,
                      {"name", "a_ion", "beta_ion", "e_ion_offset", "a_cov",
                       "beta_cov", "b_coup", "gamma_coup", "mu_ion_offset",
                       "mu_ion_slope", "mu_cov_offset", "mu_cov_slope", "mass",
                       "r_min", "r_max"});
  std::string name = "lif-default";
  if (j.contains("name")) name = j.at("name").get<std::string>();

  DiabaticModel m;
  if (name == "custom") {
    m.name = "custom";
    m.mass = units::lif_reduced_mass_me;
  } else {
    try {
      m = named_model(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path + ".name", e.what());
    }
  }

  auto override_field = [&](const char* key, double& target) {
    target = get_number(j, path, key, target);
  };
  override_field("a_ion", m.a_ion);
  override_field("beta_ion", m.beta_ion);
  override_field("e_ion_offset", m.e_ion_offset);
  override_field("a_cov", m.a_cov);
  override_field("beta_cov", m.beta_cov);
  override_field("b_coup", m.b_coup);
  override_field("gamma_coup", m.gamma_coup);
  override_field("mu_ion_offset", m.mu_ion_offset);
  override_field("mu_ion_slope", m.mu_ion_slope);
  override_field("mu_cov_offset", m.mu_cov_offset);
  override_field("mu_cov_slope", m.mu_cov_slope);
  override_field("mass", m.mass);
  override_field("r_min", m.r_min);
  override_field("r_max", m.r_max);

  if (!(m.mass > 0.0)) throw ConfigError(path + ".mass", "must be positive");
  if (!(m.r_max > m.r_min)) throw ConfigError(path + ".r_max", "window is empty");
  if (!(m.mu_ion_slope > 0.0))
    throw ConfigError(path + ".mu_ion_slope",
                      "the ionic dipole must increase with R");
  try {
    diabatic_crossing(m);
  } catch (const std::exception& e) {
    throw ConfigError(path, std::string("invalid diabats: ") + e.what());
  }
  return m;
}

}  // namespace

double ScenarioConfig::omega_c() const { return units::ev_to_hartree(omega_c_ev); }

std::vector<double> ScenarioConfig::chis() const {
  if (!chi_scan.empty()) return chi_scan;
  return {chi};
}

ScenarioConfig parse_config(const json& j) {
  ScenarioConfig c;
  reject_unknown_keys(j, "config",
                      {"model", "cavity", "basis", "variant", "grid", "time",
                       "initial_state", "observables", "derivative_couplings",
                       "absorbing_mask", "splittings", "surfaces", "output",
                       "jobs", "n_states"});

  if (j.contains("model")) c.model = parse_model(j.at("model"));

  if (j.contains("cavity")) {
    const json& cav = j.at("cavity");
    reject_unknown_keys(cav, "cavity", {"chi", "chi_scan", "omega_c_ev"});
    c.chi = get_number(cav, "cavity", "chi", c.chi);
    c.omega_c_ev = get_number(cav, "cavity", "omega_c_ev", c.omega_c_ev);
    if (cav.contains("chi_scan")) {
      if (!cav.at("chi_scan").is_array())
        throw ConfigError("cavity.chi_scan", "expected an array of numbers");
      c.chi_scan.clear();
      for (const auto& v : cav.at("chi_scan")) {
        if (!v.is_number()) throw ConfigError("cavity.chi_scan", "expected numbers");
        c.chi_scan.push_back(v.get<double>());
      }
    }
    if (c.chi < 0.0) throw ConfigError("cavity.chi", "must be non-negative");
    for (double x : c.chi_scan)
      if (x < 0.0) throw ConfigError("cavity.chi_scan", "must be non-negative");
    if (!(c.omega_c_ev > 0.0))
      throw ConfigError("cavity.omega_c_ev", "must be positive");
  }

  if (j.contains("basis")) {
    const json& b = j.at("basis");
    reject_unknown_keys(b, "basis", {"kind", "n_fock"});
    if (b.contains("kind"))
      c.basis.kind = parse_basis_kind(b.at("kind").get<std::string>(), "basis.kind");
    c.basis.n_fock = get_int(b, "basis", "n_fock", c.basis.n_fock);
    if (c.basis.n_fock < 2) throw ConfigError("basis.n_fock", "must be >= 2");
  }

  if (j.contains("variant"))
    c.variant = parse_variant(j.at("variant").get<std::string>(), "variant");

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown_keys(g, "grid", {"r_min", "r_max", "n_points"});
    c.r_min = get_number(g, "grid", "r_min", c.r_min);
    c.r_max = get_number(g, "grid", "r_max", c.r_max);
    c.n_points = get_int(g, "grid", "n_points", c.n_points);
    try {
      RadialGrid probe(c.r_min, c.r_max, c.n_points);
    } catch (const std::exception& e) {
      throw ConfigError("grid", e.what());
    }
    if (c.r_min < c.model.r_min || c.r_max > c.model.r_max)
      throw ConfigError("grid", "grid extends beyond the model window");
  }

  if (j.contains("time")) {
    const json& t = j.at("time");
    reject_unknown_keys(t, "time", {"dt", "t_final", "snapshot_stride"});
    c.dt = get_number(t, "time", "dt", c.dt);
    c.t_final = get_number(t, "time", "t_final", c.t_final);
    c.snapshot_stride = get_int(t, "time", "snapshot_stride", c.snapshot_stride);
    if (!(c.dt > 0.0)) throw ConfigError("time.dt", "must be positive");
    if (!(c.t_final >= c.dt))
      throw ConfigError("time.t_final", "must cover at least one step");
    if (c.snapshot_stride < 1)
      throw ConfigError("time.snapshot_stride", "must be >= 1");
  }

  if (j.contains("initial_state")) {
    const json& s = j.at("initial_state");
    reject_unknown_keys(s, "initial_state",
                        {"r_center", "width_alpha", "state_index"});
    c.r_center = get_number(s, "initial_state", "r_center", c.r_center);
    c.width_alpha = get_number(s, "initial_state", "width_alpha", c.width_alpha);
    c.state_index = get_int(s, "initial_state", "state_index", c.state_index);
    if (!(c.width_alpha > 0.0))
      throw ConfigError("initial_state.width_alpha", "must be positive");
  }

  if (j.contains("observables")) {
    if (!j.at("observables").is_array())
      throw ConfigError("observables", "expected an array of names");
    c.observables.clear();
    const std::set<std::string> known = {"photon_number", "pfs_populations",
                                         "dissociation_probability",
                                         "polariton_populations"};
    for (const auto& v : j.at("observables")) {
      const std::string name = v.get<std::string>();
      if (!known.count(name))
        throw ConfigError("observables", "unknown observable '" + name + "'");
      c.observables.push_back(name);
    }
  }

  c.derivative_couplings =
      get_bool(j, "config", "derivative_couplings", c.derivative_couplings);

  if (j.contains("absorbing_mask")) {
    const json& m = j.at("absorbing_mask");
    reject_unknown_keys(m, "absorbing_mask", {"enabled", "start"});
    c.absorbing_mask = get_bool(m, "absorbing_mask", "enabled", c.absorbing_mask);
    c.mask_start = get_number(m, "absorbing_mask", "start", c.mask_start);
    if (c.absorbing_mask && !(c.mask_start > c.r_min && c.mask_start < c.r_max))
      throw ConfigError("absorbing_mask.start", "must lie inside the grid");
  }

  if (j.contains("splittings")) {
    const json& s = j.at("splittings");
    reject_unknown_keys(s, "splittings", {"chi_values", "variants"});
    if (s.contains("chi_values")) {
      c.splitting_chis.clear();
      for (const auto& v : s.at("chi_values")) c.splitting_chis.push_back(v.get<double>());
      if (c.splitting_chis.empty())
        throw ConfigError("splittings.chi_values", "must not be empty");
    }
    if (s.contains("variants")) {
      c.splitting_variants.clear();
      for (const auto& v : s.at("variants"))
        c.splitting_variants.push_back(
            parse_variant(v.get<std::string>(), "splittings.variants"));
    }
  }

  if (j.contains("surfaces")) {
    const json& s = j.at("surfaces");
    reject_unknown_keys(s, "surfaces", {"cavity_sheets", "n_r", "n_q"});
    c.emit_cavity_sheets = get_bool(s, "surfaces", "cavity_sheets", false);
    c.sheet_n_r = get_int(s, "surfaces", "n_r", c.sheet_n_r);
    c.sheet_n_q = get_int(s, "surfaces", "n_q", c.sheet_n_q);
    if (c.sheet_n_r < 2 || c.sheet_n_q < 2)
      throw ConfigError("surfaces", "sheet mesh needs at least 2x2 points");
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown_keys(o, "output", {"directory", "emit_plots_data", "trajectory"});
    if (o.contains("directory")) c.output_dir = o.at("directory").get<std::string>();
    c.emit_plots_data = get_bool(o, "output", "emit_plots_data", c.emit_plots_data);
    c.write_trajectory = get_bool(o, "output", "trajectory", c.write_trajectory);
  }

  c.jobs = get_int(j, "config", "jobs", c.jobs);
  if (c.jobs < 1) throw ConfigError("jobs", "must be >= 1");
  c.n_states = get_int(j, "config", "n_states", c.n_states);
  if (c.n_states < 1) throw ConfigError("n_states", "must be >= 1");
  if (c.n_states > c.basis.n_channels())
    throw ConfigError("n_states", "exceeds the channel count of the basis");

  return c;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config", std::string("JSON parse failure: ") + e.what());
  }
  return parse_config(j);
}

nlohmann::json resolved_json(const ScenarioConfig& c) {
  json m{{"name", c.model.name},
         {"a_ion", c.model.a_ion},
         {"beta_ion", c.model.beta_ion},
         {"e_ion_offset", c.model.e_ion_offset},
         {"a_cov", c.model.a_cov},
         {"beta_cov", c.model.beta_cov},
         {"b_coup", c.model.b_coup},
         {"gamma_coup", c.model.gamma_coup},
         {"mu_ion_offset", c.model.mu_ion_offset},
         {"mu_ion_slope", c.model.mu_ion_slope},
         {"mu_cov_offset", c.model.mu_cov_offset},
         {"mu_cov_slope", c.model.mu_cov_slope},
         {"mass", c.model.mass},
         {"r_min", c.model.r_min},
         {"r_max", c.model.r_max}};

  std::vector<std::string> variant_names;
  for (auto v : c.splitting_variants) variant_names.push_back(to_string(v));

  return json{
      {"version", kVersion},
      {"units",
       {{"length", "bohr"},
        {"energy", "hartree"},
        {"time", "atomic units"},
        {"omega_c_interface", "eV"},
        {"hartree_in_ev", units::hartree_in_ev}}},
      {"model", m},
      {"cavity",
       {{"chi", c.chi}, {"chi_scan", c.chi_scan}, {"omega_c_ev", c.omega_c_ev},
        {"omega_c_hartree", c.omega_c()}}},
      {"basis", {{"kind", to_string(c.basis.kind)}, {"n_fock", c.basis.n_fock}}},
      {"variant", to_string(c.variant)},
      {"grid", {{"r_min", c.r_min}, {"r_max", c.r_max}, {"n_points", c.n_points}}},
      {"time",
       {{"dt", c.dt}, {"t_final", c.t_final}, {"snapshot_stride", c.snapshot_stride}}},
      {"initial_state",
       {{"r_center", c.r_center},
        {"width_alpha", c.width_alpha},
        {"state_index", c.state_index}}},
      {"observables", c.observables},
      {"derivative_couplings", c.derivative_couplings},
      {"absorbing_mask", {{"enabled", c.absorbing_mask}, {"start", c.mask_start}}},
      {"splittings",
       {{"chi_values", c.splitting_chis}, {"variants", variant_names}}},
      {"surfaces",
       {{"cavity_sheets", c.emit_cavity_sheets},
        {"n_r", c.sheet_n_r},
        {"n_q", c.sheet_n_q}}},
      {"output",
       {{"directory", c.output_dir},
        {"emit_plots_data", c.emit_plots_data},
        {"trajectory", c.write_trajectory}}},
      {"n_states", c.n_states},
      {"jobs", c.jobs}};
}

int select_initial_state(const PolaritonField& field, const ScenarioConfig& config) {
  const double rg = config.r_center;
  const DiabaticModel& model = field.model;
  const int nf = field.basis.n_fock;

  int idx = 0;
  (field.grid.array() - rg).abs().minCoeff(&idx);

  // the photoexcited channel: upper diabat at the packet center, zero quanta
  const int alpha_up = model.v_ionic(rg) > model.v_covalent(rg) ? 0 : 1;

  Eigen::VectorXd target = Eigen::VectorXd::Zero(2 * nf);
  const double r_here = field.grid[idx];
  switch (field.basis.kind) {
    case BasisKind::DiabaticPFS:
      target[alpha_up * nf] = 1.0;
      break;
    case BasisKind::DiabaticFock:
    case BasisKind::AdiabaticFock: {
      // |0_alpha> in the vacuum ladder: <m|0_alpha> = S(xi_alpha)[m, 0]
      const ModelPoint p = evaluate(model, r_here);
      const double mu = alpha_up == 0 ? p.mu_ionic : p.mu_covalent;
      const double xi = -config.chi * mu / config.omega_c();
      const FockSpace space(config.omega_c(), nf);
      const Eigen::MatrixXd s = overlap_matrix(space, Displacement{xi});
      target.segment(alpha_up * nf, nf) = s.col(0);
      if (field.basis.kind == BasisKind::AdiabaticFock) {
        const AdiabaticSlice sl = adiabatize(model, r_here);
        const double ct = std::cos(sl.mixing_angle), st = std::sin(sl.mixing_angle);
        Eigen::VectorXd ad(2 * nf);
        // c_ad = U^T c_dia with U columns |g>, |e> in (I, C)
        ad.head(nf) = ct * target.head(nf) - st * target.tail(nf);
        ad.tail(nf) = st * target.head(nf) + ct * target.tail(nf);
        target = ad;
      }
      break;
    }
  }

  int best = 0;
  double best_overlap = -1.0;
  for (int jj = 0; jj < field.n_states(); ++jj) {
    const double ov = std::abs(field.states[idx].col(jj).dot(target));
    if (ov > best_overlap) {
      best_overlap = ov;
      best = jj;
    }
  }
  return best;
}

namespace {

struct DynamicsSetup {
  RadialGrid grid;
  BasisSpec prop_basis;
  double omega;
  double r_cut;
};

DynamicsSetup dynamics_setup(const ScenarioConfig& c) {
  if (c.variant != ModelVariant::PauliFierz)
    throw ConfigError("variant",
                      "time propagation is defined for the pauli-fierz variant only");
  BasisSpec basis = c.basis;
  // vacuum-Fock propagation runs in the strict-diabat channels, where the
  // representation carries no hidden derivative couplings
  if (basis.kind == BasisKind::AdiabaticFock) basis.kind = BasisKind::DiabaticFock;
  if (c.derivative_couplings && basis.kind != BasisKind::DiabaticPFS)
    throw ConfigError("derivative_couplings",
                      "derivative couplings apply to the diabatic-pfs basis only");
  return DynamicsSetup{RadialGrid(c.r_min, c.r_max, c.n_points), basis,
                       c.omega_c(), diabatic_crossing(c.model)};
}

bool wants(const ScenarioConfig& c, const std::vector<std::string>& defaults,
           const std::string& name) {
  const auto& list = c.observables.empty() ? defaults : c.observables;
  return std::find(list.begin(), list.end(), name) != list.end();
}

void write_trajectory_header(std::ofstream& out, const RadialGrid& grid,
                             int n_channels) {
  out.write("PFTRAJ1\0", 8);
  const std::int64_t np = grid.n_points, nc = n_channels;
  out.write(reinterpret_cast<const char*>(&np), 8);
  out.write(reinterpret_cast<const char*>(&nc), 8);
  out.write(reinterpret_cast<const char*>(&grid.r_min), 8);
  out.write(reinterpret_cast<const char*>(&grid.r_max), 8);
}

// snapshot layout: time, then one (re, im) block per channel over the grid
void write_trajectory_snapshot(std::ofstream& out, const Wavepacket& wp) {
  out.write(reinterpret_cast<const char*>(&wp.time), 8);
  for (int ci = 0; ci < wp.amps.cols(); ++ci) {
    for (int i = 0; i < wp.amps.rows(); ++i) {
      const double re = wp.amps(i, ci).real(), im = wp.amps(i, ci).imag();
      out.write(reinterpret_cast<const char*>(&re), 8);
      out.write(reinterpret_cast<const char*>(&im), 8);
    }
  }
}

RunResult propagate_single(const ScenarioConfig& c, double chi,
                           const std::string& command,
                           const std::string& traj_path) {
  const DynamicsSetup setup = dynamics_setup(c);
  const double omega = setup.omega;
  const int n_field_states = std::max(c.n_states, 8);

  const PolaritonField field =
      eigensolve_field(c.model, setup.grid.points(), chi, omega,
                       ModelVariant::PauliFierz, setup.prop_basis, n_field_states);

  ScenarioConfig c_chi = c;
  c_chi.chi = chi;
  const int j0 = c.state_index >= 0 ? c.state_index
                                    : select_initial_state(field, c_chi);

  Wavepacket wp = initial_state(field, setup.grid, c.r_center, c.width_alpha, j0);

  PropagatorOptions opts;
  opts.dt = c.dt;
  opts.include_derivative_couplings = c.derivative_couplings;
  opts.absorbing_mask = c.absorbing_mask;
  opts.mask_start = c.mask_start;

  KineticBlocks blocks;
  const KineticBlocks* blocks_ptr = nullptr;
  if (c.derivative_couplings) {
    blocks = nuclear_kinetic_blocks(c.model, setup.prop_basis.n_fock, chi, omega);
    blocks_ptr = &blocks;
  }

  SplitOperatorPropagator prop(
      make_potential_builder(c.model, chi, omega, ModelVariant::PauliFierz,
                             setup.prop_basis),
      setup.grid, setup.prop_basis.n_channels(), c.model.mass, opts, blocks_ptr);

  const std::vector<std::string> defaults =
      command == "dissociation"
          ? std::vector<std::string>{"dissociation_probability"}
          : std::vector<std::string>{"photon_number", "pfs_populations"};
  const bool want_photon = wants(c, defaults, "photon_number");
  const bool want_rho = wants(c, defaults, "pfs_populations");
  const bool want_diss = wants(c, defaults, "dissociation_probability");
  const bool want_pol = wants(c, defaults, "polariton_populations");

  RunResult result;
  result.chi = chi;
  result.initial_state_index = j0;

  std::ofstream traj;
  if (!traj_path.empty()) {
    traj.open(traj_path, std::ios::binary);
    write_trajectory_header(traj, setup.grid, setup.prop_basis.n_channels());
  }

  auto observer = [&](const Wavepacket& snap) {
    result.series.times.push_back(snap.time);
    result.series.channel("norm").push_back(snap.norm());
    result.series.channel("energy").push_back(prop.energy(snap));
    if (want_photon || want_rho) {
      const Eigen::VectorXd rho = pfs_populations(snap, c.model, chi, omega);
      if (want_rho) {
        for (int n = 0; n < rho.size(); ++n)
          result.series.channel("rho_" + std::to_string(n)).push_back(rho[n]);
      }
      if (want_photon) {
        double nbar = 0.0;
        for (int n = 0; n < rho.size(); ++n) nbar += n * rho[n];
        result.series.channel("photon_number").push_back(nbar);
      }
    }
    if (want_diss) {
      result.series.channel("dissociation_probability")
          .push_back(dissociation_probability(snap, field, setup.r_cut));
    }
    if (want_pol) {
      const Eigen::VectorXd pops = polariton_populations(snap, field);
      for (int jj = 0; jj < pops.size(); ++jj)
        result.series.channel("pol_" + std::to_string(jj)).push_back(pops[jj]);
    }
    if (traj.is_open()) write_trajectory_snapshot(traj, snap);
  };

  const int n_steps = static_cast<int>(std::llround(c.t_final / c.dt));
  propagate(wp, prop, n_steps, c.snapshot_stride, observer);

  result.info = json{{"chi", chi},
                     {"initial_state_index", j0},
                     {"r_cut", setup.r_cut},
                     {"n_steps", n_steps},
                     {"t_final", n_steps * c.dt},
                     {"propagation_basis", to_string(setup.prop_basis.kind)}};
  return result;
}

json crossings_metadata(const DiabaticModel& model, double omega, double chi) {
  json out = json::array();
  for (int n = 0; n <= 3; ++n) {
    double r = 0.0;
    if (!locate_liac(model, omega, n, r)) continue;
    const ModelPoint p = evaluate(model, r);
    const double lambda = chi * (p.mu_ionic - p.mu_covalent) / omega;
    const FockSpace space(omega, std::max(n + 2, 2));
    const Eigen::MatrixXd s = overlap_matrix(space, Displacement{lambda});
    out.push_back(json{{"photon_delta", n},
                       {"r", r},
                       {"predicted_gap", 2.0 * std::abs(p.v_coupling * s(n, 0))}});
  }
  return out;
}

ScenarioResult run_dynamics_command(const ScenarioConfig& c,
                                    const std::string& command) {
  const std::vector<double> chis = c.chis();
  ScenarioResult result;
  result.command = command;
  result.runs.resize(chis.size());

  auto traj_path = [&](double chi) -> std::string {
    if (!c.write_trajectory || c.output_dir.empty()) return "";
    std::filesystem::create_directories(c.output_dir);
    return (std::filesystem::path(c.output_dir) /
            ("trajectory_chi" + format_double(chi) + ".bin"))
        .string();
  };

  const int jobs = std::max(1, std::min<int>(c.jobs, static_cast<int>(chis.size())));
  if (jobs == 1) {
    for (size_t i = 0; i < chis.size(); ++i)
      result.runs[i] = propagate_single(c, chis[i], command, traj_path(chis[i]));
  } else {
    std::vector<std::future<RunResult>> futures(chis.size());
    size_t next = 0;
    while (next < chis.size()) {
      const size_t batch_end = std::min(chis.size(), next + jobs);
      for (size_t i = next; i < batch_end; ++i)
        futures[i] = std::async(std::launch::async, [&c, &chis, &command, &traj_path, i] {
          return propagate_single(c, chis[i], command, traj_path(chis[i]));
        });
      for (size_t i = next; i < batch_end; ++i) result.runs[i] = futures[i].get();
      next = batch_end;
    }
  }

  json per_chi = json::array();
  for (const auto& run : result.runs) {
    json entry = run.info;
    if (const auto* nbar = run.series.find("photon_number")) {
      entry["photon_number_peak"] = *std::max_element(nbar->begin(), nbar->end());
      entry["photon_number_final"] = nbar->back();
    }
    if (const auto* diss = run.series.find("dissociation_probability"))
      entry["dissociation_final"] = diss->back();
    per_chi.push_back(entry);
  }
  result.summary = json{{"command", command},
                        {"crossings", crossings_metadata(c.model, c.omega_c(), c.chi)},
                        {"runs", per_chi}};
  return result;
}

}  // namespace

ScenarioResult run_downconversion(const ScenarioConfig& c) {
  return run_dynamics_command(c, "downconversion");
}

ScenarioResult run_dissociation(const ScenarioConfig& c) {
  return run_dynamics_command(c, "dissociation");
}

SurfacesResult run_surfaces(const ScenarioConfig& c) {
  const RadialGrid grid(c.r_min, c.r_max, c.n_points);
  const double omega = c.omega_c();
  const PolaritonField field = eigensolve_field(
      c.model, grid.points(), c.chi, omega, c.variant, c.basis, c.n_states);

  SurfacesResult result;
  result.r = field.grid;
  result.energies = field.energies;
  result.photon_number = field.photon_number;
  result.summary = json{{"command", "surfaces"},
                        {"variant", to_string(c.variant)},
                        {"basis", to_string(c.basis.kind)},
                        {"crossings", crossings_metadata(c.model, omega, c.chi)}};

  if (c.emit_cavity_sheets) {
    const double r_hi = std::min(c.r_max, 20.0);
    result.sheet_r.resize(c.sheet_n_r);
    for (int i = 0; i < c.sheet_n_r; ++i)
      result.sheet_r[i] = c.r_min + (r_hi - c.r_min) * i / (c.sheet_n_r - 1);

    // photon coordinate range covering both displaced sheets
    const double q0_max = std::sqrt(2.0 / std::pow(omega, 3)) * c.chi *
                          c.model.mu_ionic(r_hi);
    const double zp = 4.0 / std::sqrt(omega);
    const double q_lo = -(q0_max + zp), q_hi = zp;
    result.sheet_q.resize(c.sheet_n_q);
    for (int k = 0; k < c.sheet_n_q; ++k)
      result.sheet_q[k] = q_lo + (q_hi - q_lo) * k / (c.sheet_n_q - 1);

    result.sheet_ionic.resize(c.sheet_n_r, c.sheet_n_q);
    result.sheet_covalent.resize(c.sheet_n_r, c.sheet_n_q);
    for (int i = 0; i < c.sheet_n_r; ++i) {
      const ModelPoint p = evaluate(c.model, result.sheet_r[i]);
      const double q0_i = std::sqrt(2.0 / std::pow(omega, 3)) * c.chi * p.mu_ionic;
      const double q0_c = std::sqrt(2.0 / std::pow(omega, 3)) * c.chi * p.mu_covalent;
      for (int k = 0; k < c.sheet_n_q; ++k) {
        const double q = result.sheet_q[k];
        result.sheet_ionic(i, k) =
            p.v_ionic + 0.5 * omega * omega * std::pow(q + q0_i, 2);
        result.sheet_covalent(i, k) =
            p.v_covalent + 0.5 * omega * omega * std::pow(q + q0_c, 2);
      }
    }
  }
  return result;
}

SplittingsResult run_splittings(const ScenarioConfig& c) {
  SplittingsResult result;
  result.rows = splitting_scan(c.model, c.omega_c(), c.splitting_chis,
                               c.splitting_variants);
  json variants = json::array();
  for (auto v : c.splitting_variants) variants.push_back(to_string(v));
  result.summary = json{{"command", "splittings"},
                        {"chi_values", c.splitting_chis},
                        {"variants", variants},
                        {"rows", result.rows.size()}};
  return result;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace {

namespace fs = std::filesystem;

std::string metadata_block(const ScenarioConfig& c, const std::string& command) {
  std::ostringstream out;
  out << "# polfock " << kVersion << "\n";
  out << "# command: " << command << "\n";
  out << "# units: R in bohr, energies in hartree, time in atomic units\n";
  out << "# config: " << resolved_json(c).dump() << "\n";
  return out.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string series_csv(const ScenarioConfig& c, const std::string& command,
                       const RunResult& run) {
  std::ostringstream out;
  out << metadata_block(c, command);
  out << "# chi: " << format_double(run.chi) << "\n";
  out << "# initial_state_index: " << run.initial_state_index << "\n";
  out << "t";
  for (const auto& [name, _] : run.series.channels) out << "," << name;
  out << "\n";
  for (size_t i = 0; i < run.series.times.size(); ++i) {
    out << format_double(run.series.times[i]);
    for (const auto& [_, values] : run.series.channels)
      out << "," << format_double(values[i]);
    out << "\n";
  }
  return out.str();
}

std::vector<std::string> write_dynamics_outputs(const ScenarioResult& r,
                                                const ScenarioConfig& c,
                                                const std::string& outdir) {
  fs::create_directories(outdir);
  std::vector<std::string> written;

  for (const auto& run : r.runs) {
    const std::string stem = r.command + "_chi" + format_double(run.chi);
    const std::string csv_path = (fs::path(outdir) / (stem + ".csv")).string();
    write_text(csv_path, series_csv(c, r.command, run));
    written.push_back(csv_path);

    // machine-readable twin of the CSV, with the provenance block inline
    nlohmann::json channels;
    for (const auto& [name, values] : run.series.channels) channels[name] = values;
    const nlohmann::json run_json{{"command", r.command},
                                  {"run", run.info},
                                  {"t", run.series.times},
                                  {"channels", channels},
                                  {"config", resolved_json(c)}};
    const std::string json_path = (fs::path(outdir) / (stem + ".json")).string();
    write_text(json_path, run_json.dump(2) + "\n");
    written.push_back(json_path);
  }

  if (c.emit_plots_data) {
    std::ostringstream out;
    out << metadata_block(c, r.command);
    out << "chi,t,observable,value\n";
    for (const auto& run : r.runs) {
      for (const auto& [name, values] : run.series.channels) {
        for (size_t i = 0; i < run.series.times.size(); ++i) {
          out << format_double(run.chi) << "," << format_double(run.series.times[i])
              << "," << name << "," << format_double(values[i]) << "\n";
        }
      }
    }
    const std::string path = (fs::path(outdir) / "plots_data.csv").string();
    write_text(path, out.str());
    written.push_back(path);
  }

  const std::string cfg_path = (fs::path(outdir) / "resolved_config.json").string();
  write_text(cfg_path, resolved_json(c).dump(2) + "\n");
  written.push_back(cfg_path);

  nlohmann::json summary = r.summary;
  summary["files"] = nlohmann::json::array();
  for (const auto& f : written)
    summary["files"].push_back(fs::path(f).filename().string());
  const std::string sum_path = (fs::path(outdir) / "summary.json").string();
  write_text(sum_path, summary.dump(2) + "\n");
  written.push_back(sum_path);
  return written;
}

}  // namespace

std::vector<std::string> write_downconversion_outputs(const ScenarioResult& r,
                                                      const ScenarioConfig& c,
                                                      const std::string& outdir) {
  return write_dynamics_outputs(r, c, outdir);
}

std::vector<std::string> write_dissociation_outputs(const ScenarioResult& r,
                                                    const ScenarioConfig& c,
                                                    const std::string& outdir) {
  return write_dynamics_outputs(r, c, outdir);
}

std::vector<std::string> write_surfaces_outputs(const SurfacesResult& r,
                                                const ScenarioConfig& c,
                                                const std::string& outdir) {
  fs::create_directories(outdir);
  std::vector<std::string> written;

  std::ostringstream out;
  out << metadata_block(c, "surfaces");
  out << "r";
  for (int j = 0; j < r.energies.cols(); ++j) out << ",e_" << j;
  for (int j = 0; j < r.photon_number.cols(); ++j) out << ",nphot_" << j;
  out << "\n";
  for (int i = 0; i < r.r.size(); ++i) {
    out << format_double(r.r[i]);
    for (int j = 0; j < r.energies.cols(); ++j)
      out << "," << format_double(r.energies(i, j));
    for (int j = 0; j < r.photon_number.cols(); ++j)
      out << "," << format_double(r.photon_number(i, j));
    out << "\n";
  }
  const std::string surf_path = (fs::path(outdir) / "surfaces.csv").string();
  write_text(surf_path, out.str());
  written.push_back(surf_path);

  if (r.sheet_r.size() > 0) {
    std::ostringstream sheets;
    sheets << metadata_block(c, "surfaces");
    sheets << "r,q,sheet_ionic,sheet_covalent\n";
    for (int i = 0; i < r.sheet_r.size(); ++i)
      for (int k = 0; k < r.sheet_q.size(); ++k)
        sheets << format_double(r.sheet_r[i]) << "," << format_double(r.sheet_q[k])
               << "," << format_double(r.sheet_ionic(i, k)) << ","
               << format_double(r.sheet_covalent(i, k)) << "\n";
    const std::string path = (fs::path(outdir) / "cavity_sheets.csv").string();
    write_text(path, sheets.str());
    written.push_back(path);
  }

  const std::string cfg_path = (fs::path(outdir) / "resolved_config.json").string();
  write_text(cfg_path, resolved_json(c).dump(2) + "\n");
  written.push_back(cfg_path);

  nlohmann::json summary = r.summary;
  summary["files"] = nlohmann::json::array();
  for (const auto& f : written)
    summary["files"].push_back(fs::path(f).filename().string());
  const std::string sum_path = (fs::path(outdir) / "summary.json").string();
  write_text(sum_path, summary.dump(2) + "\n");
  written.push_back(sum_path);
  return written;
}

std::vector<std::string> write_splittings_outputs(const SplittingsResult& r,
                                                  const ScenarioConfig& c,
                                                  const std::string& outdir) {
  fs::create_directories(outdir);
  std::vector<std::string> written;

  std::ostringstream out;
  out << metadata_block(c, "splittings");
  out << "variant,chi,photon_delta,found,r_star,gap,prediction\n";
  for (const auto& row : r.rows) {
    out << to_string(row.variant) << "," << format_double(row.chi) << ","
        << row.photon_delta << "," << (row.found ? 1 : 0) << ","
        << format_double(row.r_star) << "," << format_double(row.gap) << ","
        << format_double(row.prediction) << "\n";
  }
  const std::string path = (fs::path(outdir) / "splittings.csv").string();
  write_text(path, out.str());
  written.push_back(path);

  const std::string cfg_path = (fs::path(outdir) / "resolved_config.json").string();
  write_text(cfg_path, resolved_json(c).dump(2) + "\n");
  written.push_back(cfg_path);

  nlohmann::json summary = r.summary;
  summary["files"] = nlohmann::json::array();
  for (const auto& f : written)
    summary["files"].push_back(fs::path(f).filename().string());
  const std::string sum_path = (fs::path(outdir) / "summary.json").string();
  write_text(sum_path, summary.dump(2) + "\n");
  written.push_back(sum_path);
  return written;
}

}  // namespace polfock
