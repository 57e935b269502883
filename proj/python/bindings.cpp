#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polfock/constants.hpp"
#include "polfock/dynamics.hpp"
#include "polfock/fock.hpp"
#include "polfock/hamiltonian.hpp"
#include "polfock/model.hpp"
#include "polfock/observables.hpp"
#include "polfock/oracle.hpp"
#include "polfock/scenario.hpp"

namespace py = pybind11;
using namespace polfock;

namespace {

py::dict series_to_dict(const ObservableSeries& series) {
  py::dict out;
  out["t"] = series.times;
  for (const auto& [name, values] : series.channels) out[name.c_str()] = values;
  return out;
}

py::dict run_to_dict(const RunResult& run) {
  py::dict out;
  out["chi"] = run.chi;
  out["initial_state_index"] = run.initial_state_index;
  out["series"] = series_to_dict(run.series);
  out["info"] = run.info.dump();
  return out;
}

py::dict scenario_to_dict(const ScenarioResult& result) {
  py::dict out;
  out["command"] = result.command;
  py::list runs;
  for (const auto& run : result.runs) runs.append(run_to_dict(run));
  out["runs"] = runs;
  out["summary"] = result.summary.dump();
  return out;
}

ScenarioConfig config_from_json_string(const std::string& text) {
  return parse_config(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(polfock, m) {
  m.doc() = "Quantum dynamics of a diatomic molecule coupled to one cavity "
            "mode, built on polarized Fock states";
  m.attr("__version__") = kVersion;
  m.attr("HARTREE_IN_EV") = units::hartree_in_ev;

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<NumericalError>(m, "NumericalError");

  py::enum_<BasisKind>(m, "BasisKind")
      .value("AdiabaticFock", BasisKind::AdiabaticFock)
      .value("DiabaticFock", BasisKind::DiabaticFock)
      .value("DiabaticPFS", BasisKind::DiabaticPFS);

  py::enum_<ModelVariant>(m, "ModelVariant")
      .value("PauliFierz", ModelVariant::PauliFierz)
      .value("Rabi", ModelVariant::Rabi)
      .value("JaynesCummings", ModelVariant::JaynesCummings);

  py::class_<DiabaticModel>(m, "DiabaticModel")
      .def(py::init<>())
      .def_readwrite("name", &DiabaticModel::name)
      .def_readwrite("a_ion", &DiabaticModel::a_ion)
      .def_readwrite("beta_ion", &DiabaticModel::beta_ion)
      .def_readwrite("e_ion_offset", &DiabaticModel::e_ion_offset)
      .def_readwrite("a_cov", &DiabaticModel::a_cov)
      .def_readwrite("beta_cov", &DiabaticModel::beta_cov)
      .def_readwrite("b_coup", &DiabaticModel::b_coup)
      .def_readwrite("gamma_coup", &DiabaticModel::gamma_coup)
      .def_readwrite("mu_ion_offset", &DiabaticModel::mu_ion_offset)
      .def_readwrite("mu_ion_slope", &DiabaticModel::mu_ion_slope)
      .def_readwrite("mu_cov_offset", &DiabaticModel::mu_cov_offset)
      .def_readwrite("mu_cov_slope", &DiabaticModel::mu_cov_slope)
      .def_readwrite("mass", &DiabaticModel::mass)
      .def_readwrite("r_min", &DiabaticModel::r_min)
      .def_readwrite("r_max", &DiabaticModel::r_max)
      .def("v_ionic", &DiabaticModel::v_ionic)
      .def("v_covalent", &DiabaticModel::v_covalent)
      .def("v_coupling", &DiabaticModel::v_coupling)
      .def("mu_ionic", &DiabaticModel::mu_ionic)
      .def("mu_covalent", &DiabaticModel::mu_covalent);

  py::class_<AdiabaticSlice>(m, "AdiabaticSlice")
      .def_readonly("e_ground", &AdiabaticSlice::e_ground)
      .def_readonly("e_excited", &AdiabaticSlice::e_excited)
      .def_readonly("mixing_angle", &AdiabaticSlice::mixing_angle)
      .def_readonly("mu_gg", &AdiabaticSlice::mu_gg)
      .def_readonly("mu_ee", &AdiabaticSlice::mu_ee)
      .def_readonly("mu_eg", &AdiabaticSlice::mu_eg);

  m.def("lif_default", &lif_default, "LiF-like calibrated default model");
  m.def("named_model", &named_model, py::arg("name"));
  m.def("adiabatize", &adiabatize, py::arg("model"), py::arg("r"));
  m.def("diabatic_crossing", &diabatic_crossing, py::arg("model"));
  m.def("ionic_well_minimum", &ionic_well_minimum, py::arg("model"));

  m.def(
      "ladder_matrices",
      [](double omega_c, int n_max) {
        const LadderOps ops = ladder_matrices(FockSpace(omega_c, n_max));
        return py::make_tuple(ops.create, ops.annihilate, ops.number);
      },
      py::arg("omega_c"), py::arg("n_max"),
      "(b_dagger, b, number) matrices of the truncated Fock space");

  m.def(
      "overlap_matrix",
      [](int n_max, double lam) {
        return overlap_matrix(FockSpace(1.0, n_max), Displacement{lam});
      },
      py::arg("n_max"), py::arg("lam"),
      "S[m, n] = <m|D(lam)|n> between two displaced oscillator ladders");

  m.def(
      "pfs_derivative_coupling",
      [](double omega_c, int n_max, double dmu_dr, double chi) {
        return pfs_derivative_coupling(FockSpace(omega_c, n_max), dmu_dr, chi);
      },
      py::arg("omega_c"), py::arg("n_max"), py::arg("dmu_dr"), py::arg("chi"));

  m.def("fc_overlap_quadrature", &oracle::fc_overlap_quadrature, py::arg("m"),
        py::arg("n"), py::arg("lam"), "independent quadrature reference overlap");

  m.def("build_hpl_pfs", &build_hpl_pfs, py::arg("model"), py::arg("r"),
        py::arg("chi"), py::arg("omega_c"), py::arg("n_fock"));
  m.def("build_hpl_fock", &build_hpl_fock, py::arg("model"), py::arg("r"),
        py::arg("chi"), py::arg("omega_c"), py::arg("variant"), py::arg("n_fock"));
  m.def("build_hpl_fock_diabatic", &build_hpl_fock_diabatic, py::arg("model"),
        py::arg("r"), py::arg("chi"), py::arg("omega_c"), py::arg("n_fock"));

  py::class_<PolaritonField>(m, "PolaritonField")
      .def_readonly("grid", &PolaritonField::grid)
      .def_readonly("energies", &PolaritonField::energies)
      .def_readonly("photon_number", &PolaritonField::photon_number)
      .def_readonly("states", &PolaritonField::states)
      .def_property_readonly("n_states", &PolaritonField::n_states)
      .def_property_readonly("n_points", &PolaritonField::n_points);

  m.def(
      "eigensolve_field",
      [](const DiabaticModel& model, const Eigen::VectorXd& grid, double chi,
         double omega_c, ModelVariant variant, BasisKind kind, int n_fock,
         int n_states) {
        return eigensolve_field(model, grid, chi, omega_c, variant,
                                BasisSpec{kind, n_fock}, n_states);
      },
      py::arg("model"), py::arg("grid"), py::arg("chi"), py::arg("omega_c"),
      py::arg("variant") = ModelVariant::PauliFierz,
      py::arg("basis") = BasisKind::DiabaticPFS, py::arg("n_fock") = 8,
      py::arg("n_states") = 6);

  m.def(
      "find_avoided_crossings",
      [](const PolaritonField& field, int j, int k) {
        py::list out;
        for (const auto& c : find_avoided_crossings(field, j, k))
          out.append(py::make_tuple(c.r, c.gap));
        return out;
      },
      py::arg("field"), py::arg("j"), py::arg("k"),
      "[(r, gap), ...] local minima of E_k - E_j");

  m.def(
      "locate_liac",
      [](const DiabaticModel& model, double omega_c, int photon_delta) {
        double r = 0.0;
        if (!locate_liac(model, omega_c, photon_delta, r))
          return py::object(py::none());
        return py::object(py::float_(r));
      },
      py::arg("model"), py::arg("omega_c"), py::arg("photon_delta"));

  py::class_<SplittingRow>(m, "SplittingRow")
      .def_readonly("variant", &SplittingRow::variant)
      .def_readonly("chi", &SplittingRow::chi)
      .def_readonly("photon_delta", &SplittingRow::photon_delta)
      .def_readonly("found", &SplittingRow::found)
      .def_readonly("r_star", &SplittingRow::r_star)
      .def_readonly("gap", &SplittingRow::gap)
      .def_readonly("prediction", &SplittingRow::prediction);

  m.def("splitting_scan", &splitting_scan, py::arg("model"), py::arg("omega_c"),
        py::arg("chi_values"), py::arg("variants"), py::arg("max_photon_delta") = 3);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_property_readonly("omega_c", &ScenarioConfig::omega_c)
      .def_readwrite("chi", &ScenarioConfig::chi)
      .def_readwrite("omega_c_ev", &ScenarioConfig::omega_c_ev)
      .def_readwrite("dt", &ScenarioConfig::dt)
      .def_readwrite("t_final", &ScenarioConfig::t_final)
      .def_readwrite("jobs", &ScenarioConfig::jobs)
      .def("resolved_json", [](const ScenarioConfig& c) { return resolved_json(c).dump(); });

  m.def("parse_config", &config_from_json_string, py::arg("json_text"),
        "build a run configuration from a JSON string (validated)");

  m.def(
      "run_downconversion",
      [](const ScenarioConfig& c) { return scenario_to_dict(run_downconversion(c)); },
      py::arg("config"));
  m.def(
      "run_dissociation",
      [](const ScenarioConfig& c) { return scenario_to_dict(run_dissociation(c)); },
      py::arg("config"));
  m.def(
      "run_surfaces",
      [](const ScenarioConfig& c) {
        const SurfacesResult r = run_surfaces(c);
        py::dict out;
        out["r"] = r.r;
        out["energies"] = r.energies;
        out["photon_number"] = r.photon_number;
        out["summary"] = r.summary.dump();
        return out;
      },
      py::arg("config"));
  m.def(
      "run_splittings",
      [](const ScenarioConfig& c) {
        const SplittingsResult r = run_splittings(c);
        py::dict out;
        out["rows"] = r.rows;
        out["summary"] = r.summary.dump();
        return out;
      },
      py::arg("config"));
}
