#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phasecon/band.hpp"
#include "phasecon/config.hpp"
#include "phasecon/connectivity.hpp"
#include "phasecon/experiment.hpp"
#include "phasecon/fem.hpp"
#include "phasecon/functionals.hpp"
#include "phasecon/io.hpp"
#include "phasecon/penalty.hpp"

namespace py = pybind11;
using namespace phasecon;

namespace {

/// Mesh + operators + dual graph bundled for scripting.
struct System {
  Mesh mesh;
  P1Operators ops;
  DualGraph graph;

  explicit System(int n) : mesh(build_unit_square_mesh(n)) {
    ops = assemble_p1(mesh);
    graph = build_dual_graph(mesh);
  }
};

ModelParams make_params(double epsilon, double lambda, double h0, double eta,
                        const std::string& well, double sigma) {
  ModelParams p;
  p.epsilon = epsilon;
  p.lambda = lambda;
  p.spontaneous_curvature = h0;
  p.fidelity_weight = eta;
  if (well == "symmetric") {
    p.well = WellVariant::symmetric;
  } else if (well == "shifted") {
    p.well = WellVariant::shifted;
  } else {
    throw std::invalid_argument("well must be 'symmetric' or 'shifted'");
  }
  p.curvature_sign = sigma;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Phase-field energies with a graph-geodesic connectedness penalty";

  py::class_<BandConfig>(m, "BandConfig")
      .def(py::init([](double alpha, double beta, double epsilon, double amplitude,
                       int exponent) {
             return BandConfig::make(alpha, beta, epsilon, amplitude, exponent);
           }),
           py::arg("alpha"), py::arg("beta"), py::arg("epsilon"),
           py::arg("amplitude") = 0.0, py::arg("exponent") = 1)
      .def_readonly("alpha", &BandConfig::alpha)
      .def_readonly("beta", &BandConfig::beta)
      .def_readonly("c1", &BandConfig::c1)
      .def_readonly("c2", &BandConfig::c2)
      .def_readonly("c3", &BandConfig::c3)
      .def("flow_scale", &BandConfig::flow_scale);

  m.def(
      "band_profile",
      [](double s, const BandConfig& cfg) {
        const BandValues v = band_profile(s, cfg);
        return py::make_tuple(v.distance_weight, v.distance_weight_slope,
                              v.mass_density, v.mass_density_slope);
      },
      py::arg("s"), py::arg("band"),
      "Distance weight, its slope, mass density, and its slope at s.");

  m.def(
      "double_well",
      [](double u, const std::string& variant) {
        const WellValues w = double_well(
            u, variant == "symmetric" ? WellVariant::symmetric : WellVariant::shifted);
        return py::make_tuple(w.value, w.derivative, w.second_derivative);
      },
      py::arg("u"), py::arg("variant") = "symmetric");

  py::class_<System>(m, "System")
      .def(py::init<int>(), py::arg("n"),
           "P1 system on the unit square (-1/2, 1/2)^2 with n cells per side.")
      .def_property_readonly("node_count", [](const System& s) { return s.mesh.node_count(); })
      .def_property_readonly("element_count",
                             [](const System& s) { return s.mesh.element_count(); })
      .def_property_readonly("domain_area", [](const System& s) { return s.mesh.domain_area; })
      .def("nodes",
           [](const System& s) {
             Eigen::MatrixXd coords(s.mesh.node_count(), 2);
             for (int i = 0; i < s.mesh.node_count(); ++i) {
               coords(i, 0) = s.mesh.nodes[i][0];
               coords(i, 1) = s.mesh.nodes[i][1];
             }
             return coords;
           })
      .def("lumped_mass", [](const System& s) { return s.ops.lumped_mass; })
      .def("element_averages",
           [](const System& s, const Eigen::VectorXd& u) {
             std::vector<double> avg;
             element_averages(s.mesh, u, avg);
             return avg;
           })
      .def("apply_stiffness",
           [](const System& s, const Eigen::VectorXd& u) {
             return Eigen::VectorXd(s.ops.stiffness * u);
           })
      .def("laplacian",
           [](const System& s, const Eigen::VectorXd& u) {
             return discrete_laplacian(s.ops, u);
           })
      .def(
          "perimeter_energy",
          [](const System& s, const Eigen::VectorXd& u, double epsilon,
             const std::string& well) {
            const EnergyGradient e =
                modica_mortola(u, s.ops, make_params(epsilon, 0, 0, 0, well, 1.0));
            return py::make_tuple(e.value, e.gradient);
          },
          py::arg("u"), py::arg("epsilon"), py::arg("well") = "symmetric")
      .def(
          "curvature_energy",
          [](const System& s, const Eigen::VectorXd& u, double epsilon, double lambda,
             double h0) {
            const EnergyGradient e = curvature_energy(
                u, s.ops, make_params(epsilon, lambda, h0, 0, "symmetric", 1.0));
            return py::make_tuple(e.value, e.gradient);
          },
          py::arg("u"), py::arg("epsilon"), py::arg("lambda_") = 0.0,
          py::arg("h0") = 0.0)
      .def(
          "segmentation_energy",
          [](const System& s, const Eigen::VectorXd& u, const Eigen::VectorXd& g,
             double epsilon, double eta) {
            const EnergyGradient e = segmentation_energy(
                u, g, s.ops, make_params(epsilon, 0, 0, eta, "shifted", 1.0));
            return py::make_tuple(e.value, e.gradient);
          },
          py::arg("u"), py::arg("g"), py::arg("epsilon"), py::arg("eta"))
      .def(
          "penalty",
          [](System& s, const Eigen::VectorXd& u, const BandConfig& band) {
            PenaltyPipeline pipeline;
            Eigen::VectorXd gradient = Eigen::VectorXd::Zero(u.size());
            const PenaltyResult r =
                pipeline.evaluate(s.mesh, s.graph, u, band, &gradient);
            py::dict out;
            out["components"] = r.component_count;
            out["cbar"] = r.cbar;
            out["energy"] = r.scaled_energy;
            out["gradient"] = gradient;
            out["masses"] = r.component_count >= 2
                                ? pipeline.decomposition().masses
                                : std::vector<double>{};
            return out;
          },
          py::arg("u"), py::arg("band"),
          "Connectedness pipeline at u: components, raw and scaled energy, "
          "variation vector, component masses.")
      .def("disk_image",
           [](const System& s, const std::vector<std::array<double, 2>>& centers,
              double radius, double smooth_width) {
             return disk_image(s.mesh, centers, radius, smooth_width);
           },
           py::arg("centers"), py::arg("radius"), py::arg("smooth_width") = 0.0)
      .def("flower_field",
           [](const System& s, double base, double amplitude, int petals,
              double smooth_width) {
             return flower_field(s.mesh, base, amplitude, petals, smooth_width);
           },
           py::arg("base_radius") = 0.25, py::arg("petal_amplitude") = 0.15,
           py::arg("petal_count") = 5, py::arg("smooth_width") = 0.0)
      .def("dumbbell_field",
           [](const System& s, double radius, double half_separation,
              double neck_half_width, double epsilon) {
             return dumbbell_field(s.mesh, radius, half_separation, neck_half_width,
                                   epsilon);
           },
           py::arg("bulb_radius"), py::arg("half_separation"),
           py::arg("neck_half_width"), py::arg("epsilon"));

  m.def(
      "run_experiment",
      [](const std::string& config_text, const std::string& out_dir,
         const std::string& preset) {
        ExperimentConfig cfg;
        if (!preset.empty()) apply_preset(cfg, preset);
        cfg = parse_config_text(config_text, "<python>", cfg);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        const ExperimentResult result = run_experiment(cfg);
        py::dict out;
        out["exit_code"] = result.exit_code;
        out["out_dir"] = result.out_dir;
        py::dict summary;
        for (const auto& [k, v] : result.summary) summary[py::str(k)] = v;
        out["summary"] = summary;
        return out;
      },
      py::arg("config_text"), py::arg("out_dir") = "", py::arg("preset") = "",
      "Parse a key = value configuration (optionally on top of a preset) and "
      "run it; returns the summary.");
}
