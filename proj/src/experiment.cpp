#include "phasecon/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "phasecon/functionals.hpp"
#include "phasecon/io.hpp"
#include "phasecon/penalty.hpp"

namespace phasecon {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

class Summary {
 public:
  void set(const std::string& key, const std::string& value) {
    order_.push_back(key);
    values_[key] = value;
  }
  void set(const std::string& key, double value) { set(key, format_double(value)); }
  void set(const std::string& key, int value) { set(key, std::to_string(value)); }

  std::string render() const {
    std::ostringstream out;
    for (const auto& key : order_) out << key << " = " << values_.at(key) << '\n';
    return out.str();
  }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::string> values_;
};

BandConfig plus_band(const ExperimentConfig& cfg) {
  return BandConfig::make(cfg.alpha, cfg.beta, cfg.epsilon, cfg.a, cfg.p);
}

BandConfig minus_band(const ExperimentConfig& cfg) {
  return BandConfig::make(cfg.alpha_minus, cfg.beta_minus, cfg.epsilon, cfg.a, cfg.p);
}

Eigen::VectorXd build_image(const ExperimentConfig& cfg, const Mesh& mesh) {
  if (cfg.image == "file") {
    return read_field(cfg.image_file, mesh.node_count());
  }
  const double half = cfg.disk_center_distance / 2.0;
  const std::array<std::array<double, 2>, 2> centers = {{{+half, 0.0}, {-half, 0.0}}};
  return disk_image(mesh, centers, cfg.disk_radius, cfg.image_smooth_width);
}

Eigen::VectorXd build_initial(const ExperimentConfig& cfg, const Mesh& mesh,
                              const Eigen::VectorXd* image) {
  if (cfg.initial == "file") return read_field(cfg.initial_file, mesh.node_count());
  if (cfg.initial == "image") {
    if (image == nullptr) throw ConfigError("initial = image requires a reference image");
    return *image;
  }
  if (cfg.initial == "dumbbell") {
    return dumbbell_field(mesh, cfg.dumbbell_bulb_radius,
                          cfg.dumbbell_center_distance / 2.0,
                          cfg.dumbbell_neck_half_width, cfg.epsilon);
  }
  return flower_field(mesh, cfg.flower_base_radius, cfg.flower_petal_amplitude,
                      cfg.flower_petal_count, cfg.initial_smooth_width);
}

ModelParams build_model(const ExperimentConfig& cfg) {
  ModelParams model;
  model.epsilon = cfg.epsilon;
  model.lambda = cfg.lambda;
  model.spontaneous_curvature = cfg.h0;
  model.fidelity_weight = cfg.eta;
  model.well = cfg.well == "symmetric" ? WellVariant::symmetric : WellVariant::shifted;
  model.curvature_sign = cfg.sigma;
  return model;
}

void write_snapshot(const Mesh& mesh, const DualGraph& graph,
                    const ExperimentConfig& cfg, const Eigen::VectorXd& field,
                    const std::string& path) {
  std::vector<double> averages;
  element_averages(mesh, field, averages);

  std::vector<std::vector<int>> cell_data;
  std::vector<std::pair<std::string, const std::vector<int>*>> cell_fields;
  auto add_band_fields = [&](const BandConfig& band) {
    const std::vector<int> interface =
        extract_interface(averages, band.alpha, band.beta);
    const ComponentDecomposition d =
        decompose_components(graph, interface, averages, band);
    std::vector<int> flag(mesh.element_count(), 0);
    for (int t : interface) flag[t] = 1;
    cell_data.push_back(std::move(flag));
    cell_data.push_back(d.component_of);
  };
  add_band_fields(plus_band(cfg));
  if (cfg.band_minus) add_band_fields(minus_band(cfg));

  // cell_data is stable now; collect the pointers.
  size_t idx = 0;
  cell_fields.emplace_back("interface_plus", &cell_data[idx++]);
  cell_fields.emplace_back("component_plus", &cell_data[idx++]);
  if (cfg.band_minus) {
    cell_fields.emplace_back("interface_minus", &cell_data[idx++]);
    cell_fields.emplace_back("component_minus", &cell_data[idx++]);
  }
  write_vtk(mesh, {{"u", &field}}, cell_fields, path);
}

std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshot_%06d.vtk", step);
  return buf;
}

int run_mesh_info(const ExperimentConfig& cfg, const Mesh& mesh, Summary& summary) {
  const auto [min_diam, max_diam] = std::minmax_element(mesh.element_diameter.begin(),
                                                        mesh.element_diameter.end());
  summary.set("nodes", mesh.node_count());
  summary.set("elements", mesh.element_count());
  summary.set("interior_edges", mesh.interior_edge_count);
  summary.set("boundary_edges", mesh.boundary_edge_count);
  summary.set("boundary_nodes", static_cast<int>(mesh.boundary_nodes.size()));
  summary.set("domain_area", mesh.domain_area);
  summary.set("min_diameter", *min_diam);
  summary.set("max_diameter", *max_diam);
  write_vtk(mesh, {}, {}, cfg.out_dir + "/mesh.vtk");
  return 0;
}

int run_penalty_probe(const ExperimentConfig& cfg, const Mesh& mesh, DualGraph& graph,
                      Summary& summary) {
  const Eigen::VectorXd u = read_field(cfg.field_file, mesh.node_count());
  std::vector<double> averages;
  element_averages(mesh, u, averages);

  auto probe = [&](const BandConfig& band, const std::string& prefix) {
    const std::vector<int> interface =
        extract_interface(averages, band.alpha, band.beta);
    ComponentDecomposition d = decompose_components(graph, interface, averages, band);
    component_masses(d, averages, mesh, band);
    summary.set(prefix + "_components", d.count());
    for (int j = 0; j < d.count(); ++j) {
      summary.set(prefix + "_mass_" + std::to_string(j), d.masses[j]);
    }
    double cbar = 0.0;
    if (d.count() >= 2) {
      assign_edge_weights(graph, averages, band);
      component_distances(graph, d);
      cbar = penalty_energy(d);
      for (int i = 0; i < d.count(); ++i) {
        for (int j = i + 1; j < d.count(); ++j) {
          summary.set(prefix + "_distance_" + std::to_string(i) + "_" + std::to_string(j),
                      d.distance(i, j));
        }
      }
    }
    summary.set(prefix + "_cbar", cbar);
    summary.set(prefix + "_energy", band.flow_scale() * cbar);
  };
  probe(plus_band(cfg), "plus");
  if (cfg.band_minus) probe(minus_band(cfg), "minus");
  return 0;
}

int run_flow_experiment(const ExperimentConfig& cfg, const Mesh& mesh, DualGraph& graph,
                        Summary& summary) {
  const P1Operators ops = assemble_p1(mesh);

  FlowProblem problem;
  problem.mesh = &mesh;
  problem.ops = &ops;
  problem.graph = &graph;
  problem.model = build_model(cfg);
  problem.band_plus = plus_band(cfg);
  if (cfg.band_minus) problem.band_minus = minus_band(cfg);

  Eigen::VectorXd image;
  if (cfg.kind == "segmentation") {
    problem.kind = FlowKind::segmentation;
    image = build_image(cfg, mesh);
    problem.image = &image;
    write_field(image, cfg.out_dir + "/image.txt");
  } else {
    problem.kind = FlowKind::curvature;
    problem.clamp_boundary = true;
    problem.clamp_value = -1.0;
  }
  const Eigen::VectorXd u0 =
      build_initial(cfg, mesh, cfg.kind == "segmentation" ? &image : nullptr);

  FlowConfig flow;
  flow.tau = cfg.tau;
  flow.tau_init = cfg.tau_init;
  flow.warmup_steps = cfg.warmup_steps;
  flow.max_steps = cfg.max_steps;
  flow.theta_stop = cfg.theta_stop;
  flow.solver_tol = cfg.solver_tol;
  flow.solver_max_iter = cfg.solver_max_iter;
  flow.log_every = cfg.log_every;
  flow.snapshot_every = cfg.snapshot_every;

  const Trajectory traj = run_flow(problem, flow, u0);

  write_energy_csv(traj.log, cfg.out_dir + "/energy.csv");
  for (size_t s = 0; s < traj.snapshot_fields.size(); ++s) {
    write_snapshot(mesh, graph, cfg, traj.snapshot_fields[s],
                   cfg.out_dir + "/" + snapshot_name(traj.snapshot_steps[s]));
  }
  write_field(traj.final_state, cfg.out_dir + "/final_field.txt");

  const EnergyRecord& last = traj.log.back();
  summary.set("stop_reason",
              traj.stop_reason == StopReason::stationary ? "stationary" : "max_steps");
  summary.set("steps", traj.steps_taken);
  summary.set("final_time", traj.final_time);
  summary.set("final_perimeter", last.perimeter);
  summary.set("final_curvature", last.curvature);
  summary.set("final_fidelity", last.fidelity);
  summary.set("final_penalty_plus", last.penalty_plus);
  summary.set("final_penalty_minus", last.penalty_minus);
  summary.set("final_penalty_total", last.penalty_total());
  summary.set("final_total", last.total);
  summary.set("final_components_plus", last.components_plus);
  summary.set("final_components_minus", last.components_minus);
  summary.set("final_step_delta", last.step_delta);

  std::vector<double> averages;
  element_averages(mesh, traj.final_state, averages);
  summary.set("threshold_components", count_superlevel_components(graph, averages, 0.5));

  summary.set("pipeline_seconds", traj.pipeline_seconds);
  summary.set("total_seconds", traj.total_seconds);
  summary.set("pipeline_share",
              traj.total_seconds > 0.0 ? traj.pipeline_seconds / traj.total_seconds : 0.0);
  summary.set("energy_upticks", traj.uptick_count);
  summary.set("energy_comparisons", traj.logged_steps);
  summary.set("uptick_fraction",
              traj.logged_steps > 0
                  ? static_cast<double>(traj.uptick_count) / traj.logged_steps
                  : 0.0);
  summary.set("plus_band_split_steps", traj.plus_band_split_steps);
  summary.set("minus_band_split_steps", traj.minus_band_split_steps);

  if (cfg.kind == "segmentation" && cfg.image == "disks") {
    // Cost references for the connectedness trade-off of the disk image:
    // bridging adds a double layer between the disks, removal forfeits one
    // disk in the fidelity term.
    const double gap = cfg.disk_center_distance - 2.0 * cfg.disk_radius;
    summary.set("bridge_cost_reference", 2.0 * gap);
    summary.set("removal_cost_reference",
                cfg.eta * std::numbers::pi_v<double> * cfg.disk_radius * cfg.disk_radius);
  }
  return 0;
}

}  // namespace

double ExperimentResult::summary_value(const std::string& key) const {
  const auto it = summary.find(key);
  if (it == summary.end()) {
    throw std::out_of_range("summary has no key '" + key + "'");
  }
  return std::stod(it->second);
}

int count_superlevel_components(const DualGraph& graph,
                                std::span<const double> element_averages,
                                double level) {
  std::vector<int> parent(graph.vertex_count);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int e = 0; e < graph.edge_count(); ++e) {
    const auto [x, y] = graph.edges[e];
    if (element_averages[x] > level && element_averages[y] > level) {
      const int rx = find(x), ry = find(y);
      if (rx != ry) parent[std::max(rx, ry)] = std::min(rx, ry);
    }
  }
  int count = 0;
  for (int v = 0; v < graph.vertex_count; ++v) {
    if (element_averages[v] > level && find(v) == v) ++count;
  }
  return count;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  write_text(cfg.out_dir + "/config.effective", render_config(cfg));

  const Mesh mesh = build_square_mesh(cfg.n, cfg.domain_origin_x, cfg.domain_origin_y,
                                      cfg.domain_side);
  DualGraph graph = build_dual_graph(mesh);

  Summary summary;
  summary.set("kind", cfg.kind);
  int code = 0;
  if (cfg.kind == "mesh-info") {
    code = run_mesh_info(cfg, mesh, summary);
  } else if (cfg.kind == "penalty-probe") {
    code = run_penalty_probe(cfg, mesh, graph, summary);
  } else {
    code = run_flow_experiment(cfg, mesh, graph, summary);
  }

  const std::string text = summary.render();
  write_text(cfg.out_dir + "/summary.txt", text);
  std::cout << text;

  ExperimentResult result;
  result.exit_code = code;
  result.out_dir = cfg.out_dir;
  result.summary = summary.values();
  return result;
}

}  // namespace phasecon
