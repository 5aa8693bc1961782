#include "phasecon/flow.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace phasecon {

void FlowConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("flow: tau must be positive");
  if (!(theta_stop > 0.0)) throw std::invalid_argument("flow: theta_stop must be positive");
  if (max_steps < 1) throw std::invalid_argument("flow: max_steps must be >= 1");
  if (warmup_steps < 0) throw std::invalid_argument("flow: warmup_steps must be >= 0");
  if (!(solver_tol > 0.0)) throw std::invalid_argument("flow: solver_tol must be positive");
  if (solver_max_iter < 1) throw std::invalid_argument("flow: solver_max_iter must be >= 1");
  if (log_every < 1) throw std::invalid_argument("flow: log_every must be >= 1");
}

SemiImplicitStepper::SemiImplicitStepper(SparseMatrix implicit_operator,
                                         Eigen::VectorXd lumped_mass, double epsilon,
                                         std::vector<int> clamped_nodes,
                                         double clamp_value)
    : implicit_operator_(std::move(implicit_operator)),
      lumped_mass_(std::move(lumped_mass)),
      epsilon_(epsilon),
      clamped_nodes_(std::move(clamped_nodes)),
      clamp_value_(clamp_value) {
  const int n = static_cast<int>(lumped_mass_.size());
  is_clamped_.assign(n, 0);
  for (int v : clamped_nodes_) is_clamped_[v] = 1;
  free_index_.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (!is_clamped_[v]) {
      free_index_[v] = static_cast<int>(free_nodes_.size());
      free_nodes_.push_back(v);
    }
  }
}

void SemiImplicitStepper::set_tau(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("stepper: tau must be positive");
  if (tau == tau_) return;
  tau_ = tau;
  rebuild();
}

void SemiImplicitStepper::set_solver(double tolerance, int max_iterations) {
  tolerance_ = tolerance;
  max_iterations_ = max_iterations;
  solver_.setTolerance(tolerance_);
  solver_.setMaxIterations(max_iterations_);
}

void SemiImplicitStepper::rebuild() {
  const int n = static_cast<int>(lumped_mass_.size());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(implicit_operator_.nonZeros() + n);
  const int reduced = static_cast<int>(free_nodes_.size());
  clamp_coupling_ = Eigen::VectorXd::Zero(reduced);

  auto add_entry = [&](int row, int col, double value) {
    const int r = free_index_[row];
    if (r < 0) return;  // clamped row eliminated
    const int c = free_index_[col];
    if (c < 0) {
      clamp_coupling_[r] += value * clamp_value_;
    } else {
      entries.emplace_back(r, c, value);
    }
  };

  for (int row = 0; row < n; ++row) {
    add_entry(row, row, epsilon_ * lumped_mass_[row]);
  }
  for (int row = 0; row < implicit_operator_.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(implicit_operator_, row); it; ++it) {
      add_entry(static_cast<int>(it.row()), static_cast<int>(it.col()),
                tau_ * it.value());
    }
  }
  system_.resize(reduced, reduced);
  system_.setFromTriplets(entries.begin(), entries.end());
  solver_.setTolerance(tolerance_);
  solver_.setMaxIterations(max_iterations_);
  solver_.compute(system_);
}

Eigen::VectorXd SemiImplicitStepper::step(const Eigen::VectorXd& u,
                                          const Eigen::VectorXd& explicit_force) const {
  const Eigen::VectorXd rhs_full =
      epsilon_ * lumped_mass_.cwiseProduct(u) - tau_ * explicit_force;
  const int reduced = static_cast<int>(free_nodes_.size());
  Eigen::VectorXd rhs(reduced), guess(reduced);
  for (int r = 0; r < reduced; ++r) {
    rhs[r] = rhs_full[free_nodes_[r]] - clamp_coupling_[r];
    guess[r] = u[free_nodes_[r]];
  }
  const Eigen::VectorXd x = solver_.solveWithGuess(rhs, guess);
  if (solver_.info() != Eigen::Success) {
    throw std::runtime_error(
        "semi-implicit step: conjugate gradient did not converge (" +
        std::to_string(solver_.iterations()) + " iterations, residual " +
        std::to_string(solver_.error()) + ")");
  }
  Eigen::VectorXd next = Eigen::VectorXd::Constant(u.size(), clamp_value_);
  for (int r = 0; r < reduced; ++r) next[free_nodes_[r]] = x[r];
  return next;
}

SparseMatrix build_implicit_operator(const FlowProblem& problem) {
  const double c0 = problem.model.c0();
  const double eps = problem.model.epsilon;
  const SparseMatrix& k = problem.ops->stiffness;
  if (problem.kind == FlowKind::segmentation) {
    return SparseMatrix((eps / c0) * k);
  }
  const Eigen::VectorXd inv_mass = problem.ops->lumped_mass.cwiseInverse();
  SparseMatrix biharmonic = k * inv_mass.asDiagonal() * k;
  return SparseMatrix((2.0 * eps / c0) * biharmonic +
                      (problem.model.lambda * eps / c0) * k);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct StepEvaluation {
  EnergyRecord record;
  Eigen::VectorXd explicit_force;
};

/// Energies, band pipelines and explicit forces at the current state. The
/// linear operator handled implicitly by the stepper is excluded from the
/// force; everything else (well terms, fidelity, curvature coupling, the
/// connectedness variation) is explicit.
StepEvaluation evaluate_state(const FlowProblem& problem, const Eigen::VectorXd& u,
                              PenaltyPipeline& pipeline_plus,
                              PenaltyPipeline& pipeline_minus,
                              double& pipeline_seconds) {
  const Mesh& mesh = *problem.mesh;
  const P1Operators& ops = *problem.ops;
  const ModelParams& model = problem.model;
  const double c0 = model.c0();
  const double eps = model.epsilon;
  const Eigen::Index n = u.size();

  StepEvaluation out;
  out.explicit_force = Eigen::VectorXd::Zero(n);

  // Connectedness pipeline (element averages, bands, variations), timed
  // separately for the overhead report.
  const auto pipeline_start = Clock::now();
  if (problem.band_plus) {
    const PenaltyResult r = pipeline_plus.evaluate(
        mesh, *problem.graph, u, *problem.band_plus, &out.explicit_force);
    out.record.components_plus = r.component_count;
    out.record.cbar_plus = r.cbar;
    out.record.penalty_plus = r.scaled_energy;
  }
  if (problem.band_minus) {
    const PenaltyResult r = pipeline_minus.evaluate(
        mesh, *problem.graph, u, *problem.band_minus, &out.explicit_force);
    out.record.components_minus = r.component_count;
    out.record.cbar_minus = r.cbar;
    out.record.penalty_minus = r.scaled_energy;
  }
  pipeline_seconds += seconds_since(pipeline_start);

  // Well values shared by the perimeter term and the curvature residual.
  Eigen::VectorXd well_value(n), well_slope(n), well_curvature(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const WellValues w = double_well(u[i], model.well);
    well_value[i] = w.value;
    well_slope[i] = w.derivative;
    well_curvature[i] = w.second_derivative;
  }

  if (problem.kind == FlowKind::segmentation) {
    const Eigen::VectorXd ku = ops.stiffness * u;
    out.record.perimeter =
        (0.5 * eps * u.dot(ku) + ops.lumped_mass.dot(well_value) / eps) / c0;
    const Eigen::VectorXd diff = u - *problem.image;
    const Eigen::VectorXd mdiff = ops.mass * diff;
    out.record.fidelity = model.fidelity_weight * diff.dot(mdiff);
    out.explicit_force += ops.lumped_mass.cwiseProduct(well_slope) / (c0 * eps) +
                          (2.0 * model.fidelity_weight) * mdiff;
    out.record.total =
        out.record.perimeter + out.record.fidelity + out.record.penalty_total();
  } else {
    const double h0 = model.spontaneous_curvature;
    const double sigma = model.curvature_sign;
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2_v<double>;
    const Eigen::VectorXd ku = ops.stiffness * u;
    Eigen::VectorXd residual(n), nonlinear(n), local_slope(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double profile = (1.0 - u[i] * u[i]) * inv_sqrt2;
      nonlinear[i] = sigma * well_slope[i] / eps - h0 * profile;
      residual[i] = eps * ku[i] / ops.lumped_mass[i] + nonlinear[i];
      local_slope[i] =
          sigma * well_curvature[i] / eps + h0 * 2.0 * u[i] * inv_sqrt2;
    }
    const Eigen::VectorXd weighted = ops.lumped_mass.cwiseProduct(residual);
    out.record.curvature = residual.dot(weighted) / (c0 * eps);
    out.record.perimeter =
        (0.5 * eps * u.dot(ku) + ops.lumped_mass.dot(well_value) / eps) / c0;
    // Bending gradient minus its biharmonic part (implicit), plus the well
    // part of the lambda-weighted perimeter (its stiffness part is implicit).
    out.explicit_force +=
        (2.0 / (c0 * eps)) * (eps * (ops.stiffness * nonlinear) +
                              weighted.cwiseProduct(local_slope)) +
        model.lambda / (c0 * eps) * ops.lumped_mass.cwiseProduct(well_slope);
    out.record.total = out.record.curvature + model.lambda * out.record.perimeter +
                       out.record.penalty_total();
  }
  return out;
}

}  // namespace

Trajectory run_flow(const FlowProblem& problem, const FlowConfig& config,
                    Eigen::VectorXd u0) {
  config.validate();
  if (problem.mesh == nullptr || problem.ops == nullptr || problem.graph == nullptr) {
    throw std::invalid_argument("run_flow: incomplete problem");
  }
  if (problem.kind == FlowKind::segmentation && problem.image == nullptr) {
    throw std::invalid_argument("run_flow: segmentation requires an image");
  }
  if (u0.size() != problem.mesh->node_count()) {
    throw std::invalid_argument("run_flow: initial state size mismatch");
  }

  const auto run_start = Clock::now();
  Trajectory traj;

  std::vector<int> clamped;
  if (problem.clamp_boundary) {
    clamped = problem.mesh->boundary_nodes;
    for (int v : clamped) u0[v] = problem.clamp_value;
  }
  SemiImplicitStepper stepper(build_implicit_operator(problem),
                              problem.ops->lumped_mass, problem.model.epsilon,
                              std::move(clamped), problem.clamp_value);
  stepper.set_solver(config.solver_tol, config.solver_max_iter);

  PenaltyPipeline pipeline_plus, pipeline_minus;
  Eigen::VectorXd u = std::move(u0);
  double time = 0.0;
  double previous_total = 0.0;
  bool have_previous_total = false;

  traj.snapshot_steps.push_back(0);
  traj.snapshot_times.push_back(0.0);
  traj.snapshot_fields.push_back(u);

  int step = 0;
  for (; step < config.max_steps; ++step) {
    const double tau =
        step < config.warmup_steps ? config.effective_tau_init() : config.tau;
    stepper.set_tau(tau);

    StepEvaluation eval = evaluate_state(problem, u, pipeline_plus, pipeline_minus,
                                         traj.pipeline_seconds);
    eval.record.step = step;
    eval.record.time = time;
    if (!std::isfinite(eval.record.total)) {
      throw std::runtime_error("run_flow: non-finite field at step " +
                               std::to_string(step));
    }
    if (eval.record.components_plus > 1) traj.plus_band_split_steps += 1;
    if (eval.record.components_minus > 1) traj.minus_band_split_steps += 1;

    const Eigen::VectorXd next = stepper.step(u, eval.explicit_force);
    const Eigen::VectorXd delta = next - u;
    const double delta_norm =
        std::sqrt(delta.dot(problem.ops->lumped_mass.cwiseProduct(delta)));
    eval.record.step_delta = delta_norm / tau;
    if (!std::isfinite(delta_norm)) {
      throw std::runtime_error("run_flow: non-finite field at step " +
                               std::to_string(step + 1));
    }

    const bool stationary = eval.record.step_delta <= config.theta_stop;
    const bool last = stationary || step == config.max_steps - 1;
    if (step % config.log_every == 0 || last) {
      if (have_previous_total) {
        traj.logged_steps += 1;
        // Count increases above solver/rounding noise.
        const double tolerance = 1e-12 * std::max(1.0, std::abs(previous_total));
        if (eval.record.total > previous_total + tolerance) traj.uptick_count += 1;
      }
      previous_total = eval.record.total;
      have_previous_total = true;
      traj.log.push_back(eval.record);
    }

    u = next;
    time += tau;

    if (config.snapshot_every > 0 && (step + 1) % config.snapshot_every == 0) {
      traj.snapshot_steps.push_back(step + 1);
      traj.snapshot_times.push_back(time);
      traj.snapshot_fields.push_back(u);
    }

    if (stationary) {
      traj.stop_reason = StopReason::stationary;
      step += 1;
      break;
    }
  }

  traj.steps_taken = step;
  traj.final_time = time;
  if (traj.snapshot_steps.back() != step) {
    traj.snapshot_steps.push_back(step);
    traj.snapshot_times.push_back(time);
    traj.snapshot_fields.push_back(u);
  }
  traj.final_state = std::move(u);
  traj.total_seconds = seconds_since(run_start);
  return traj;
}

std::vector<int> component_count_series(const Trajectory& trajectory, const Mesh& mesh,
                                        const DualGraph& graph, const BandConfig& band) {
  std::vector<int> series;
  series.reserve(trajectory.snapshot_fields.size());
  std::vector<double> averages;
  for (const auto& field : trajectory.snapshot_fields) {
    element_averages(mesh, field, averages);
    const std::vector<int> interface =
        extract_interface(averages, band.alpha, band.beta);
    const ComponentDecomposition d =
        decompose_components(graph, interface, averages, band);
    series.push_back(d.count());
  }
  return series;
}

}  // namespace phasecon
