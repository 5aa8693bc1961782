#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/IterativeLinearSolvers>

#include "phasecon/band.hpp"
#include "phasecon/connectivity.hpp"
#include "phasecon/fem.hpp"
#include "phasecon/functionals.hpp"
#include "phasecon/mesh.hpp"
#include "phasecon/penalty.hpp"

namespace phasecon {

enum class FlowKind { segmentation, curvature };

enum class StopReason { stationary, max_steps };

struct FlowConfig {
  double tau = 5e-7;
  double tau_init = 0.0;  // <= 0 selects tau / 50
  int warmup_steps = 500;
  int max_steps = 20000;
  double theta_stop = 1e-4;  // on |u_{k+1} - u_k|_{M_L} / tau
  double solver_tol = 1e-10;
  int solver_max_iter = 2000;
  int log_every = 1;
  int snapshot_every = 0;  // <= 0 keeps only initial and final snapshots

  void validate() const;
  double effective_tau_init() const { return tau_init > 0.0 ? tau_init : tau / 50.0; }
};

/// One row of the energy log, evaluated at the state before the step; the
/// step increment norm is filled in after the solve.
struct EnergyRecord {
  int step = 0;
  double time = 0.0;
  double perimeter = 0.0;  // diffuse perimeter S_eps (unweighted)
  double curvature = 0.0;  // bending residual term
  double fidelity = 0.0;
  double penalty_plus = 0.0;   // flow-scaled band energies
  double penalty_minus = 0.0;
  double total = 0.0;  // model total including lambda weighting and penalties
  int components_plus = 0;
  int components_minus = 0;
  double cbar_plus = 0.0;  // raw discrete connectedness energies
  double cbar_minus = 0.0;
  double step_delta = 0.0;  // |u_{k+1} - u_k|_{M_L} / tau

  double penalty_total() const { return penalty_plus + penalty_minus; }
};

struct Trajectory {
  std::vector<EnergyRecord> log;
  std::vector<int> snapshot_steps;
  std::vector<double> snapshot_times;
  std::vector<Eigen::VectorXd> snapshot_fields;

  Eigen::VectorXd final_state;
  double final_time = 0.0;
  int steps_taken = 0;
  StopReason stop_reason = StopReason::max_steps;

  double pipeline_seconds = 0.0;  // connectedness pipeline share of the run
  double total_seconds = 0.0;
  int uptick_count = 0;   // logged steps whose total energy increased
  int logged_steps = 0;   // consecutive comparisons made
  int plus_band_split_steps = 0;  // steps whose +band component count exceeded 1
  int minus_band_split_steps = 0;
};

/// Solves (eps M_L + tau A) u' = eps M_L u - tau f with optional symmetric
/// elimination of clamped boundary nodes. The system matrix is rebuilt when
/// tau changes; the conjugate-gradient solve warm-starts from u.
class SemiImplicitStepper {
 public:
  SemiImplicitStepper(SparseMatrix implicit_operator, Eigen::VectorXd lumped_mass,
                      double epsilon, std::vector<int> clamped_nodes,
                      double clamp_value);

  void set_tau(double tau);
  void set_solver(double tolerance, int max_iterations);
  double tau() const { return tau_; }

  Eigen::VectorXd step(const Eigen::VectorXd& u,
                       const Eigen::VectorXd& explicit_force) const;

 private:
  SparseMatrix implicit_operator_;
  Eigen::VectorXd lumped_mass_;
  double epsilon_;
  std::vector<int> clamped_nodes_;
  std::vector<char> is_clamped_;
  std::vector<int> free_index_;  // node -> reduced index, -1 when clamped
  std::vector<int> free_nodes_;
  double clamp_value_ = 0.0;
  double tau_ = 0.0;
  double tolerance_ = 1e-10;
  int max_iterations_ = 2000;

  SparseMatrix system_;             // reduced when nodes are clamped
  Eigen::VectorXd clamp_coupling_;  // S[free, clamped] * clamp_value
  mutable Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> solver_;

  void rebuild();
};

struct FlowProblem {
  const Mesh* mesh = nullptr;
  const P1Operators* ops = nullptr;
  DualGraph* graph = nullptr;
  FlowKind kind = FlowKind::segmentation;
  ModelParams model;
  std::optional<BandConfig> band_plus;
  std::optional<BandConfig> band_minus;
  const Eigen::VectorXd* image = nullptr;  // g, required for segmentation
  bool clamp_boundary = false;             // u = clamp_value on boundary nodes
  double clamp_value = -1.0;
};

/// Builds the implicit operator of the problem: (eps/c0) K for segmentation,
/// (2 eps/c0) K M_L^{-1} K + lambda (eps/c0) K for the curvature flow.
SparseMatrix build_implicit_operator(const FlowProblem& problem);

/// Runs the discrete gradient flow: per step, recompute element averages,
/// band pipelines and the explicit forces at u_k, then one semi-implicit
/// solve. Stops at stationarity or after max_steps. Throws on non-finite
/// states (message names the step) and on solver failure.
Trajectory run_flow(const FlowProblem& problem, const FlowConfig& config,
                    Eigen::VectorXd u0);

/// Component count of the band interface on each recorded snapshot.
std::vector<int> component_count_series(const Trajectory& trajectory, const Mesh& mesh,
                                        const DualGraph& graph, const BandConfig& band);

}  // namespace phasecon
