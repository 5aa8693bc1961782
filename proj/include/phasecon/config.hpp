#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phasecon {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat experiment description parsed from plain `key = value` text.
/// Unknown keys are rejected; every field below is its documented default
/// (the large-disk segmentation setup). Presets overwrite groups of fields
/// before the config file is applied.
struct ExperimentConfig {
  std::string kind = "segmentation";  // segmentation | curvature-flow | penalty-probe | mesh-info

  // mesh
  int n = 128;
  double domain_side = 1.0;
  double domain_origin_x = -0.5;
  double domain_origin_y = -0.5;

  // model
  double epsilon = 1e-2;
  double lambda = 0.0;
  double h0 = 0.0;
  double eta = 10.5;
  std::string well = "shifted";  // shifted | symmetric
  double sigma = 1.0;

  // connectedness bands; the minus band is disabled by default
  double alpha = 0.9;
  double beta = 1.2;
  double a = 0.4;
  int p = 0;
  bool band_minus = false;
  double alpha_minus = -0.95;
  double beta_minus = -0.85;

  // time stepping
  double tau = 5e-7;
  double tau_init = 0.0;  // <= 0 selects tau / 50
  int warmup_steps = 500;
  int max_steps = 60000;
  double theta_stop = 1e-4;
  double solver_tol = 1e-10;
  int solver_max_iter = 2000;
  int log_every = 1;
  int snapshot_every = 0;

  // reference image (segmentation)
  std::string image = "disks";  // disks | file
  double disk_radius = 0.16;
  double disk_center_distance = 0.6;
  double image_smooth_width = 0.0;
  std::string image_file;

  // initial condition
  std::string initial = "flower";  // flower | dumbbell | image | file
  double flower_base_radius = 0.25;
  double flower_petal_amplitude = 0.15;
  int flower_petal_count = 5;
  double initial_smooth_width = 0.0;
  double dumbbell_bulb_radius = 0.17;
  double dumbbell_center_distance = 0.42;
  double dumbbell_neck_half_width = 0.06;
  std::string initial_file;

  // penalty-probe input
  std::string field_file;

  std::string out_dir = "out";
  unsigned seed = 0;  // consumed only by test-data generators

  /// Cross-field checks; throws ConfigError naming the offending keys.
  void validate() const;
};

/// Parses `key = value` lines ('#' comments, blank lines allowed) on top of
/// `base`. Unknown keys, malformed values, and invariant violations raise
/// ConfigError with a `name:line:` prefix.
ExperimentConfig parse_config_text(std::string_view text, const std::string& name,
                                   ExperimentConfig base = {});
ExperimentConfig parse_config(const std::string& path, ExperimentConfig base = {});

/// Named parameter bundles: table1-large, table1-small, dumbbell2d.
void apply_preset(ExperimentConfig& cfg, const std::string& preset);

/// Effective configuration as parseable `key = value` text (all keys, full
/// precision); re-parsing it reproduces the configuration exactly.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace phasecon
