#pragma once

#include <map>
#include <string>

#include "phasecon/config.hpp"
#include "phasecon/connectivity.hpp"
#include "phasecon/flow.hpp"

namespace phasecon {

/// Everything a finished run leaves behind, plus the parsed summary values
/// for programmatic use (the same values are written to summary.txt).
struct ExperimentResult {
  int exit_code = 0;
  std::string out_dir;
  std::map<std::string, std::string> summary;

  double summary_value(const std::string& key) const;
  bool has(const std::string& key) const { return summary.count(key) != 0; }
};

/// Runs one experiment into cfg.out_dir: echoes the effective config, then
/// per kind either prints mesh information, probes the connectedness
/// pipeline on a stored field, or runs the gradient flow and writes the
/// energy CSV, VTK snapshots, the final field, and a summary file.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Number of edge-connected components of {elements with average > level}.
int count_superlevel_components(const DualGraph& graph,
                                std::span<const double> element_averages,
                                double level);

}  // namespace phasecon
