#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slicemax/verify/checks.hpp"

namespace slicemax::verify {

struct SuiteConfig {
  std::uint64_t seed = 1;
  /// Symbols b and inputs f for the hard checks; every pair is checked on every shape.
  std::vector<std::string> symbols = {"constant:value=2", "constant:value=-1.5", "log_bmo", "linear",
                                      "step:lo=-1,hi=2", "smooth", "random"};
  std::vector<std::string> inputs = {"indicator:lo=0.25,hi=0.5", "smooth", "random:lo=-1,hi=1"};
  std::vector<std::vector<std::size_t>> shapes = {{32}, {12, 12}};
  /// Empty: {0, 0.25, n/2} on each grid.
  std::vector<double> alphas;
  /// Largest cube side in cells; 0 means the whole grid.
  std::size_t max_scale = 0;
  Boundary boundary = Boundary::interior;
  Tolerances tolerances;

  // Soft experiments. Each list may be empty.
  std::vector<std::string> refinement_symbols = {"log_bmo"};
  std::vector<std::string> growth_symbols = {"linear"};
  std::vector<std::string> rank_symbols = {"constant:value=1", "constant:value=-1", "log_bmo", "linear",
                                           "linear:slope=-0.5", "step:lo=-1,hi=1", "smooth"};
  std::vector<std::size_t> resolutions = {64, 128, 256};
  std::vector<std::size_t> domain_sizes = {64, 128, 256};
  double experiment_alpha = 0.25;
  double p = 2.0, q = 2.0;
};

/// Runs every check over the configured corpus. Deterministic for a given config; reports are
/// canonicalized. An exception inside a check becomes a failed report carrying the message.
std::vector<VerificationReport> run_suite(const SuiteConfig& config);

/// The config as a JSON object, for embedding in reports.
std::string suite_config_json(const SuiteConfig& config);

}  // namespace slicemax::verify
