#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slicemax/verify/checks.hpp"

namespace slicemax::verify {

/// One continuum instance: a symbol b and a corpus of inputs f, all as generator specs.
struct ExperimentSpec {
  std::string symbol = "log_bmo";
  std::vector<std::string> inputs = {"indicator:lo=0.25,hi=0.5", "step", "smooth"};
  int dim = 1;
  std::uint64_t seed = 1;
  Boundary boundary = Boundary::interior;
};

/// The domain [0, 1]^n at N cells per axis for each N, dyadic scales up to N/2, t = 1/16.
std::vector<Level> refinement_levels(const ExperimentSpec& spec, const std::vector<std::size_t>& resolutions);
/// h = 1 and N cells per axis for each N, dyadic scales up to N, t = 4.
std::vector<Level> domain_levels(const ExperimentSpec& spec, const std::vector<std::size_t>& sizes);

/// Across symbols, compares the domain-growth factors of the T1_4 and T3_4 forms: both should be
/// bounded or both large. Records the Spearman rank correlation of the factors and the number of
/// symbols where the two forms disagree on "bounded" (factor <= 1 + tol.drift). Soft; passes when
/// the correlation is at least 0.5.
VerificationReport check_bounded_together(const std::vector<std::string>& symbols,
                                          const std::vector<std::size_t>& sizes, int dim, std::uint64_t seed,
                                          const Tolerances& tol);

/// T2_4 (the BMO norm) on each level and its factor between consecutive levels. Soft; passes when
/// every factor is at least tol.growth. Meant for domain doubling.
VerificationReport check_bmo_growth(const std::vector<Level>& levels, const Tolerances& tol,
                                    InstanceDescriptor where = {});

double spearman(const std::vector<double>& a, const std::vector<double>& b);

enum class SweepAxis { resolution, domain, alpha, t };
std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& s);

struct SweepConfig {
  SweepAxis axis = SweepAxis::resolution;
  std::vector<double> values;  // one CSV row per value
  ExperimentSpec experiment;
  int theorem = 2;
  double alpha = 0.25;       // fixed alpha for the resolution, domain and t axes
  double p = 2.0, q = 2.0;   // r and s follow from alpha
  double t = 0.0;            // fixed t for the alpha axis; 0 keeps the level default
  std::size_t size = 64;     // cells per axis for the alpha and t axes (h = 1)
};

/// Column names of the sweep table, in order.
std::vector<std::string> sweep_columns();
/// CSV text: the comment line "# config: <config_json>", the header row, then one row per value.
std::string run_sweep(const SweepConfig& config, const std::string& config_json);

}  // namespace slicemax::verify
