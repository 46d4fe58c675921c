#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "slicemax/grid.hpp"

namespace slicemax::verify {

/// A named generator with numeric parameters, written "name" or "name:key=value,key=value".
///
/// Positions are fractions of the domain length L = cols * h, so one spec describes the
/// same continuum function on every resolution of a fixed domain.
///
///   constant   value=1
///   indicator  lo=0.25 hi=0.5          cube [lo L, hi L)^n, cells selected by their centres
///   step       at=0.5 lo=0 hi=1        lo left of the cut in the first coordinate, hi right of it
///   smooth     modes=4 seed=<run seed> sum of seeded low-frequency sines
///   log_bmo    x0=0.5 eps=0.5          log(|x - x0 L| + eps h), eps in (0, 1]
///   linear     slope=1                 slope times the first coordinate
///   random     lo=-1 hi=1 seed=<run seed> independent uniform samples
struct GeneratorSpec {
  std::string name;
  std::map<std::string, double> params;

  static GeneratorSpec parse(const std::string& text);
  /// Canonical text: name followed by every parameter, defaults included, in key order.
  std::string canonical() const;
  double get(const std::string& key) const;
  /// True for generators whose samples depend on a seed.
  bool seeded() const;
};

/// Names accepted by GeneratorSpec::parse.
std::vector<std::string> generator_names();

/// Samples of the generator on a grid of `shape` cells of size h with origin 0.
/// `seed` is used when the spec carries no seed of its own. Bit-identical for equal inputs.
GridFunction generate(const GeneratorSpec& spec, const std::vector<std::size_t>& shape, double h,
                      std::uint64_t seed);
GridFunction generate(const std::string& spec, const std::vector<std::size_t>& shape, double h,
                      std::uint64_t seed);

}  // namespace slicemax::verify
