#include "slicemax/verify/corpus.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

#include "slicemax/io.hpp"

namespace slicemax::verify {

namespace {

using Params = std::map<std::string, double>;

const std::map<std::string, Params>& defaults() {
  static const std::map<std::string, Params> table{
      {"constant", {{"value", 1.0}}},
      {"indicator", {{"lo", 0.25}, {"hi", 0.5}}},
      {"step", {{"at", 0.5}, {"lo", 0.0}, {"hi", 1.0}}},
      {"smooth", {{"modes", 4.0}}},
      {"log_bmo", {{"x0", 0.5}, {"y0", 0.5}, {"eps", 0.5}}},
      {"linear", {{"slope", 1.0}}},
      {"random", {{"lo", -1.0}, {"hi", 1.0}}},
  };
  return table;
}

double parse_value(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ValidationError("generator parameter " + key + " has bad value '" + text + "'");
  return v;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<std::string> generator_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : defaults()) out.push_back(name);
  return out;
}

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  GeneratorSpec spec;
  spec.name = text.substr(0, colon);
  const auto it = defaults().find(spec.name);
  if (it == defaults().end()) throw ValidationError("unknown generator '" + spec.name + "'");
  spec.params = it->second;
  if (colon == std::string::npos) return spec;

  std::size_t pos = colon + 1;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("generator parameter '" + item + "' needs key=value");
    const std::string key = item.substr(0, eq);
    if (key != "seed" && !it->second.count(key))
      throw ValidationError("generator " + spec.name + " has no parameter '" + key + "'");
    if (key == "seed" && !(spec.name == "smooth" || spec.name == "random"))
      throw ValidationError("generator " + spec.name + " takes no seed");
    spec.params[key] = parse_value(key, item.substr(eq + 1));
  }
  if (spec.name == "log_bmo" && !(spec.params["eps"] > 0.0 && spec.params["eps"] <= 1.0))
    throw ValidationError("log_bmo needs eps in (0, 1]");
  if (spec.name == "smooth" && !(spec.params["modes"] >= 1.0)) throw ValidationError("smooth needs modes >= 1");
  if (spec.params.count("seed") && !(spec.params["seed"] >= 0.0 && spec.params["seed"] < 0x1.0p53))
    throw ValidationError("seed must be a non-negative integer below 2^53");
  return spec;
}

std::string GeneratorSpec::canonical() const {
  std::string out = name;
  char sep = ':';
  for (const auto& [key, value] : params) {
    out += sep + key + "=" + format_number(value);
    sep = ',';
  }
  return out;
}

double GeneratorSpec::get(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw ValidationError("generator " + name + " has no parameter '" + key + "'");
  return it->second;
}

bool GeneratorSpec::seeded() const { return name == "smooth" || name == "random"; }

GridFunction generate(const GeneratorSpec& spec, const std::vector<std::size_t>& shape, double h,
                      std::uint64_t seed) {
  GridFunction grid = GridFunction::constant(shape, h, 0.0);
  const double length = static_cast<double>(grid.cols()) * h;
  const bool two_d = grid.dim() == 2;
  if (spec.params.count("seed")) seed = static_cast<std::uint64_t>(spec.get("seed"));
  std::mt19937_64 rng(seed);

  std::vector<double> values(grid.size());
  if (spec.name == "random") {
    const double lo = spec.get("lo"), hi = spec.get("hi");
    for (double& v : values) v = lo + (hi - lo) * unit(rng);
    return grid.with_samples(std::move(values));
  }

  std::vector<double> amp, phase, amp_y, phase_y;
  if (spec.name == "smooth") {
    const auto modes = static_cast<std::size_t>(spec.get("modes"));
    for (std::size_t k = 1; k <= modes; ++k) {
      amp.push_back((2.0 * unit(rng) - 1.0) / static_cast<double>(k));
      phase.push_back(2.0 * std::numbers::pi * unit(rng));
      amp_y.push_back((2.0 * unit(rng) - 1.0) / static_cast<double>(k));
      phase_y.push_back(2.0 * std::numbers::pi * unit(rng));
    }
  }

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto centre = grid.cell_center(i);
    // First coordinate is the column axis; rows only matter in 2D.
    const double x = centre.back();
    const double y = two_d ? centre.front() : 0.0;
    double v = 0.0;
    if (spec.name == "constant") {
      v = spec.get("value");
    } else if (spec.name == "indicator") {
      const double lo = spec.get("lo") * length, hi = spec.get("hi") * length;
      const bool in_x = x >= lo && x < hi;
      const bool in_y = !two_d || (y >= lo && y < hi);
      v = in_x && in_y ? 1.0 : 0.0;
    } else if (spec.name == "step") {
      v = x < spec.get("at") * length ? spec.get("lo") : spec.get("hi");
    } else if (spec.name == "smooth") {
      for (std::size_t k = 0; k < amp.size(); ++k) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(k + 1) / length;
        v += amp[k] * std::sin(w * x + phase[k]);
        if (two_d) v += amp_y[k] * std::sin(w * y + phase_y[k]);
      }
    } else if (spec.name == "log_bmo") {
      const double dx = x - spec.get("x0") * length;
      const double dy = two_d ? y - spec.get("y0") * length : 0.0;
      v = std::log(std::hypot(dx, dy) + spec.get("eps") * h);
    } else if (spec.name == "linear") {
      v = spec.get("slope") * x;
    }
    values[i] = v;
  }
  return grid.with_samples(std::move(values));
}

GridFunction generate(const std::string& spec, const std::vector<std::size_t>& shape, double h,
                      std::uint64_t seed) {
  return generate(GeneratorSpec::parse(spec), shape, h, seed);
}

}  // namespace slicemax::verify
