#include "slicemax/cli.hpp"

#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slicemax/io.hpp"
#include "slicemax/norms.hpp"
#include "slicemax/operators.hpp"
#include "slicemax/verify/corpus.hpp"
#include "slicemax/verify/experiments.hpp"
#include "slicemax/verify/suite.hpp"

namespace slicemax::cli {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> kOperators = {"identity",           "maximal",    "maximal_reference", "restricted",
                                             "maximal_commutator", "commutator", "sharp",             "sharp_commutator"};

/// Everything a run was asked to do; embedded in every output for replay.
struct RunConfig {
  std::string command;
  std::string input;
  std::vector<std::string> generators;
  std::string shape;
  double cell_size = 0.0;  // 0: 1 / (cells per axis) for generated grids
  std::string symbol;
  std::string symbol_input;
  std::string op = "maximal";
  std::string cube;
  std::vector<double> alphas;
  std::string exponents;
  std::string slice;
  std::size_t max_scale = 0;  // 0: the whole grid
  std::string scales = "all";
  std::string boundary = "interior";
  std::uint64_t seed = 1;
  std::string out;
  std::optional<double> tolerance;
  // verify
  std::vector<std::string> shapes;
  bool experiments = true;
  // sweep
  std::string axis = "resolution";
  std::string values;
  int theorem = 2;
  int dim = 1;
  std::size_t size = 64;
};

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  if (!c.input.empty()) j["input"] = c.input;
  if (!c.generators.empty()) j["generator"] = c.generators;
  if (!c.shape.empty()) j["shape"] = c.shape;
  if (c.cell_size > 0) j["cell_size"] = c.cell_size;
  if (!c.symbol.empty()) j["symbol"] = c.symbol;
  if (!c.symbol_input.empty()) j["symbol_input"] = c.symbol_input;
  if (c.command == "compute") j["operator"] = c.op;
  if (!c.cube.empty()) j["cube"] = c.cube;
  if (!c.alphas.empty()) j["alpha"] = c.alphas;
  if (!c.exponents.empty()) j["exponents"] = c.exponents;
  if (!c.slice.empty()) j["slice"] = c.slice;
  j["max_scale"] = c.max_scale;
  j["scales"] = c.scales;
  j["boundary"] = c.boundary;
  j["seed"] = c.seed;
  if (c.tolerance) j["tolerance"] = *c.tolerance;
  if (c.command == "verify") {
    if (!c.shapes.empty()) j["shapes"] = c.shapes;
    j["experiments"] = c.experiments;
  }
  if (c.command == "sweep") {
    j["axis"] = c.axis;
    j["values"] = c.values;
    j["theorem"] = c.theorem;
    j["dim"] = c.dim;
    j["size"] = c.size;
  }
  return j;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) throw ValidationError(what + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> parse_shape(const std::string& text) {
  std::vector<std::size_t> shape;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, 'x')) {
    const std::vector<double> v = parse_numbers(item, "--shape");
    if (v.size() != 1 || !(v[0] >= 1) || v[0] != std::floor(v[0]))
      throw ValidationError("--shape wants N or RxC with positive integers, got '" + text + "'");
    shape.push_back(static_cast<std::size_t>(v[0]));
  }
  if (shape.empty() || shape.size() > 2) throw ValidationError("--shape wants N or RxC, got '" + text + "'");
  return shape;
}

std::size_t extent(const GridFunction& f) { return std::max(f.rows(), f.cols()); }

CubeFamily family_for(const RunConfig& c, std::size_t grid_extent) {
  const std::size_t k = c.max_scale == 0 ? grid_extent : c.max_scale;
  const Boundary boundary = boundary_from_string(c.boundary);
  if (c.scales == "dyadic") return CubeFamily::dyadic(k, boundary);
  return CubeFamily::up_to(k, boundary);
}

double single_alpha(const RunConfig& c) {
  if (c.alphas.size() > 1) throw ValidationError("--alpha takes one value for " + c.command);
  return c.alphas.empty() ? 0.0 : c.alphas.front();
}

GridFunction load_input(const RunConfig& c) {
  if (!c.input.empty() && !c.generators.empty()) throw ValidationError("give either --input or --generator");
  if (!c.input.empty()) return load_grid(c.input);
  if (c.generators.size() != 1) throw ValidationError("compute needs --input or one --generator");
  if (c.shape.empty()) throw ValidationError("--generator needs --shape");
  const auto shape = parse_shape(c.shape);
  std::size_t n = 0;
  for (auto s : shape) n = std::max(n, s);
  const double h = c.cell_size > 0 ? c.cell_size : 1.0 / static_cast<double>(n);
  return verify::generate(c.generators.front(), shape, h, c.seed);
}

GridFunction load_symbol(const RunConfig& c, const GridFunction& like) {
  if (!c.symbol.empty() && !c.symbol_input.empty()) throw ValidationError("give either --symbol or --symbol-input");
  if (!c.symbol_input.empty()) {
    GridFunction b = load_grid(c.symbol_input);
    if (!b.same_geometry(like)) throw ValidationError("--symbol-input grid differs from the input grid");
    return b;
  }
  if (c.symbol.empty()) throw ValidationError("operator " + c.op + " needs --symbol or --symbol-input");
  std::vector<std::size_t> shape = {like.cols()};
  if (like.dim() == 2) shape = {like.rows(), like.cols()};
  return verify::generate(c.symbol, shape, like.cell_size(), c.seed);
}

Cube parse_cube(const std::string& text, int dim) {
  const std::vector<double> v = parse_numbers(text, "--cube");
  for (double x : v)
    if (x != std::floor(x)) throw ValidationError("--cube wants integers");
  if (dim == 1 && v.size() == 2 && v[1] >= 1) return Cube::interval(static_cast<std::ptrdiff_t>(v[0]), static_cast<std::size_t>(v[1]));
  if (dim == 2 && v.size() == 3 && v[2] >= 1)
    return Cube::square(static_cast<std::ptrdiff_t>(v[0]), static_cast<std::ptrdiff_t>(v[1]), static_cast<std::size_t>(v[2]));
  throw ValidationError("--cube wants first,side in 1D or row,col,side in 2D");
}

std::optional<ExponentSet> exponents_for(const RunConfig& c, double alpha, int dim) {
  if (c.exponents.empty()) return std::nullopt;
  const std::vector<double> v = parse_numbers(c.exponents, "--exponents");
  if (v.size() != 4) throw ValidationError("--exponents wants p,q,r,s");
  ExponentSet e{v[0], v[1], v[2], v[3], alpha, dim};
  e.validate();
  return e;
}

std::optional<SliceParams> slice_for(const RunConfig& c) {
  if (c.slice.empty()) return std::nullopt;
  const std::vector<double> v = parse_numbers(c.slice, "--slice");
  if (v.size() != 3) throw ValidationError("--slice wants t,r,p");
  SliceParams s{v[0], v[1], v[2]};
  s.validate();
  return s;
}

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json norms_of(const GridFunction& f, double p, const std::optional<SliceParams>& slice,
                      const CubeFamily& family) {
  ordered_json j;
  j["lp_exponent"] = p;
  j["lp"] = number(lp_norm(f, p));
  if (slice) j["slice"] = number(slice_norm(f, *slice));
  j["bmo"] = number(bmo_norm(f, family));
  j["max_abs"] = number(max_abs(f));
  return j;
}

int cmd_compute(const RunConfig& c, std::ostream& out) {
  if (std::find(kOperators.begin(), kOperators.end(), c.op) == kOperators.end())
    throw ValidationError("unknown operator '" + c.op + "'");
  const GridFunction f = load_input(c);
  const double alpha = single_alpha(c);
  const std::optional<ExponentSet> exps = exponents_for(c, alpha, f.dim());
  const std::optional<SliceParams> slice = slice_for(c);
  const CubeFamily family = family_for(c, extent(f));
  const OperatorParams params{alpha, family};

  GridFunction result = f;
  if (c.op == "maximal") {
    result = maximal_fast(f, params);
  } else if (c.op == "maximal_reference") {
    result = maximal(f, params);
  } else if (c.op == "restricted") {
    if (c.cube.empty()) throw ValidationError("operator restricted needs --cube");
    result = maximal_restricted_fast(f, parse_cube(c.cube, f.dim()), params);
  } else if (c.op == "sharp") {
    result = sharp_maximal(f, family);
  } else if (c.op != "identity") {
    const GridFunction b = load_symbol(c, f);
    if (c.op == "maximal_commutator") result = maximal_commutator(b, f, params);
    if (c.op == "commutator") result = commutator_maximal(b, f, params);
    if (c.op == "sharp_commutator") result = commutator_sharp(b, f, family);
  }

  const double p = exps ? exps->p : 2.0;
  ordered_json sidecar;
  sidecar["schema_version"] = 1;
  sidecar["config"] = to_json(c);
  sidecar["operator"] = c.op;
  sidecar["family"] = family.describe();
  sidecar["input"] = norms_of(f, p, slice, family);
  sidecar["output"] = norms_of(result, exps ? exps->r : p, slice, family);

  const std::string grid = "# config: " + to_json(c).dump() + "\n" + format_grid(result);
  if (c.out.empty()) {
    out << grid << "# norms: " << sidecar.dump() << "\n";
  } else {
    write_text_file(c.out, grid);
    write_text_file(c.out + ".json", sidecar.dump(2) + "\n");
    out << "wrote " << c.out << " and " << c.out << ".json\n";
  }
  return kSuccess;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  verify::SuiteConfig suite;
  suite.seed = c.seed;
  if (!c.generators.empty()) suite.symbols = c.generators;
  if (!c.shapes.empty()) {
    suite.shapes.clear();
    for (const std::string& s : c.shapes) suite.shapes.push_back(parse_shape(s));
  }
  suite.alphas = c.alphas;
  suite.max_scale = c.max_scale;
  suite.boundary = boundary_from_string(c.boundary);
  if (c.tolerance) {
    if (!(*c.tolerance >= 0)) throw ValidationError("--tolerance must be non-negative");
    suite.tolerances.override_hard(*c.tolerance);
  }
  if (!c.experiments) {
    suite.refinement_symbols.clear();
    suite.growth_symbols.clear();
    suite.rank_symbols.clear();
    suite.resolutions.clear();
  }

  ordered_json config = ordered_json::parse(verify::suite_config_json(suite));
  config["run"] = to_json(c);
  const auto reports = verify::run_suite(suite);
  if (!c.out.empty()) verify::save_report(reports, c.out, config.dump());

  out << verify::format_summary(verify::summarize(reports));
  std::size_t failures = 0;
  for (const auto& r : reports) {
    if (!r.hard_failure()) continue;
    if (failures++ == 0) out << "\nhard failures:\n";
    out << "  " << r.check_id << " " << r.instance.key();
    if (!r.message.empty()) out << "  " << r.message;
    out << "\n";
  }
  return failures == 0 ? kSuccess : kAssertionFailure;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  verify::SweepConfig sweep;
  sweep.axis = verify::sweep_axis_from_string(c.axis);
  if (!c.values.empty()) sweep.values = parse_numbers(c.values, "--values");
  if (c.generators.size() > 1) throw ValidationError("sweep takes one --generator (the symbol b)");
  if (!c.generators.empty()) sweep.experiment.symbol = verify::GeneratorSpec::parse(c.generators.front()).canonical();
  sweep.experiment.dim = c.dim;
  sweep.experiment.seed = c.seed;
  sweep.experiment.boundary = boundary_from_string(c.boundary);
  sweep.theorem = c.theorem;
  sweep.alpha = single_alpha(c);
  sweep.size = c.size;
  if (!c.exponents.empty()) {
    const std::vector<double> v = parse_numbers(c.exponents, "--exponents");
    if (v.size() != 2 && v.size() != 4) throw ValidationError("--exponents wants p,q or p,q,r,s");
    sweep.p = v[0];
    sweep.q = v[1];
    if (v.size() == 4) ExponentSet{v[0], v[1], v[2], v[3], sweep.alpha, c.dim}.validate();
  }
  ExponentSet::from_alpha(sweep.alpha, c.dim, sweep.p, sweep.q).validate();
  if (const auto slice = slice_for(c)) sweep.t = slice->t;

  const std::string csv = verify::run_sweep(sweep, to_json(c).dump());
  if (c.out.empty())
    out << csv;
  else
    write_text_file(c.out, csv);
  return kSuccess;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--alpha", c.alphas, "Fractional order(s) alpha")->delimiter(',');
  sub->add_option("--max-scale", c.max_scale, "Largest cube side K in cells (0: whole grid)");
  sub->add_option("--boundary", c.boundary, "Cube boundary policy")->check(CLI::IsMember({"interior", "clipped"}));
  sub->add_option("--seed", c.seed, "Seed for generated data");
  sub->add_option("--out", c.out, "Output path");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Discrete fractional and sharp maximal operators, slice and BMO norms, and a verification suite"};
  app.name("slicemax");
  app.require_subcommand(1);

  CLI::App* compute = app.add_subcommand("compute", "Apply an operator to a grid and report norms");
  compute->add_option("--input", c.input, "Input grid file");
  compute->add_option("--generator", c.generators, "Generator spec for the input, e.g. indicator:lo=0.25,hi=0.5")
      ->expected(1);
  compute->add_option("--shape", c.shape, "Grid shape for --generator: N or RxC");
  compute->add_option("--cell-size", c.cell_size, "Cell size h for --generator (default 1/N)");
  compute->add_option("--operator", c.op, "Operator: identity, maximal, maximal_reference, restricted, maximal_commutator, commutator, sharp, sharp_commutator");
  compute->add_option("--symbol", c.symbol, "Generator spec for the symbol b");
  compute->add_option("--symbol-input", c.symbol_input, "Grid file for the symbol b");
  compute->add_option("--cube", c.cube, "Cube Q* for restricted: first,side or row,col,side");
  compute->add_option("--exponents", c.exponents, "p,q,r,s, checked against alpha");
  compute->add_option("--slice", c.slice, "Slice norm parameters t,r,p");
  compute->add_option("--scales", c.scales, "Cube sides: all up to K, or powers of two")
      ->check(CLI::IsMember({"all", "dyadic"}));
  add_common(compute, c);

  CLI::App* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--generator", c.generators, "Symbol b to check (repeatable; default corpus)");
  verify->add_option("--shape", c.shapes, "Grid shape N or RxC (repeatable)");
  verify->add_option("--tolerance", c.tolerance, "Override every hard-check tolerance");
  verify->add_flag("!--no-experiments", c.experiments, "Skip refinement and domain-growth experiments");
  add_common(verify, c);

  CLI::App* sweep = app.add_subcommand("sweep", "Tabulate constants along one parameter axis as CSV");
  sweep->add_option("--axis", c.axis, "resolution, domain, alpha or t")
      ->check(CLI::IsMember({"resolution", "domain", "alpha", "t"}));
  sweep->add_option("--values", c.values, "Comma-separated axis values (empty: header only)");
  sweep->add_option("--generator", c.generators, "Symbol b (default log_bmo)")->expected(1);
  sweep->add_option("--theorem", c.theorem, "Theorem 1, 2 or 3")->check(CLI::Range(1, 3));
  sweep->add_option("--exponents", c.exponents, "p,q (r and s follow from alpha) or p,q,r,s");
  sweep->add_option("--slice", c.slice, "t,r,p; only t is used (r and s follow from the exponents)");
  sweep->add_option("--dim", c.dim, "Dimension 1 or 2")->check(CLI::Range(1, 2));
  sweep->add_option("--size", c.size, "Cells per axis for the alpha and t axes");
  add_common(sweep, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (compute->parsed()) {
      c.command = "compute";
      return cmd_compute(c, out);
    }
    if (verify->parsed()) {
      c.command = "verify";
      return cmd_verify(c, out);
    }
    c.command = "sweep";
    return cmd_sweep(c, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << "\n";
    return kValidation;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace slicemax::cli
