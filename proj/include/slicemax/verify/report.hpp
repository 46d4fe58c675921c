#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slicemax/grid.hpp"
#include "slicemax/norms.hpp"

namespace slicemax::verify {

inline constexpr int kReportSchemaVersion = 1;

enum class Verdict {
  pass,
  fail,
  vacuous,           // the assertion has nothing to say on this instance
  gap,               // a premise failed on the grid, so the dependent identity was skipped
  vacuous_boundary,  // the needed window would leave the grid
};

std::string to_string(Verdict v);

/// Everything needed to rebuild the instance a check ran on.
struct InstanceDescriptor {
  std::string symbol;  // generator spec of b, or a label
  std::string input;   // generator spec of f when the check has one
  std::uint64_t seed = 0;
  std::vector<std::size_t> shape;
  double h = 1.0;
  double alpha = 0.0;
  std::optional<ExponentSet> exponents;
  std::optional<double> t;
  std::optional<Cube> cube;
  std::string family;
  std::string note;  // free-form extra coordinates, e.g. the refinement sequence

  /// Stable text used to order reports.
  std::string key() const;
};

struct Quantity {
  std::string name;
  double value = 0.0;
};

/// Largest observed ratio for a "there exists C" claim and where it was attained.
struct EmpiricalConstant {
  std::string name;
  double value = 0.0;
  std::string argmax;
};

struct VerificationReport {
  std::string check_id;
  InstanceDescriptor instance;
  std::vector<Quantity> quantities;
  double tolerance = 0.0;
  Verdict verdict = Verdict::pass;
  bool hard = true;  // hard assertions decide the exit status; soft ones are stability/trend checks
  std::vector<EmpiricalConstant> constants;
  std::string message;

  void add(const std::string& name, double value) { quantities.push_back({name, value}); }
  /// Value of a recorded quantity; throws ValidationError if absent.
  double quantity(const std::string& name) const;
  bool failed() const { return verdict == Verdict::fail; }
  bool hard_failure() const { return hard && failed(); }
};

/// Sorts reports by check id, then instance key, then message.
void canonicalize(std::vector<VerificationReport>& reports);

/// JSON document {"schema_version", "config", "reports": [...]}; `config_json` must be a JSON value.
/// Non-finite quantities are written as null.
std::string report_json(const std::vector<VerificationReport>& reports, const std::string& config_json = "{}");
void save_report(const std::vector<VerificationReport>& reports, const std::filesystem::path& path,
                 const std::string& config_json = "{}");

struct SummaryRow {
  std::string check_id;
  std::size_t instances = 0;
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t vacuous = 0;  // vacuous, gap and vacuous_boundary together
  bool hard = true;
};

std::vector<SummaryRow> summarize(const std::vector<VerificationReport>& reports);
/// Fixed-width table, one row per check plus a total line.
std::string format_summary(const std::vector<SummaryRow>& rows);

}  // namespace slicemax::verify
