#include "slicemax/verify/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include <json.hpp>

#include "slicemax/io.hpp"

namespace slicemax::verify {

namespace {

using nlohmann::ordered_json;

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json to_json(const InstanceDescriptor& d) {
  ordered_json j;
  j["symbol"] = d.symbol;
  if (!d.input.empty()) j["input"] = d.input;
  j["seed"] = d.seed;
  j["shape"] = d.shape;
  j["h"] = d.h;
  j["alpha"] = d.alpha;
  if (d.exponents) {
    const ExponentSet& e = *d.exponents;
    j["exponents"] = {{"p", e.p}, {"q", e.q}, {"r", e.r}, {"s", e.s}};
  }
  if (d.t) j["t"] = *d.t;
  if (d.cube) {
    const int dim = static_cast<int>(std::max<std::size_t>(d.shape.size(), 1));
    j["cube"] = {{"anchor", dim == 2 ? std::vector<std::ptrdiff_t>{d.cube->anchor[0], d.cube->anchor[1]}
                                     : std::vector<std::ptrdiff_t>{d.cube->anchor[0]}},
                 {"side", d.cube->side}};
  }
  if (!d.family.empty()) j["family"] = d.family;
  if (!d.note.empty()) j["note"] = d.note;
  return j;
}

ordered_json to_json(const VerificationReport& r) {
  ordered_json j;
  j["check_id"] = r.check_id;
  j["instance"] = to_json(r.instance);
  ordered_json q = ordered_json::object();
  for (const Quantity& x : r.quantities) q[x.name] = number(x.value);
  j["quantities"] = q;
  j["tolerance"] = number(r.tolerance);
  j["verdict"] = to_string(r.verdict);
  j["hard"] = r.hard;
  ordered_json c = ordered_json::array();
  for (const EmpiricalConstant& k : r.constants)
    c.push_back({{"name", k.name}, {"value", number(k.value)}, {"argmax", k.argmax}});
  j["constants"] = c;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::vacuous: return "vacuous";
    case Verdict::gap: return "gap";
    case Verdict::vacuous_boundary: return "vacuous-boundary";
  }
  return "?";
}

std::string InstanceDescriptor::key() const { return to_json(*this).dump(); }

double VerificationReport::quantity(const std::string& name) const {
  for (const Quantity& q : quantities)
    if (q.name == name) return q.value;
  throw ValidationError("report " + check_id + " has no quantity '" + name + "'");
}

void canonicalize(std::vector<VerificationReport>& reports) {
  std::vector<std::pair<std::string, std::size_t>> keys;
  for (std::size_t i = 0; i < reports.size(); ++i)
    keys.emplace_back(reports[i].check_id + '\n' + reports[i].instance.key() + '\n' + reports[i].message, i);
  std::stable_sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<VerificationReport> sorted;
  sorted.reserve(reports.size());
  for (const auto& [_, i] : keys) sorted.push_back(std::move(reports[i]));
  reports = std::move(sorted);
}

std::string report_json(const std::vector<VerificationReport>& reports, const std::string& config_json) {
  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  try {
    doc["config"] = ordered_json::parse(config_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("report config is not JSON: ") + e.what());
  }
  ordered_json list = ordered_json::array();
  for (const VerificationReport& r : reports) list.push_back(to_json(r));
  doc["reports"] = std::move(list);
  return doc.dump(2) + "\n";
}

void save_report(const std::vector<VerificationReport>& reports, const std::filesystem::path& path,
                 const std::string& config_json) {
  write_text_file(path, report_json(reports, config_json));
}

std::vector<SummaryRow> summarize(const std::vector<VerificationReport>& reports) {
  std::map<std::string, SummaryRow> rows;
  for (const VerificationReport& r : reports) {
    SummaryRow& row = rows[r.check_id];
    row.check_id = r.check_id;
    row.hard = r.hard;
    ++row.instances;
    if (r.verdict == Verdict::pass)
      ++row.pass;
    else if (r.verdict == Verdict::fail)
      ++row.fail;
    else
      ++row.vacuous;
  }
  std::vector<SummaryRow> out;
  for (auto& [_, row] : rows) out.push_back(row);
  return out;
}

std::string format_summary(const std::vector<SummaryRow>& rows) {
  std::size_t width = 5;
  for (const SummaryRow& r : rows) width = std::max(width, r.check_id.size());
  std::string out;
  char line[256];
  auto emit = [&](const std::string& id, const char* kind, std::size_t n, std::size_t p, std::size_t f,
                  std::size_t v) {
    std::snprintf(line, sizeof line, "%-*s  %-4s  %9zu  %6zu  %6zu  %7zu\n", static_cast<int>(width), id.c_str(),
                  kind, n, p, f, v);
    out += line;
  };
  std::snprintf(line, sizeof line, "%-*s  %-4s  %9s  %6s  %6s  %7s\n", static_cast<int>(width), "check", "kind",
                "instances", "pass", "fail", "vacuous");
  out += line;
  SummaryRow total{"total", 0, 0, 0, 0, true};
  for (const SummaryRow& r : rows) {
    emit(r.check_id, r.hard ? "hard" : "soft", r.instances, r.pass, r.fail, r.vacuous);
    total.instances += r.instances;
    total.pass += r.pass;
    total.fail += r.fail;
    total.vacuous += r.vacuous;
  }
  emit(total.check_id, "", total.instances, total.pass, total.fail, total.vacuous);
  return out;
}

}  // namespace slicemax::verify
