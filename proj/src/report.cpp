#include "eaplab/report.hpp"

#include "json.hpp"

namespace eaplab {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json check_to_json(const SuiteCheck& c) {
  ordered_json j;
  j["id"] = c.id;
  j["anchor"] = c.anchor;
  j["residual"] = c.residual;
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  j["degenerate"] = c.degenerate;
  return j;
}

ordered_json suite_to_json(const SuiteReport& r) {
  ordered_json j;
  j["suite"] = r.suite;
  j["space"] = r.space;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["pass"] = r.all_pass();
  ordered_json counts;
  counts["checks"] = r.checks.size();
  counts["failed"] = r.failed();
  counts["degenerate"] = r.degenerate_count();
  j["counts"] = counts;
  ordered_json arr = ordered_json::array();
  for (const SuiteCheck& c : r.checks) arr.push_back(check_to_json(c));
  j["checks"] = arr;
  return j;
}

}  // namespace

std::string render_json(const SuiteReport& r) {
  return suite_to_json(r).dump(2);
}

std::string render_json(const ReportDocument& doc) {
  ordered_json j;
  j["version"] = doc.version;
  j["space"] = doc.space;
  j["dim"] = doc.dim;
  if (!doc.timestamp.empty()) j["timestamp"] = doc.timestamp;
  j["pass"] = doc.all_pass();
  ordered_json arr = ordered_json::array();
  for (const SuiteReport& s : doc.suites) arr.push_back(suite_to_json(s));
  j["suites"] = arr;
  return j.dump(2);
}

}  // namespace eaplab
