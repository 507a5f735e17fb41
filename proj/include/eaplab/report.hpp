#pragma once
/**
 * @file report.hpp
 * @brief Check records and report documents shared by the verification
 *        suites and the command-line front end.
 */

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace eaplab {

/// Witness magnitude below which a passing check is flagged degenerate.
inline constexpr double kLiveFloor = 1e-8;

/// One verified statement: a residual accumulated over a sample sweep.
/// `anchor` is a display quotation naming the identity under test; it is
/// carried verbatim into reports.  `degenerate` marks checks whose live
/// witness vanished on the given space, so the pass is a consistent
/// 0 = 0 rather than a probing comparison.
struct SuiteCheck {
  std::string id;
  std::string anchor;
  double residual = 0.0;
  double tolerance = 0.0;
  bool degenerate = false;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::string space;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<SuiteCheck> checks;

  bool all_pass() const {
    for (const SuiteCheck& c : checks)
      if (!c.pass) return false;
    return true;
  }
  int failed() const {
    int k = 0;
    for (const SuiteCheck& c : checks) k += c.pass ? 0 : 1;
    return k;
  }
  int degenerate_count() const {
    int k = 0;
    for (const SuiteCheck& c : checks) k += c.degenerate ? 1 : 0;
    return k;
  }
};

/// Top-level report: one run of one or more suites against one space.
/// `timestamp` is informational only and excluded from determinism
/// guarantees; leave empty to omit it entirely.
struct ReportDocument {
  std::string version;
  std::string space;
  int dim = 0;
  std::string timestamp;
  std::vector<SuiteReport> suites;

  bool all_pass() const {
    for (const SuiteReport& s : suites)
      if (!s.all_pass()) return false;
    return true;
  }
};

/// Stable-key-order JSON rendering (UTF-8, two-space indent).
std::string render_json(const ReportDocument& doc);
std::string render_json(const SuiteReport& report);

/// Accumulates named residual maxima over a sample sweep, preserving the
/// declaration order for stable report output.  `witness` tracks the
/// magnitude of the live side of each comparison; a check whose witness
/// never rises above kLiveFloor is flagged degenerate.
class SuiteBuilder {
 public:
  SuiteBuilder(std::string suite, std::string space, int samples,
               std::uint64_t seed) {
    rep_.suite = std::move(suite);
    rep_.space = std::move(space);
    rep_.samples = samples;
    rep_.seed = seed;
  }

  void declare(std::string id, std::string anchor, double tol = 1e-9) {
    index_.emplace(id, rows_.size());
    Row r;
    r.check.id = std::move(id);
    r.check.anchor = std::move(anchor);
    r.check.tolerance = tol;
    rows_.push_back(std::move(r));
  }

  void update(const std::string& id, double residual, double witness) {
    Row& r = rows_.at(index_.at(id));
    r.check.residual = std::max(r.check.residual, residual);
    r.witness = std::max(r.witness, witness);
  }

  SuiteReport finish() && {
    for (Row& r : rows_) {
      r.check.pass = r.check.residual < r.check.tolerance;
      r.check.degenerate = r.witness < kLiveFloor;
      rep_.checks.push_back(std::move(r.check));
    }
    return std::move(rep_);
  }

 private:
  struct Row {
    SuiteCheck check;
    double witness = 0.0;
  };
  SuiteReport rep_;
  std::vector<Row> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace eaplab
