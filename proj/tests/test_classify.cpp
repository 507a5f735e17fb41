#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "eaplab/classify.hpp"
#include "eaplab/connections.hpp"
#include "eaplab/errors.hpp"

using namespace eaplab;

namespace {

const SpacePoint kP{{0.3, -0.2}, {0.7, 0.9}};

double pair_max(const std::pair<double, double>& pr) {
  return std::max(pr.first, pr.second);
}

// Positional offset of the berwald2 nonlinear connection, written out from
// its catalog definition; the covariant route must reproduce it exactly.
Nd<double> berwald2_offset(const SpacePoint& p) {
  Nd<double> phi(std::vector<int>{2, 2});
  double x0 = p.x[0], x1 = p.x[1];
  phi(0, 0) = 0.1 * std::sin(x1);
  phi(0, 1) = 0.1 * std::cos(x0);
  phi(1, 0) = 0.1 * std::sin(x0 + x1);
  phi(1, 1) = 0.1 * std::cos(x0 - x1);
  return phi;
}

const SuiteCheck& find_check(const SuiteReport& rep, const std::string& id) {
  for (const SuiteCheck& c : rep.checks)
    if (c.id == id) return c;
  REQUIRE_MESSAGE(false, "missing check " << id);
  static SuiteCheck dummy;
  return dummy;
}

}  // namespace

TEST_CASE("liouville covariant residuals separate the regimes") {
  for (const char* name : {"flat", "cartan2", "cb2"}) {
    const Space& sp = builtin_space(name);
    for (const SpacePoint& p : sample_points(sp, 10, 77)) {
      CAPTURE(name);
      CHECK(pair_max(cartan_residual(sp, p)) < 1e-10);
    }
  }
  const Space& bw = builtin_space("berwald2");
  double worst = 0.0;
  for (const SpacePoint& p : sample_points(bw, 10, 77)) {
    auto r = cartan_residual(bw, p);
    worst = std::max(worst, r.first);
    CHECK(r.second < 1e-12);
  }
  CHECK(worst > 0.01);
  const Space& gen = builtin_space("generic2");
  double g1 = 0.0, g2 = 0.0;
  for (const SpacePoint& p : sample_points(gen, 10, 77)) {
    auto r = cartan_residual(gen, p);
    g1 = std::max(g1, r.first);
    g2 = std::max(g2, r.second);
  }
  CHECK(g1 > 0.01);
  CHECK(g2 > 0.01);
}

TEST_CASE("berwald2 horizontal liouville residual is its positional offset") {
  const Space& sp = builtin_space("berwald2");
  for (const SpacePoint& p : sample_points(sp, 10, 77)) {
    Nd<double> phi = berwald2_offset(p);
    CHECK(max_abs(phi) > 0.01);
    // The jacobian route: N minus the contracted vv coefficients.
    auto c = make_ctx<J1>(sp, p);
    ConnectionCoefficients<J0> D = canonical_connection(c);
    Nd<double> gap(std::vector<int>{2, 2});
    for (int a = 0; a < 2; ++a)
      for (int mu = 0; mu < 2; ++mu) {
        double acc = 0.0;
        for (int bb = 0; bb < 2; ++bb) acc += p.y[bb] * D.G_vv_h(a, bb, mu);
        gap(a, mu) = values(c.N)(a, mu) - acc;
      }
    CHECK(max_abs_diff(gap, phi) < 1e-12);
    CHECK(cartan_residual(sp, p).first == doctest::Approx(max_abs(phi))
                                              .epsilon(1e-10));
  }
}

TEST_CASE("fibre jacobian residuals separate the regimes") {
  for (const char* name : {"flat", "berwald2", "cb2"}) {
    const Space& sp = builtin_space(name);
    for (const SpacePoint& p : sample_points(sp, 10, 77)) {
      CAPTURE(name);
      CHECK(pair_max(berwald_residual(sp, p)) < 1e-10);
    }
  }
  const Space& ct = builtin_space("cartan2");
  double worst_c = 0.0;
  for (const SpacePoint& p : sample_points(ct, 10, 77)) {
    auto r = berwald_residual(ct, p);
    CHECK(r.first < 1e-12);
    worst_c = std::max(worst_c, r.second);
  }
  CHECK(worst_c > 0.01);
}

TEST_CASE("induced nonlinear connection recovers the catalog one") {
  const Space& ct = builtin_space("cartan2");
  for (const SpacePoint& p : sample_points(ct, 10, 77))
    CHECK(max_abs(induced_nlc(ct, p) - evaluate_nlc(ct, p)) < 1e-10);
  const Space& fl = builtin_space("flat");
  CHECK(max_abs(induced_nlc(fl, kP)) < 1e-14);
  // On berwald2 the induced connection misses N by exactly the offset.
  const Space& bw = builtin_space("berwald2");
  for (const SpacePoint& p : sample_points(bw, 6, 77)) {
    Nd<double> diff = induced_nlc(bw, p) - evaluate_nlc(bw, p);
    CHECK(max_abs_diff(diff, scaled(berwald2_offset(p), -1.0)) < 1e-12);
  }
}

TEST_CASE("classifier labels the catalog") {
  CHECK(classify(builtin_space("flat"), 50, 42).label == "cb");
  CHECK(classify(builtin_space("cb2"), 50, 42).label == "cb");
  CHECK(classify(builtin_space("cartan2"), 50, 42).label == "cartan");
  CHECK(classify(builtin_space("berwald2"), 50, 42).label == "berwald");
  ClassificationReport rep = classify(builtin_space("generic2"), 50, 42);
  CHECK(rep.label == "generic");
  CHECK(rep.residuals.at("cartan_h") > 0.01);
  CHECK(rep.residuals.at("cartan_v") > 0.01);
  CHECK(rep.residuals.at("berwald_p") > 0.01);
  CHECK(rep.residuals.at("berwald_c") > 0.01);
  CHECK(rep.samples == 50);
  CHECK(rep.seed == 42);
}

TEST_CASE("classifier is stable under sample doubling") {
  CHECK(classify(builtin_space("generic2"), 25, 42).label == "generic");
  CHECK(classify(builtin_space("cartan2"), 25, 42).label == "cartan");
}

TEST_CASE("residuals inside the tolerance gap give an indeterminate label") {
  // Force the gap by demanding an impossible pass tolerance.
  ClassificationReport rep =
      classify(builtin_space("cartan2"), 10, 42, 1e-22, 1e-3);
  CHECK(rep.label == "indeterminate");
}

TEST_CASE("cartan consequence suite passes on its spaces") {
  SuiteReport rep = cartan_consequence_suite(builtin_space("cartan2"), 12, 77);
  for (const SuiteCheck& c : rep.checks) {
    CAPTURE(c.id);
    CHECK(c.pass);
    CHECK(c.residual < 1e-9);
  }
  CHECK(find_check(rep, "cartan.table_curvature_alive").degenerate == false);
  CHECK(find_check(rep, "cartan.w_survivor_dual_hhh").degenerate == false);
  CHECK(find_check(rep, "cartan.frame_homogeneity").degenerate);
  CHECK(find_check(rep, "cartan.torsion_tv").degenerate);

  SuiteReport flat = cartan_consequence_suite(builtin_space("flat"), 8, 77);
  CHECK(flat.all_pass());
  CHECK(find_check(flat, "cartan.table_curvature_alive").degenerate);
  CHECK(flat.degenerate_count() > 10);

  SuiteReport cb = cartan_consequence_suite(builtin_space("cb2"), 12, 77);
  CHECK(cb.all_pass());
  CHECK(find_check(cb, "cartan.w_survivor_dual_hhh").degenerate == false);
}

TEST_CASE("berwald consequence suite passes on its spaces") {
  SuiteReport rep =
      berwald_consequence_suite(builtin_space("berwald2"), 12, 77);
  for (const SuiteCheck& c : rep.checks) {
    CAPTURE(c.id);
    CHECK(c.pass);
    CHECK(c.residual < 1e-8);
  }
  CHECK(find_check(rep, "berwald.dual_rhh_form").degenerate == false);
  CHECK(find_check(rep, "berwald.w_natural_hhh").degenerate == false);
  // The catalog instance has a degenerate vertical sector: the coupling
  // identity and the alive mask hold as 0 = 0.
  CHECK(find_check(rep, "berwald.natural_rvh_coupling").degenerate);
  CHECK(find_check(rep, "berwald.table_curvature_alive").degenerate);

  SuiteReport cb = berwald_consequence_suite(builtin_space("cb2"), 12, 77);
  CHECK(cb.all_pass());
  CHECK(find_check(cb, "berwald.table_torsion_alive").degenerate);

  SuiteReport flat = berwald_consequence_suite(builtin_space("flat"), 8, 77);
  CHECK(flat.all_pass());
}

TEST_CASE("cb consequence suite passes on its spaces") {
  SuiteReport rep = cb_consequence_suite(builtin_space("cb2"), 12, 77);
  for (const SuiteCheck& c : rep.checks) {
    CAPTURE(c.id);
    CHECK(c.pass);
    CHECK(c.residual < 1e-8);
  }
  CHECK(find_check(rep, "cb.w_single_form").degenerate == false);
  CHECK(find_check(rep, "cb.table_curvature_alive").degenerate == false);
  CHECK(find_check(rep, "cb.coefficients_coincide").degenerate == false);

  SuiteReport flat = cb_consequence_suite(builtin_space("flat"), 8, 77);
  CHECK(flat.all_pass());
  CHECK(find_check(flat, "cb.w_single_form").degenerate);
}

TEST_CASE("consequence suites refuse spaces outside their regime") {
  CHECK_THROWS_AS(
      cartan_consequence_suite(builtin_space("berwald2"), 6, 77),
      PreconditionNotCartan);
  CHECK_THROWS_AS(
      cartan_consequence_suite(builtin_space("generic2"), 6, 77),
      PreconditionNotCartan);
  CHECK_THROWS_AS(
      berwald_consequence_suite(builtin_space("cartan2"), 6, 77),
      PreconditionNotBerwald);
  CHECK_THROWS_AS(
      berwald_consequence_suite(builtin_space("generic2"), 6, 77),
      PreconditionNotBerwald);
  CHECK_THROWS_AS(cb_consequence_suite(builtin_space("berwald2"), 6, 77),
                  PreconditionNotCB);
  CHECK_THROWS_AS(cb_consequence_suite(builtin_space("generic2"), 6, 77),
                  PreconditionNotCB);
}

TEST_CASE("suite reports carry anchors and stable ordering") {
  SuiteReport a = cartan_consequence_suite(builtin_space("cartan2"), 4, 19);
  SuiteReport b = cartan_consequence_suite(builtin_space("cartan2"), 4, 19);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].id == b.checks[i].id);
    CHECK(a.checks[i].residual == b.checks[i].residual);
    CHECK(!a.checks[i].anchor.empty());
    CHECK(a.checks[i].tolerance > 0);
  }
}
