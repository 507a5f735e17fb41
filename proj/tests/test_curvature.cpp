#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "eaplab/curvature.hpp"
#include "eaplab/metric.hpp"

using namespace eaplab;

namespace {

const SpacePoint kP{{0.3, -0.2}, {0.7, 0.9}};

double bundle_max(const CurvatureBundle& k) {
  double m = max_abs(k.R_hh);
  m = std::max(m, max_abs(k.R_vh));
  m = std::max(m, max_abs(k.P_h));
  m = std::max(m, max_abs(k.P_v));
  m = std::max(m, max_abs(k.S_h));
  m = std::max(m, max_abs(k.S_v));
  return m;
}

double bundle_gap(const CurvatureBundle& a, const CurvatureBundle& b) {
  double m = max_abs_diff(a.R_hh, b.R_hh);
  m = std::max(m, max_abs_diff(a.R_vh, b.R_vh));
  m = std::max(m, max_abs_diff(a.P_h, b.P_h));
  m = std::max(m, max_abs_diff(a.P_v, b.P_v));
  m = std::max(m, max_abs_diff(a.S_h, b.S_h));
  m = std::max(m, max_abs_diff(a.S_v, b.S_v));
  return m;
}

double contraction_gap(const CurvatureContractions& a,
                       const CurvatureContractions& b) {
  double m = max_abs_diff(a.ric_h, b.ric_h);
  m = std::max(m, max_abs_diff(a.p_h, b.p_h));
  m = std::max(m, max_abs_diff(a.p_v, b.p_v));
  m = std::max(m, max_abs_diff(a.s_v, b.s_v));
  m = std::max(m, std::fabs(a.r_scalar - b.r_scalar));
  m = std::max(m, std::fabs(a.s_scalar - b.s_scalar));
  return m;
}

double antisym34_max(const Nd<double>& b) {
  int n = b.shape()[0];
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          m = std::max(m, std::fabs(b(i, j, s, t) + b(i, j, t, s)));
  return m;
}

}  // namespace

TEST_CASE("canonical curvature vanishes identically across the catalog") {
  std::vector<const Space*> spaces = builtin_spaces();
  std::shared_ptr<const Space> g3 = make_generic(3);
  spaces.push_back(g3.get());
  for (const Space* sp : spaces) {
    std::string nm = sp->name();
    CAPTURE(nm);
    for (const SpacePoint& p : sample_points(*sp, 6, 91))
      CHECK(bundle_max(curvature_direct(ConnTag::canonical, *sp, p)) < 1e-9);
  }
}

TEST_CASE("every connection is flat on the trivial space") {
  for (int n : {2, 3}) {
    std::shared_ptr<const Space> sp = make_flat(n);
    for (const SpacePoint& p : sample_points(*sp, 3, 7))
      for (ConnTag tag : {ConnTag::canonical, ConnTag::natural, ConnTag::dual,
                          ConnTag::symmetric})
        CHECK(bundle_max(curvature_direct(tag, *sp, p)) < 1e-12);
  }
}

TEST_CASE("direct blocks are antisymmetric in the derivative pair") {
  const Space& sp = builtin_space("generic2");
  FrameCtx<J2> c = make_ctx<J2>(sp, kP);
  for (ConnTag tag : {ConnTag::natural, ConnTag::dual, ConnTag::symmetric}) {
    CurvatureBundle k = curvature_direct(tag, c);
    CHECK(antisym34_max(k.R_hh) == 0.0);
    CHECK(antisym34_max(k.R_vh) == 0.0);
    CHECK(antisym34_max(k.S_h) == 0.0);
    CHECK(antisym34_max(k.S_v) == 0.0);
  }
}

TEST_CASE("formula and direct routes agree for the non-canonical "
          "connections") {
  std::shared_ptr<const Space> g3 = make_generic(3);
  std::vector<std::pair<const Space*, int>> plan{
      {&builtin_space("generic2"), 3}, {g3.get(), 2}};
  for (auto [sp, count] : plan) {
    std::string nm = sp->name();
    CAPTURE(nm);
    std::vector<SpacePoint> pts = sample_points(*sp, count, 55);
    if (sp->dim() == 2) pts.push_back(kP);
    for (const SpacePoint& p : pts) {
      FrameCtx<J2> c = make_ctx<J2>(*sp, p);
      CurvatureBundle dn = curvature_direct(ConnTag::natural, c);
      CurvatureBundle dd = curvature_direct(ConnTag::dual, c);
      CurvatureBundle ds = curvature_direct(ConnTag::symmetric, c);
      CHECK(bundle_gap(dn, natural_curvature_formula(c)) < 1e-8);
      CHECK(bundle_gap(dd, dual_curvature_formula(c)) < 1e-8);
      CHECK(bundle_gap(ds, symmetric_curvature_formula(c)) < 1e-8);

      // The checks above are only meaningful on a space where the blocks
      // are alive.
      CHECK(max_abs(dn.R_hh) > 1e-4);
      CHECK(max_abs(dd.R_hh) > 1e-4);
      CHECK(max_abs(ds.R_hh) > 1e-4);
      CHECK(bundle_max(dn) > 1e-3);

      // Halving relations between the symmetric and dual mixed blocks.
      CHECK(max_abs_diff(ds.R_vh, scaled(dd.R_vh, 0.5)) < 1e-8);
      CHECK(max_abs_diff(ds.P_h, scaled(dd.P_h, 0.5)) < 1e-8);
      CHECK(max_abs_diff(ds.P_v, scaled(dd.P_v, 0.5)) < 1e-8);
    }
  }
}

TEST_CASE("trace contractions match their closed forms") {
  std::shared_ptr<const Space> g3 = make_generic(3);
  std::vector<const Space*> spaces{&builtin_space("generic2"), g3.get()};
  for (const Space* sp : spaces) {
    std::string nm = sp->name();
    CAPTURE(nm);
    std::vector<SpacePoint> pts = sample_points(*sp, 2, 31);
    if (sp->dim() == 2) pts.push_back(kP);
    for (const SpacePoint& p : pts) {
      FrameCtx<J2> c = make_ctx<J2>(*sp, p);
      HvMetric g = metric_from_frame(*sp, p);
      CurvatureContractions nat =
          contract(curvature_direct(ConnTag::natural, c), g);
      CurvatureContractions du =
          contract(curvature_direct(ConnTag::dual, c), g);
      CurvatureContractions sy =
          contract(curvature_direct(ConnTag::symmetric, c), g);
      CHECK(contraction_gap(nat, natural_contraction_formula(c)) < 1e-8);
      CHECK(contraction_gap(du, dual_contraction_formula(c)) < 1e-8);
      CHECK(contraction_gap(sy, symmetric_contraction_formula(c)) < 1e-8);
      CHECK(max_abs(nat.ric_h) > 1e-5);
      CHECK(max_abs(du.ric_h) > 1e-5);
    }
  }
}

TEST_CASE("torsion cyclic identities hold on every space") {
  std::vector<const Space*> spaces = builtin_spaces();
  std::shared_ptr<const Space> g3 = make_generic(3);
  spaces.push_back(g3.get());
  for (const Space* sp : spaces) {
    std::string nm = sp->name();
    CAPTURE(nm);
    for (const SpacePoint& p : sample_points(*sp, 3, 47)) {
      std::map<std::string, double> r = bianchi_residuals(*sp, p);
      for (const auto& [key, val] : r) {
        CAPTURE(key);
        CHECK(val < 1e-8);
      }
    }
  }
}

TEST_CASE("covariant derivative commutators reproduce each connection's "
          "curvature") {
  std::shared_ptr<const Space> g3 = make_generic(3);
  std::vector<std::pair<const Space*, int>> plan{
      {&builtin_space("generic2"), 2},
      {&builtin_space("cartan2"), 1},
      {&builtin_space("berwald2"), 1},
      {g3.get(), 1}};
  for (auto [sp, count] : plan) {
    std::string nm = sp->name();
    CAPTURE(nm);
    std::vector<SpacePoint> pts = sample_points(*sp, count, 63);
    if (nm == "generic2") pts.push_back(kP);
    for (const SpacePoint& p : pts)
      for (ConnTag tag : {ConnTag::canonical, ConnTag::natural, ConnTag::dual,
                          ConnTag::symmetric}) {
        std::string tg = to_string(tag);
        CAPTURE(tg);
        CHECK(commutation_residual(tag, *sp, p) < 1e-8);
      }
  }
}
