#include "doctest.h"

#include <cmath>
#include <vector>

#include "eaplab/field_theory.hpp"
#include "eaplab/metric.hpp"

using namespace eaplab;

namespace {

const SpacePoint kP{{0.3, -0.2}, {0.7, 0.9}};

Nd<double> diag2(double v) {
  Nd<double> m(std::vector<int>{2, 2});
  m(0, 0) = v;
  m(1, 1) = v;
  return m;
}

}  // namespace

TEST_CASE("flat lagrangians vanish with unit coframe determinants") {
  LagrangianValues lv = lagrangians(builtin_space("flat"), kP);
  CHECK(max_abs(lv.H_ab) == 0.0);
  CHECK(max_abs(lv.V_ab) == 0.0);
  CHECK(lv.H_scalar == 0.0);
  CHECK(lv.V_scalar == 0.0);
  CHECK(lv.H_density == 0.0);
  CHECK(lv.V_density == 0.0);
}

TEST_CASE("coframe determinant scales as the inverse frame power") {
  // Scaling the frame by c multiplies the lowered coframe determinant by
  // c^{-n}; pure determinant algebra on a constant frame.
  FramePair unit{diag2(1.0), diag2(1.0)};
  FramePair doubled{diag2(2.0), diag2(2.0)};
  CoFramePair co1 = invert_frame(unit);
  CoFramePair co2 = invert_frame(doubled);
  double d1 = 0.0, d2 = 0.0;
  Nd<double> m1 = co1.Ch, m2 = co2.Ch;
  invert_matrix(m1, &d1);
  invert_matrix(m2, &d2);
  CHECK(d1 == doctest::Approx(1.0));
  CHECK(d2 == doctest::Approx(0.25));
  CHECK(d2 == doctest::Approx(d1 * std::pow(2.0, -2)));
}

TEST_CASE("vertical lagrangian dies on a vanishing vertical torsion") {
  const Space& sp = builtin_space("cartan2");
  for (const SpacePoint& p : sample_points(sp, 8, 77)) {
    LagrangianValues lv = lagrangians(sp, p);
    CHECK(max_abs(lv.V_ab) < 1e-12);
    CHECK(std::fabs(lv.V_scalar) < 1e-12);
    CHECK(std::fabs(lv.V_density) < 1e-12);
  }
}

TEST_CASE("two-dimensional lagrangian components collapse identically") {
  // With one independent antisymmetric pair per upper index, the quadratic
  // torsion contraction equals the trace product, so H_ab and V_ab cancel
  // exactly in n = 2 whatever the space.
  for (const char* name : {"generic2", "cartan2", "berwald2", "cb2"}) {
    const Space& sp = builtin_space(name);
    for (const SpacePoint& p : sample_points(sp, 4, 77)) {
      CAPTURE(name);
      LagrangianValues lv = lagrangians(sp, p);
      CHECK(max_abs(lv.H_ab) < 1e-13);
      CHECK(max_abs(lv.V_ab) < 1e-13);
    }
  }
}

TEST_CASE("horizontal scalar matches a full-index-loop evaluation") {
  auto sp3 = make_generic(3);
  int n = 3;
  double live = 0.0;
  for (const SpacePoint& p : sample_points(*sp3, 8, 77)) {
    LagrangianValues lv = lagrangians(*sp3, p);
    auto c = make_ctx<J1>(*sp3, p);
    TorsionBundle t = torsion(canonical_connection(c), c);
    Nd<double> ghi = metric_from_frame(*sp3, p).g_h_inv;
    double oracle = 0.0;
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be) {
        for (int nu = 0; nu < n; ++nu)
          for (int ep = 0; ep < n; ++ep)
            oracle += ghi(al, be) * t.Lam(nu, ep, al) * t.Lam(ep, nu, be);
        double ca = 0.0, cb = 0.0;
        for (int s = 0; s < n; ++s) {
          ca += t.Lam(s, al, s);
          cb += t.Lam(s, be, s);
        }
        oracle -= ghi(al, be) * ca * cb;
      }
    CHECK(lv.H_scalar == doctest::Approx(oracle).epsilon(1e-12));
    live = std::max(live, std::fabs(lv.H_scalar));
  }
  CHECK(live > 1e-6);
}

TEST_CASE("cb2 densities: vertical zero, horizontal positional only") {
  const Space& sp = builtin_space("cb2");
  SpacePoint pa{{0.4, -0.3}, {0.8, 0.6}};
  SpacePoint pb{{0.4, -0.3}, {-0.5, 1.1}};
  LagrangianValues la = lagrangians(sp, pa);
  LagrangianValues lb = lagrangians(sp, pb);
  CHECK(std::fabs(la.V_density) < 1e-12);
  CHECK(std::fabs(lb.V_density) < 1e-12);
  CHECK(la.H_density == doctest::Approx(lb.H_density).epsilon(1e-12));
  CHECK(max_abs(la.H_ab - lb.H_ab) < 1e-12);
}
