#include "doctest.h"

#include "eaplab/connections.hpp"

using namespace eaplab;

namespace {

const SpacePoint kP{{0.3, -0.2}, {0.7, 0.9}};

Nd<double> lower_first(const Nd<double>& block, const Nd<double>& g) {
  int n = block.shape()[0];
  Nd<double> out(std::vector<int>{n, n, n});
  for (int u = 0; u < n; ++u)
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < n; ++m) {
        double acc = 0.0;
        for (int e = 0; e < n; ++e) acc += g(u, e) * block(e, s, m);
        out(u, s, m) = acc;
      }
  return out;
}

}  // namespace

TEST_CASE("connection tags parse and print") {
  for (const char* s : {"canonical", "natural", "dual", "symmetric"})
    CHECK(std::string(to_string(parse_conn_tag(s))) == s);
  CHECK_THROWS_AS(parse_conn_tag("levi-civita"), UnknownConnectionTag);
}

TEST_CASE("torsion and contortion identities hold on the generic space") {
  const Space& sp = builtin_space("generic2");
  std::vector<SpacePoint> pts = sample_points(sp, 3, 77);
  pts.push_back(kP);
  for (const SpacePoint& p : pts) {
    std::map<std::string, double> r = torsion_contortion_relations(sp, p);

    CHECK(r.at("torsion_antisym_hh") == 0.0);
    CHECK(r.at("torsion_antisym_vv") == 0.0);
    CHECK(r.at("nlc_curvature_antisym") == 0.0);

    CHECK(r.at("contortion_skew_hh") < 1e-12);
    CHECK(r.at("contortion_skew_vv_h") < 1e-12);
    CHECK(r.at("contortion_skew_hh_v") < 1e-12);
    CHECK(r.at("contortion_skew_vv_v") < 1e-12);
    CHECK(r.at("contortion_trace_hh") < 1e-12);
    CHECK(r.at("contortion_trace_vv_h") < 1e-12);
    CHECK(r.at("contortion_trace_hh_v") < 1e-12);
    CHECK(r.at("contortion_trace_vv_v") < 1e-12);

    CHECK(r.at("lambda_from_contortion") < 1e-10);
    CHECK(r.at("tv_from_contortion") < 1e-10);
    CHECK(r.at("p_from_contortion") < 1e-10);
    CHECK(r.at("c_from_contortion") < 1e-10);
    CHECK(r.at("basic_vector_from_contortion") < 1e-12);
    CHECK(r.at("contortion_from_torsion_hh") < 1e-10);
    CHECK(r.at("contortion_from_torsion_vv_v") < 1e-10);

    CHECK(r.at("contortion_two_routes") < 1e-10);
    CHECK(r.at("canonical_two_routes") < 1e-10);
    CHECK(r.at("natural_two_routes") < 1e-10);

    CHECK(r.at("ap_condition") < 1e-12);
    CHECK(r.at("cross_derivatives_vanish") < 1e-12);
    CHECK(r.at("dual_frame_derivative") < 1e-10);
    CHECK(r.at("symmetric_frame_derivative_half") < 1e-12);
  }
}

TEST_CASE("identities hold on the remaining catalog and in dimension three") {
  std::vector<const Space*> spaces = builtin_spaces();
  std::shared_ptr<const Space> g3 = make_generic(3);
  spaces.push_back(g3.get());
  for (const Space* sp : spaces) {
    for (const SpacePoint& p : sample_points(*sp, 2, 5)) {
      std::map<std::string, double> r = torsion_contortion_relations(*sp, p);
      std::string nm = sp->name();
      for (const auto& [key, val] : r) {
        CAPTURE(nm);
        CAPTURE(key);
        CHECK(val < 1e-10);
      }
    }
  }
}

TEST_CASE("canonical connection is metric across the catalog") {
  for (const Space* sp : builtin_spaces()) {
    for (const SpacePoint& p : sample_points(*sp, 8, 13)) {
      FrameCtx<J1> c = make_ctx<J1>(*sp, p);
      CHECK(metricity_residual(c, canonical_connection(c)) < 1e-10);
    }
  }
}

TEST_CASE("torsion bundles follow the per-connection pattern") {
  const Space& sp = builtin_space("generic2");
  FrameCtx<J1> c = make_ctx<J1>(sp, kP);
  ConnectionCoefficients<J0> can = canonical_connection(c);
  ConnectionCoefficients<J0> nat = natural_connection(c);
  ConnectionCoefficients<J0> du = dual_connection(can);
  ConnectionCoefficients<J0> sy = symmetric_connection(can);

  TorsionBundle tc = torsion(can, c);
  TorsionBundle tn = torsion(nat, c);
  TorsionBundle td = torsion(du, c);
  TorsionBundle ts = torsion(sy, c);

  // all five canonical pieces are live on this space
  CHECK(max_abs(tc.Lam) > 1e-4);
  CHECK(max_abs(tc.Rnl) > 1e-4);
  CHECK(max_abs(tc.Chv) > 1e-4);
  CHECK(max_abs(tc.P) > 1e-4);
  CHECK(max_abs(tc.Tv) > 1e-5);

  // natural: only Rnl, Chv, P survive
  CHECK(max_abs(tn.Lam) < 1e-13);
  CHECK(max_abs(tn.Tv) < 1e-13);
  CHECK(max_abs_diff(tn.Rnl, tc.Rnl) == 0.0);
  CHECK(max_abs(tn.Chv) > 1e-4);

  // dual: sign-flipped hh and vv blocks, shared mixed blocks
  CHECK(max_abs(td.Lam + tc.Lam) == 0.0);
  CHECK(max_abs(td.Tv + tc.Tv) == 0.0);
  CHECK(max_abs_diff(td.Chv, tc.Chv) == 0.0);
  CHECK(max_abs_diff(td.P, tc.P) == 0.0);
  CHECK(max_abs_diff(td.Rnl, tc.Rnl) == 0.0);

  // symmetric: hh and vv torsion die, the rest is canonical
  CHECK(max_abs(ts.Lam) == 0.0);
  CHECK(max_abs(ts.Tv) == 0.0);
  CHECK(max_abs_diff(ts.Chv, tc.Chv) == 0.0);
  CHECK(max_abs_diff(ts.P, tc.P) == 0.0);
}

TEST_CASE("metricity of dual and symmetric follows the torsion closed form") {
  const Space& sp = builtin_space("generic2");
  for (const SpacePoint& p : sample_points(sp, 4, 19)) {
    FrameCtx<J1> c = make_ctx<J1>(sp, p);
    HvMetric g = metric_from_frame(sp, p);
    ConnectionCoefficients<J0> can = canonical_connection(c);
    TorsionBundle t = torsion(can, c);
    MetricityBlocks md = metricity_blocks(c, dual_connection(can));
    MetricityBlocks ms = metricity_blocks(c, symmetric_connection(can));

    Nd<double> lam_low = lower_first(t.Lam, g.g_h);
    Nd<double> t_low = lower_first(t.Tv, g.g_v);
    int n = c.n;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int m = 0; m < n; ++m) {
          double want_h = lam_low(a, b, m) + lam_low(b, a, m);
          double want_v = t_low(a, b, m) + t_low(b, a, m);
          CHECK(std::fabs(md.hh_h(a, b, m) - want_h) < 1e-10);
          CHECK(std::fabs(md.vv_v(a, b, m) - want_v) < 1e-10);
          // hatted blocks are exactly half the tilded ones
          CHECK(std::fabs(ms.hh_h(a, b, m) - 0.5 * want_h) < 1e-10);
          CHECK(std::fabs(ms.vv_v(a, b, m) - 0.5 * want_v) < 1e-10);
        }
    CHECK(max_abs(md.hh_v) < 1e-13);
    CHECK(max_abs(md.vv_h) < 1e-13);
    CHECK(max_abs(ms.hh_v) < 1e-13);
    CHECK(max_abs(ms.vv_h) < 1e-13);
    // non-degenerate sample: the dual really fails to be metric
    CHECK(max_abs(md.hh_h) > 1e-4);
  }
}

TEST_CASE("basic vector contracts the torsion") {
  const Space& sp = builtin_space("generic2");
  FrameCtx<J1> c = make_ctx<J1>(sp, kP);
  TorsionBundle t = torsion(canonical_connection(c), c);
  BasicVector b = basic_vector(t);
  int n = c.n;
  for (int m = 0; m < n; ++m) {
    double ch = 0.0, cv = 0.0;
    for (int a = 0; a < n; ++a) {
      ch += t.Lam(a, m, a);
      cv += t.Tv(a, m, a);
    }
    CHECK(b.C_h(m) == ch);
    CHECK(b.C_v(m) == cv);
  }
  CHECK(max_abs(b.C_h) > 1e-5);
}

TEST_CASE("frame shape degeneracies produce the expected dead blocks") {
  {
    // vertical frame independent of y: no vv torsion, no vvv contortion
    const Space& sp = builtin_space("cb2");
    FrameCtx<J1> c = make_ctx<J1>(sp, kP);
    ConnectionCoefficients<J0> can = canonical_connection(c);
    CHECK(max_abs(can.C_vv_v) == 0.0);
    TorsionBundle t = torsion(can, c);
    CHECK(max_abs(t.Tv) == 0.0);
  }
  {
    // horizontal frame independent of y: no hh_v block
    const Space& sp = builtin_space("berwald2");
    FrameCtx<J1> c = make_ctx<J1>(sp, kP);
    ConnectionCoefficients<J0> can = canonical_connection(c);
    CHECK(max_abs(can.C_hh_v) == 0.0);
  }
}

TEST_CASE("dispatcher returns the matching constructor output") {
  const Space& sp = builtin_space("generic2");
  FrameCtx<J1> c = make_ctx<J1>(sp, kP);
  ConnectionCoefficients<J0> can = canonical_connection(c);
  CHECK(max_abs_diff(connection(ConnTag::canonical, c).G_hh, can.G_hh) == 0.0);
  CHECK(max_abs_diff(connection(ConnTag::dual, c).G_hh,
                     dual_connection(can).G_hh) == 0.0);
  CHECK(max_abs_diff(connection(ConnTag::symmetric, c).C_vv_v,
                     symmetric_connection(can).C_vv_v) == 0.0);
  CHECK(max_abs_diff(connection(ConnTag::natural, c).G_hh,
                     natural_connection(c).G_hh) == 0.0);
}
