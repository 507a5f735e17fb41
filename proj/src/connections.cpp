#include "eaplab/connections.hpp"

namespace eaplab {

namespace {

double trace01_max(const Nd<double>& b) {
  // max over the free last index of the (first, second) trace
  int n = b.shape()[0];
  double m = 0.0;
  for (int s = 0; s < n; ++s) {
    double acc = 0.0;
    for (int a = 0; a < n; ++a) acc += b(a, a, s);
    m = std::max(m, std::fabs(acc));
  }
  return m;
}

double skew_first_pair_max(const Nd<double>& block, const Nd<double>& g) {
  // residual of skew-symmetry of g_{ue} block(e, s, m) in (u, s)
  int n = block.shape()[0];
  double worst = 0.0;
  for (int u = 0; u < n; ++u)
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < n; ++m) {
        double lo = 0.0, ol = 0.0;
        for (int e = 0; e < n; ++e) {
          lo += g(u, e) * block(e, s, m);
          ol += g(s, e) * block(e, u, m);
        }
        worst = std::max(worst, std::fabs(lo + ol));
      }
  return worst;
}

}  // namespace

std::map<std::string, double> torsion_contortion_relations(const Space& sp,
                                                           const SpacePoint& p) {
  FrameCtx<J1> c = make_ctx<J1>(sp, p);
  int n = c.n;
  Nd<J0> nv = values(c.N);
  HvMetric g = metric_from_frame(sp, p);

  ConnectionCoefficients<J0> can = canonical_connection(c);
  ConnectionCoefficients<J0> nat = natural_connection(c);
  ConnectionCoefficients<J0> du = dual_connection(can);
  ConnectionCoefficients<J0> sy = symmetric_connection(can);

  TorsionBundle tc = torsion(can, c);
  TorsionBundle tn = torsion(nat, c);
  ContortionBundle ga = contortion(c);
  ContortionBundle gd = contortion_via_difference(c);

  std::map<std::string, double> r;

  r["contortion_skew_hh"] = skew_first_pair_max(ga.g_hh, g.g_h);
  r["contortion_skew_vv_h"] = skew_first_pair_max(ga.g_vv_h, g.g_v);
  r["contortion_skew_hh_v"] = skew_first_pair_max(ga.g_hh_v, g.g_h);
  r["contortion_skew_vv_v"] = skew_first_pair_max(ga.g_vv_v, g.g_v);
  r["contortion_trace_hh"] = trace01_max(ga.g_hh);
  r["contortion_trace_vv_h"] = trace01_max(ga.g_vv_h);
  r["contortion_trace_hh_v"] = trace01_max(ga.g_hh_v);
  r["contortion_trace_vv_v"] = trace01_max(ga.g_vv_v);

  r["torsion_antisym_hh"] =
      max_abs(tc.Lam + transpose_last2(tc.Lam));
  r["torsion_antisym_vv"] = max_abs(tc.Tv + transpose_last2(tc.Tv));
  r["nlc_curvature_antisym"] =
      max_abs(tc.Rnl + transpose_last2(tc.Rnl));

  r["lambda_from_contortion"] =
      max_abs_diff(tc.Lam, ga.g_hh - transpose_last2(ga.g_hh));
  r["tv_from_contortion"] =
      max_abs_diff(tc.Tv, ga.g_vv_v - transpose_last2(ga.g_vv_v));
  {
    Nd<double> pexp(std::vector<int>{n, n, n});
    for (int a = 0; a < n; ++a)
      for (int mu = 0; mu < n; ++mu)
        for (int b = 0; b < n; ++b)
          pexp(a, mu, b) = -ga.g_vv_h(a, b, mu) + tn.P(a, mu, b);
    r["p_from_contortion"] = max_abs_diff(tc.P, pexp);
  }
  r["c_from_contortion"] = max_abs_diff(tc.Chv, ga.g_hh_v + nat.C_hh_v);

  {
    BasicVector bv = basic_vector(tc);
    double worst = 0.0;
    for (int m = 0; m < n; ++m) {
      double ch = 0.0, cv = 0.0;
      for (int a = 0; a < n; ++a) {
        ch += ga.g_hh(a, m, a);
        cv += ga.g_vv_v(a, m, a);
      }
      worst = std::max(worst, std::fabs(bv.C_h(m) - ch));
      worst = std::max(worst, std::fabs(bv.C_v(m) - cv));
    }
    r["basic_vector_from_contortion"] = worst;
  }

  {
    ContortionBundle rec = contortion_from_torsion(tc, g);
    r["contortion_from_torsion_hh"] = max_abs_diff(rec.g_hh, ga.g_hh);
    r["contortion_from_torsion_vv_v"] = max_abs_diff(rec.g_vv_v, ga.g_vv_v);
  }

  {
    double worst = std::max(
        std::max(max_abs_diff(ga.g_hh, gd.g_hh), max_abs_diff(ga.g_vv_h, gd.g_vv_h)),
        std::max(max_abs_diff(ga.g_hh_v, gd.g_hh_v),
                 max_abs_diff(ga.g_vv_v, gd.g_vv_v)));
    r["contortion_two_routes"] = worst;
  }

  {
    ConnectionCoefficients<J0> can2 = canonical_via_contortion(c);
    double worst = std::max(
        std::max(max_abs_diff(can.G_hh, can2.G_hh),
                 max_abs_diff(can.G_vv_h, can2.G_vv_h)),
        std::max(max_abs_diff(can.C_hh_v, can2.C_hh_v),
                 max_abs_diff(can.C_vv_v, can2.C_vv_v)));
    r["canonical_two_routes"] = worst;
  }

  {
    ConnectionCoefficients<J0> nat2 = natural_connection_via_lambda(c);
    double worst = std::max(
        std::max(max_abs_diff(nat.G_hh, nat2.G_hh),
                 max_abs_diff(nat.G_vv_h, nat2.G_vv_h)),
        std::max(max_abs_diff(nat.C_hh_v, nat2.C_hh_v),
                 max_abs_diff(nat.C_vv_v, nat2.C_vv_v)));
    r["natural_two_routes"] = worst;
  }

  // Frame-derivative identities for the canonical, dual and symmetric
  // connections.  The raised horizontal block is h-flat for the canonical
  // connection and reproduces the torsion contraction for the others.
  {
    Signature hu{slot_h_up()};
    Signature vu{slot_v_up()};
    Nd<J0> can_h = h_covariant_derivative(c.Ah, hu, 1, can, nv, n);
    Nd<J0> can_hv = v_covariant_derivative(c.Ah, hu, 1, can, nv, n);
    Nd<J0> can_v = h_covariant_derivative(c.Av, vu, 1, can, nv, n);
    Nd<J0> can_vv = v_covariant_derivative(c.Av, vu, 1, can, nv, n);
    r["ap_condition"] = std::max(
        std::max(max_abs(can_h), max_abs(can_hv)),
        std::max(max_abs(can_v), max_abs(can_vv)));

    Nd<J0> du_hv = v_covariant_derivative(c.Ah, hu, 1, du, nv, n);
    Nd<J0> sy_hv = v_covariant_derivative(c.Ah, hu, 1, sy, nv, n);
    Nd<J0> du_vh = h_covariant_derivative(c.Av, vu, 1, du, nv, n);
    Nd<J0> sy_vh = h_covariant_derivative(c.Av, vu, 1, sy, nv, n);
    r["cross_derivatives_vanish"] = std::max(
        std::max(max_abs(du_hv), max_abs(sy_hv)),
        std::max(max_abs(du_vh), max_abs(sy_vh)));

    Nd<J0> du_h = h_covariant_derivative(c.Ah, hu, 1, du, nv, n);
    Nd<J0> sy_h = h_covariant_derivative(c.Ah, hu, 1, sy, nv, n);
    Nd<J0> du_v = v_covariant_derivative(c.Av, vu, 1, du, nv, n);
    Nd<J0> sy_v = v_covariant_derivative(c.Av, vu, 1, sy, nv, n);
    Nd<J0> Ah0 = values(c.Ah), Av0 = values(c.Av);
    double worst = 0.0, worst_half = 0.0;
    for (int i = 0; i < n; ++i)
      for (int u = 0; u < n; ++u)
        for (int m = 0; m < n; ++m) {
          double eh = 0.0, ev = 0.0;
          for (int b = 0; b < n; ++b) {
            eh += Ah0(i, b) * tc.Lam(u, m, b);
            ev += Av0(i, b) * tc.Tv(u, m, b);
          }
          worst = std::max(worst, std::fabs(du_h(i, u, m) - eh));
          worst = std::max(worst, std::fabs(du_v(i, u, m) - ev));
          worst_half =
              std::max(worst_half, std::fabs(sy_h(i, u, m) - 0.5 * du_h(i, u, m)));
          worst_half =
              std::max(worst_half, std::fabs(sy_v(i, u, m) - 0.5 * du_v(i, u, m)));
        }
    r["dual_frame_derivative"] = worst;
    r["symmetric_frame_derivative_half"] = worst_half;
  }

  return r;
}

}  // namespace eaplab
