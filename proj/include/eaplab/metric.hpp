#pragma once

/**
 * @file metric.hpp
 * @brief Metric blocks induced by the frame and the natural metric
 *        connection.
 *
 * The lowered frame blocks are orthonormal coframes for the induced metric:
 * g_h(alpha, beta) = sum_i Bh(i, alpha) Bh(i, beta) and likewise vertically,
 * with inverses given by the raised blocks.  The natural connection is the
 * unique metric-compatible one with symmetric hh and vvv blocks.
 */

#include "eaplab/calculus.hpp"

namespace eaplab {

struct HvMetric {
  Nd<double> g_h, g_v, g_h_inv, g_v_inv;
};

inline HvMetric metric_from_frame(const Space& sp, const SpacePoint& p) {
  FrameCtx<J0> c = make_ctx<J0>(sp, p);
  return {c.gh, c.gv, c.ghi, c.gvi};
}

/// Natural metric connection from its closed form.
template <class T>
ConnectionCoefficients<T> natural_connection(const FrameCtx<Dual<T>>& c) {
  int n = c.n;
  Nd<T> nv = values(c.N);
  Nd<T> gh = values(c.gh), gv = values(c.gv);
  Nd<T> ghi = values(c.ghi), gvi = values(c.gvi);
  Nd<T> dgh = delta_all(c.gh, nv, n);    // [alpha][beta][mu]
  Nd<T> vgh = vpartial_all(c.gh, n);     // [alpha][beta][c]
  Nd<T> dgv = delta_all(c.gv, nv, n);    // [a][b][mu]
  Nd<T> vgv = vpartial_all(c.gv, n);     // [a][b][c]
  Nd<T> dN = vpartial_all(c.N, n);       // [a][mu][b] = vdot_b N(a, mu)

  ConnectionCoefficients<T> D;
  D.G_hh = Nd<T>(std::vector<int>{n, n, n});
  D.G_vv_h = Nd<T>(std::vector<int>{n, n, n});
  D.C_hh_v = Nd<T>(std::vector<int>{n, n, n});
  D.C_vv_v = Nd<T>(std::vector<int>{n, n, n});

  for (int al = 0; al < n; ++al)
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        T acc{};
        for (int ep = 0; ep < n; ++ep)
          acc += 0.5 * (ghi(al, ep) *
                        (dgh(ep, nu, mu) + dgh(ep, mu, nu) - dgh(mu, nu, ep)));
        D.G_hh(al, mu, nu) = acc;
      }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int nu = 0; nu < n; ++nu) {
        T acc = dN(a, nu, b);
        for (int cc = 0; cc < n; ++cc) {
          T par = dgv(b, cc, nu);
          for (int d = 0; d < n; ++d)
            par -= gv(d, cc) * dN(d, nu, b) + gv(b, d) * dN(d, nu, cc);
          acc += 0.5 * (gvi(a, cc) * par);
        }
        D.G_vv_h(a, b, nu) = acc;
      }

  for (int al = 0; al < n; ++al)
    for (int mu = 0; mu < n; ++mu)
      for (int cc = 0; cc < n; ++cc) {
        T acc{};
        for (int ep = 0; ep < n; ++ep)
          acc += 0.5 * (ghi(al, ep) * vgh(mu, ep, cc));
        D.C_hh_v(al, mu, cc) = acc;
      }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc) {
        T acc{};
        for (int d = 0; d < n; ++d)
          acc += 0.5 * (gvi(a, d) * (vgv(d, cc, b) + vgv(d, b, cc) - vgv(b, cc, d)));
        D.C_vv_v(a, b, cc) = acc;
      }
  return D;
}

inline ConnectionCoefficients<double> natural_connection(const Space& sp,
                                                         const SpacePoint& p) {
  FrameCtx<J1> c = make_ctx<J1>(sp, p);
  return natural_connection(c);
}

/// The same coefficients recovered through the frame: contracting the
/// lowered frame's adapted derivative minus its own covariant derivative
/// reproduces each block.  Exercises the kernel against the closed form.
template <class T>
ConnectionCoefficients<T> natural_connection_via_lambda(
    const FrameCtx<Dual<T>>& c) {
  int n = c.n;
  Nd<T> nv = values(c.N);
  ConnectionCoefficients<T> nat = natural_connection(c);
  Nd<T> Ah = values(c.Ah), Av = values(c.Av);

  Nd<T> dBh = delta_all(c.Bh, nv, n);
  Nd<T> oBh = h_covariant_derivative(c.Bh, {slot_h_low()}, 1, nat, nv, n);
  Nd<T> dBv = delta_all(c.Bv, nv, n);
  Nd<T> oBv = h_covariant_derivative(c.Bv, {slot_v_low()}, 1, nat, nv, n);
  Nd<T> vBh = vpartial_all(c.Bh, n);
  Nd<T> wBh = v_covariant_derivative(c.Bh, {slot_h_low()}, 1, nat, nv, n);
  Nd<T> vBv = vpartial_all(c.Bv, n);
  Nd<T> wBv = v_covariant_derivative(c.Bv, {slot_v_low()}, 1, nat, nv, n);

  ConnectionCoefficients<T> D;
  D.G_hh = Nd<T>(std::vector<int>{n, n, n});
  D.G_vv_h = Nd<T>(std::vector<int>{n, n, n});
  D.C_hh_v = Nd<T>(std::vector<int>{n, n, n});
  D.C_vv_v = Nd<T>(std::vector<int>{n, n, n});
  for (int u = 0; u < n; ++u)
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < n; ++m) {
        T a1{}, a2{}, a3{}, a4{};
        for (int i = 0; i < n; ++i) {
          a1 += Ah(i, u) * (dBh(i, s, m) - oBh(i, s, m));
          a2 += Av(i, u) * (dBv(i, s, m) - oBv(i, s, m));
          a3 += Ah(i, u) * (vBh(i, s, m) - wBh(i, s, m));
          a4 += Av(i, u) * (vBv(i, s, m) - wBv(i, s, m));
        }
        D.G_hh(u, s, m) = a1;
        D.G_vv_h(u, s, m) = a2;
        D.C_hh_v(u, s, m) = a3;
        D.C_vv_v(u, s, m) = a4;
      }
  return D;
}

/// Covariant derivatives of the four metric blocks under a connection.
struct MetricityBlocks {
  Nd<double> hh_h;  // g_h(alpha, beta) | mu
  Nd<double> hh_v;  // g_h(alpha, beta) || c
  Nd<double> vv_h;  // g_v(a, b) | mu
  Nd<double> vv_v;  // g_v(a, b) || c
};

inline MetricityBlocks metricity_blocks(const FrameCtx<J1>& c,
                                        const ConnectionCoefficients<J0>& D) {
  Nd<J0> nv = values(c.N);
  Signature hh{slot_h_low(), slot_h_low()};
  Signature vv{slot_v_low(), slot_v_low()};
  MetricityBlocks r;
  r.hh_h = h_covariant_derivative(c.gh, hh, 0, D, nv, c.n);
  r.hh_v = v_covariant_derivative(c.gh, hh, 0, D, nv, c.n);
  r.vv_h = h_covariant_derivative(c.gv, vv, 0, D, nv, c.n);
  r.vv_v = v_covariant_derivative(c.gv, vv, 0, D, nv, c.n);
  return r;
}

inline double metricity_residual(const FrameCtx<J1>& c,
                                 const ConnectionCoefficients<J0>& D) {
  MetricityBlocks b = metricity_blocks(c, D);
  return std::max(std::max(max_abs(b.hh_h), max_abs(b.hh_v)),
                  std::max(max_abs(b.vv_h), max_abs(b.vv_v)));
}

}  // namespace eaplab
