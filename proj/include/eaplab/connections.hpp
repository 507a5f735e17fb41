#pragma once

/**
 * @file connections.hpp
 * @brief The canonical connection of the parallelization, its dual and
 *        symmetric variants, torsion and contortion bundles.
 */

#include <map>
#include <string>

#include "eaplab/metric.hpp"

namespace eaplab {

enum class ConnTag { canonical, natural, dual, symmetric };

inline const char* to_string(ConnTag t) {
  switch (t) {
    case ConnTag::canonical: return "canonical";
    case ConnTag::natural: return "natural";
    case ConnTag::dual: return "dual";
    case ConnTag::symmetric: return "symmetric";
  }
  return "?";
}

inline ConnTag parse_conn_tag(const std::string& s) {
  if (s == "canonical") return ConnTag::canonical;
  if (s == "natural") return ConnTag::natural;
  if (s == "dual") return ConnTag::dual;
  if (s == "symmetric") return ConnTag::symmetric;
  throw UnknownConnectionTag("unknown connection tag '" + s + "'");
}

/// Canonical connection: each block parallelizes the corresponding frame
/// block, e.g. G_hh(alpha, mu, nu) = sum_i Ah(i, alpha) delta_nu Bh(i, mu).
template <class T>
ConnectionCoefficients<T> canonical_connection(const FrameCtx<Dual<T>>& c) {
  int n = c.n;
  Nd<T> nv = values(c.N);
  Nd<T> Ah = values(c.Ah), Av = values(c.Av);
  Nd<T> dBh = delta_all(c.Bh, nv, n);
  Nd<T> dBv = delta_all(c.Bv, nv, n);
  Nd<T> vBh = vpartial_all(c.Bh, n);
  Nd<T> vBv = vpartial_all(c.Bv, n);
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
          a1 += Ah(i, u) * dBh(i, s, m);
          a2 += Av(i, u) * dBv(i, s, m);
          a3 += Ah(i, u) * vBh(i, s, m);
          a4 += Av(i, u) * vBv(i, s, m);
        }
        D.G_hh(u, s, m) = a1;
        D.G_vv_h(u, s, m) = a2;
        D.C_hh_v(u, s, m) = a3;
        D.C_vv_v(u, s, m) = a4;
      }
  return D;
}

template <class S>
ConnectionCoefficients<S> dual_connection(const ConnectionCoefficients<S>& D) {
  ConnectionCoefficients<S> r = D;
  r.G_hh = transpose_last2(D.G_hh);
  // G_vv_h and C_hh_v unchanged.
  r.C_vv_v = transpose_last2(D.C_vv_v);
  return r;
}

template <class S>
ConnectionCoefficients<S> symmetric_connection(
    const ConnectionCoefficients<S>& D) {
  ConnectionCoefficients<S> r = D;
  r.G_hh = scaled(D.G_hh + transpose_last2(D.G_hh), 0.5);
  r.C_vv_v = scaled(D.C_vv_v + transpose_last2(D.C_vv_v), 0.5);
  return r;
}

template <class T>
ConnectionCoefficients<T> connection(ConnTag tag, const FrameCtx<Dual<T>>& c) {
  switch (tag) {
    case ConnTag::canonical: return canonical_connection(c);
    case ConnTag::natural: return natural_connection(c);
    case ConnTag::dual: return dual_connection(canonical_connection(c));
    case ConnTag::symmetric:
      return symmetric_connection(canonical_connection(c));
  }
  throw UnknownConnectionTag("bad tag");
}

/// Torsion blocks of a connection.  Rnl is the curvature of the nonlinear
/// connection (independent of the linear connection); P couples the fiber
/// derivative of N with the vv_h block.
template <class S>
struct TorsionBundleT {
  Nd<S> Lam;  // [alpha][mu][nu]
  Nd<S> Rnl;  // [a][mu][nu]
  Nd<S> Chv;  // [alpha][mu][c]
  Nd<S> P;    // [a][mu][c]
  Nd<S> Tv;   // [a][b][c]
};
using TorsionBundle = TorsionBundleT<double>;

template <class T>
TorsionBundleT<T> values(const TorsionBundleT<Dual<T>>& t) {
  return {values(t.Lam), values(t.Rnl), values(t.Chv), values(t.P),
          values(t.Tv)};
}

template <class T>
TorsionBundleT<T> torsion(const ConnectionCoefficients<T>& D,
                          const FrameCtx<Dual<T>>& c) {
  int n = c.n;
  TorsionBundleT<T> t;
  t.Lam = D.G_hh - transpose_last2(D.G_hh);
  t.Rnl = nlc_curvature(c);
  t.Chv = D.C_hh_v;
  t.Tv = D.C_vv_v - transpose_last2(D.C_vv_v);
  Nd<T> dN = vpartial_all(c.N, n);  // [a][mu][b]
  t.P = Nd<T>(std::vector<int>{n, n, n});
  for (int a = 0; a < n; ++a)
    for (int mu = 0; mu < n; ++mu)
      for (int b = 0; b < n; ++b)
        t.P(a, mu, b) = dN(a, mu, b) - D.G_vv_h(a, b, mu);
  return t;
}

/// Contortion: difference of the canonical from the natural connection,
/// computed through the frame's natural covariant derivatives.
template <class S>
struct ContortionBundleT {
  Nd<S> g_hh;    // [alpha][mu][nu]
  Nd<S> g_vv_h;  // [a][b][mu]
  Nd<S> g_hh_v;  // [alpha][mu][c]
  Nd<S> g_vv_v;  // [a][b][c]
};
using ContortionBundle = ContortionBundleT<double>;

template <class T>
ContortionBundleT<T> values(const ContortionBundleT<Dual<T>>& g) {
  return {values(g.g_hh), values(g.g_vv_h), values(g.g_hh_v),
          values(g.g_vv_v)};
}

template <class T>
ContortionBundleT<T> contortion(const FrameCtx<Dual<T>>& c) {
  int n = c.n;
  Nd<T> nv = values(c.N);
  ConnectionCoefficients<T> nat = natural_connection(c);
  Nd<T> Ah = values(c.Ah), Av = values(c.Av);
  Nd<T> oBh = h_covariant_derivative(c.Bh, {slot_h_low()}, 1, nat, nv, n);
  Nd<T> oBv = h_covariant_derivative(c.Bv, {slot_v_low()}, 1, nat, nv, n);
  Nd<T> wBh = v_covariant_derivative(c.Bh, {slot_h_low()}, 1, nat, nv, n);
  Nd<T> wBv = v_covariant_derivative(c.Bv, {slot_v_low()}, 1, nat, nv, n);
  ContortionBundleT<T> g;
  g.g_hh = Nd<T>(std::vector<int>{n, n, n});
  g.g_vv_h = Nd<T>(std::vector<int>{n, n, n});
  g.g_hh_v = Nd<T>(std::vector<int>{n, n, n});
  g.g_vv_v = Nd<T>(std::vector<int>{n, n, n});
  for (int u = 0; u < n; ++u)
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < n; ++m) {
        T a1{}, a2{}, a3{}, a4{};
        for (int i = 0; i < n; ++i) {
          a1 += Ah(i, u) * oBh(i, s, m);
          a2 += Av(i, u) * oBv(i, s, m);
          a3 += Ah(i, u) * wBh(i, s, m);
          a4 += Av(i, u) * wBv(i, s, m);
        }
        g.g_hh(u, s, m) = a1;
        g.g_vv_h(u, s, m) = a2;
        g.g_hh_v(u, s, m) = a3;
        g.g_vv_v(u, s, m) = a4;
      }
  return g;
}

/// Blockwise difference canonical minus natural; equals `contortion`.
template <class T>
ContortionBundleT<T> contortion_via_difference(const FrameCtx<Dual<T>>& c) {
  ConnectionCoefficients<T> can = canonical_connection(c);
  ConnectionCoefficients<T> nat = natural_connection(c);
  return {can.G_hh - nat.G_hh, can.G_vv_h - nat.G_vv_h,
          can.C_hh_v - nat.C_hh_v, can.C_vv_v - nat.C_vv_v};
}

/// Canonical connection reassembled as natural plus contortion.
template <class T>
ConnectionCoefficients<T> canonical_via_contortion(const FrameCtx<Dual<T>>& c) {
  ConnectionCoefficients<T> nat = natural_connection(c);
  ContortionBundleT<T> g = contortion(c);
  return {nat.G_hh + g.g_hh, nat.G_vv_h + g.g_vv_h, nat.C_hh_v + g.g_hh_v,
          nat.C_vv_v + g.g_vv_v};
}

/// Mixed hh and vvv contortion blocks rebuilt from torsion alone
/// (the cyclic half-sum of the lowered torsion, raised back).
inline ContortionBundle contortion_from_torsion(const TorsionBundle& t,
                                                const HvMetric& g) {
  int n = t.Lam.shape()[0];
  ContortionBundle out;
  out.g_hh = Nd<double>(std::vector<int>{n, n, n});
  out.g_vv_v = Nd<double>(std::vector<int>{n, n, n});
  Nd<double> lam_low(std::vector<int>{n, n, n});  // [alpha][mu][nu], lowered
  Nd<double> tv_low(std::vector<int>{n, n, n});
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m)
      for (int v = 0; v < n; ++v) {
        double l = 0.0, tl = 0.0;
        for (int e = 0; e < n; ++e) {
          l += g.g_h(a, e) * t.Lam(e, m, v);
          tl += g.g_v(a, e) * t.Tv(e, m, v);
        }
        lam_low(a, m, v) = l;
        tv_low(a, m, v) = tl;
      }
  Nd<double> ghh_low(std::vector<int>{n, n, n});
  Nd<double> gvv_low(std::vector<int>{n, n, n});
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m)
      for (int v = 0; v < n; ++v) {
        ghh_low(a, m, v) = 0.5 * (lam_low(a, m, v) + lam_low(v, m, a) +
                                  lam_low(m, v, a));
        gvv_low(a, m, v) = 0.5 * (tv_low(a, m, v) + tv_low(v, m, a) +
                                  tv_low(m, v, a));
      }
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m)
      for (int v = 0; v < n; ++v) {
        double s1 = 0.0, s2 = 0.0;
        for (int e = 0; e < n; ++e) {
          s1 += g.g_h_inv(a, e) * ghh_low(e, m, v);
          s2 += g.g_v_inv(a, e) * gvv_low(e, m, v);
        }
        out.g_hh(a, m, v) = s1;
        out.g_vv_v(a, m, v) = s2;
      }
  return out;
}

/// Torsion traces: C_h(mu) = Lam(alpha, mu, alpha), C_v(b) = Tv(a, b, a).
template <class S>
struct BasicVectorT {
  Nd<S> C_h;
  Nd<S> C_v;
};
using BasicVector = BasicVectorT<double>;

template <class S>
BasicVectorT<S> basic_vector(const TorsionBundleT<S>& t) {
  int n = t.Lam.shape()[0];
  BasicVectorT<S> b;
  b.C_h = Nd<S>(std::vector<int>{n});
  b.C_v = Nd<S>(std::vector<int>{n});
  for (int m = 0; m < n; ++m) {
    S ch{}, cv{};
    for (int a = 0; a < n; ++a) {
      ch += t.Lam(a, m, a);
      cv += t.Tv(a, m, a);
    }
    b.C_h(m) = ch;
    b.C_v(m) = cv;
  }
  return b;
}

/// Residuals of the torsion/contortion interrelations at one point:
/// the skew and trace invariants of the lowered contortion, the blockwise
/// relations between torsion and contortion, the torsion-only contortion
/// reconstruction, and the frame-derivative identities for the dual and
/// symmetric connections.
std::map<std::string, double> torsion_contortion_relations(const Space& sp,
                                                           const SpacePoint& p);

}  // namespace eaplab
