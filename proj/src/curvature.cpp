#include "eaplab/curvature.hpp"

#include <cmath>

namespace eaplab {

namespace {

Nd<double> nd2(int n) { return Nd<double>(std::vector<int>{n, n}); }
Nd<double> nd4(int n) { return Nd<double>(std::vector<int>{n, n, n, n}); }

const Signature kSigHHH{slot_h_up(), slot_h_low(), slot_h_low()};
const Signature kSigVVH{slot_v_up(), slot_v_low(), slot_h_low()};
const Signature kSigHHV{slot_h_up(), slot_h_low(), slot_v_low()};
const Signature kSigVVV{slot_v_up(), slot_v_low(), slot_v_low()};

// Shared canonical-connection scaffolding for the closed-form routes.
struct CanonicalKit {
  int n;
  ConnectionCoefficients<J1> D1;
  ConnectionCoefficients<J0> D0;
  Nd<J1> nv1;
  Nd<J0> nv0;
  TorsionBundleT<J1> t1;
  TorsionBundle t0;
  BasicVectorT<J1> bv1;
  Nd<J0> bvh0, bvv0;
};

CanonicalKit make_kit(const FrameCtx<J2>& c) {
  CanonicalKit k;
  k.n = c.n;
  k.D1 = canonical_connection(c);
  k.D0 = values(k.D1);
  k.nv1 = values(c.N);
  k.nv0 = values(k.nv1);
  k.t1 = torsion(k.D1, c);
  k.t0 = values(k.t1);
  k.bv1 = basic_vector(k.t1);
  k.bvh0 = values(k.bv1.C_h);
  k.bvv0 = values(k.bv1.C_v);
  return k;
}

// Trace of the h- or v-divergence of a raised vector field: V^mu_{|mu}.
double divergence(const Nd<J1>& vec, Deriv dir, bool vertical_slot,
                  const CanonicalKit& k) {
  Signature sig{vertical_slot ? slot_v_up() : slot_h_up()};
  Nd<double> d = covariant_derivative(vec, sig, 0, dir, k.D0, k.nv0, k.n);
  double s = 0.0;
  for (int m = 0; m < k.n; ++m) s += d(m, m);
  return s;
}

}  // namespace

CurvatureBundle curvature_direct(ConnTag tag, const FrameCtx<J2>& c) {
  const int n = c.n;
  ConnectionCoefficients<J1> D1 = connection(tag, c);
  ConnectionCoefficients<J0> D0 = values(D1);
  Nd<J1> nv1 = values(c.N);
  Nd<J0> nv0 = values(nv1);
  TorsionBundleT<J1> t1 = torsion(D1, c);
  TorsionBundle t0 = values(t1);

  Nd<double> dG_hh = delta_all(D1.G_hh, nv0, n);
  Nd<double> dG_vv = delta_all(D1.G_vv_h, nv0, n);
  Nd<double> vG_hh = vpartial_all(D1.G_hh, n);
  Nd<double> vG_vv = vpartial_all(D1.G_vv_h, n);
  Nd<double> vC_h = vpartial_all(D1.C_hh_v, n);
  Nd<double> vC_v = vpartial_all(D1.C_vv_v, n);
  Nd<double> Chb = h_covariant_derivative(D1.C_hh_v, kSigHHV, 0, D0, nv0, n);
  Nd<double> Cvb = h_covariant_derivative(D1.C_vv_v, kSigVVV, 0, D0, nv0, n);

  CurvatureBundle K{nd4(n), nd4(n), nd4(n), nd4(n), nd4(n), nd4(n)};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int s3 = 0; s3 < n; ++s3)
        for (int s4 = 0; s4 < n; ++s4) {
          double rh = dG_hh(a, b, s4, s3) - dG_hh(a, b, s3, s4);
          double rv = dG_vv(a, b, s4, s3) - dG_vv(a, b, s3, s4);
          for (int e = 0; e < n; ++e) {
            rh += D0.G_hh(e, b, s4) * D0.G_hh(a, e, s3) -
                  D0.G_hh(e, b, s3) * D0.G_hh(a, e, s4);
            rv += D0.G_vv_h(e, b, s4) * D0.G_vv_h(a, e, s3) -
                  D0.G_vv_h(e, b, s3) * D0.G_vv_h(a, e, s4);
          }
          for (int d = 0; d < n; ++d) {
            rh += D0.C_hh_v(a, b, d) * t0.Rnl(d, s4, s3);
            rv += D0.C_vv_v(a, b, d) * t0.Rnl(d, s4, s3);
          }
          K.R_hh(a, b, s3, s4) = rh;
          K.R_vh(a, b, s3, s4) = rv;

          double ph = vG_hh(a, b, s3, s4) - Chb(a, b, s4, s3);
          double pv = vG_vv(a, b, s3, s4) - Cvb(a, b, s4, s3);
          for (int d = 0; d < n; ++d) {
            ph += D0.C_hh_v(a, b, d) * t0.P(d, s3, s4);
            pv += D0.C_vv_v(a, b, d) * t0.P(d, s3, s4);
          }
          K.P_h(a, b, s3, s4) = ph;
          K.P_v(a, b, s3, s4) = pv;

          double sh = vC_h(a, b, s4, s3) - vC_h(a, b, s3, s4);
          double sv = vC_v(a, b, s4, s3) - vC_v(a, b, s3, s4);
          for (int e = 0; e < n; ++e) {
            sh += D0.C_hh_v(e, b, s4) * D0.C_hh_v(a, e, s3) -
                  D0.C_hh_v(e, b, s3) * D0.C_hh_v(a, e, s4);
            sv += D0.C_vv_v(e, b, s4) * D0.C_vv_v(a, e, s3) -
                  D0.C_vv_v(e, b, s3) * D0.C_vv_v(a, e, s4);
          }
          K.S_h(a, b, s3, s4) = sh;
          K.S_v(a, b, s3, s4) = sv;
        }
  return K;
}

CurvatureBundle curvature_direct(ConnTag tag, const Space& sp,
                                 const SpacePoint& p) {
  FrameCtx<J2> c = make_ctx<J2>(sp, p);
  return curvature_direct(tag, c);
}

CurvatureBundle natural_curvature_formula(const FrameCtx<J2>& c) {
  const int n = c.n;
  CanonicalKit k = make_kit(c);
  ContortionBundleT<J1> g1 = contortion(c);
  ContortionBundle g0 = values(g1);

  Nd<double> ghh_h =
      h_covariant_derivative(g1.g_hh, kSigHHH, 0, k.D0, k.nv0, n);
  Nd<double> gvvh_h =
      h_covariant_derivative(g1.g_vv_h, kSigVVH, 0, k.D0, k.nv0, n);
  Nd<double> ghhv_h =
      h_covariant_derivative(g1.g_hh_v, kSigHHV, 0, k.D0, k.nv0, n);
  Nd<double> gvvv_h =
      h_covariant_derivative(g1.g_vv_v, kSigVVV, 0, k.D0, k.nv0, n);
  Nd<double> ghh_v =
      v_covariant_derivative(g1.g_hh, kSigHHH, 0, k.D0, k.nv0, n);
  Nd<double> gvvh_v =
      v_covariant_derivative(g1.g_vv_h, kSigVVH, 0, k.D0, k.nv0, n);
  Nd<double> ghhv_v =
      v_covariant_derivative(g1.g_hh_v, kSigHHV, 0, k.D0, k.nv0, n);
  Nd<double> gvvv_v =
      v_covariant_derivative(g1.g_vv_v, kSigVVV, 0, k.D0, k.nv0, n);

  CurvatureBundle K{nd4(n), nd4(n), nd4(n), nd4(n), nd4(n), nd4(n)};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int s3 = 0; s3 < n; ++s3)
        for (int s4 = 0; s4 < n; ++s4) {
          double rh = ghh_h(a, b, s3, s4) - ghh_h(a, b, s4, s3);
          double rv = gvvh_h(a, b, s3, s4) - gvvh_h(a, b, s4, s3);
          for (int e = 0; e < n; ++e) {
            rh += g0.g_hh(e, b, s4) * g0.g_hh(a, e, s3) -
                  g0.g_hh(e, b, s3) * g0.g_hh(a, e, s4);
            rh -= g0.g_hh(a, b, e) * k.t0.Lam(e, s4, s3);
            rv += g0.g_vv_h(e, b, s4) * g0.g_vv_h(a, e, s3) -
                  g0.g_vv_h(e, b, s3) * g0.g_vv_h(a, e, s4);
            rv -= g0.g_vv_h(a, b, e) * k.t0.Lam(e, s4, s3);
            rh -= g0.g_hh_v(a, b, e) * k.t0.Rnl(e, s4, s3);
            rv -= g0.g_vv_v(a, b, e) * k.t0.Rnl(e, s4, s3);
          }
          K.R_hh(a, b, s3, s4) = rh;
          K.R_vh(a, b, s3, s4) = rv;

          double ph = ghhv_h(a, b, s4, s3) - ghh_v(a, b, s3, s4);
          double pv = gvvv_h(a, b, s4, s3) - gvvh_v(a, b, s3, s4);
          for (int e = 0; e < n; ++e) {
            ph += g0.g_hh(e, b, s3) * g0.g_hh_v(a, e, s4) -
                  g0.g_hh_v(e, b, s4) * g0.g_hh(a, e, s3);
            ph -= g0.g_hh(a, b, e) * k.t0.Chv(e, s3, s4);
            ph -= g0.g_hh_v(a, b, e) * k.t0.P(e, s3, s4);
            pv += g0.g_vv_h(e, b, s3) * g0.g_vv_v(a, e, s4) -
                  g0.g_vv_v(e, b, s4) * g0.g_vv_h(a, e, s3);
            pv -= g0.g_vv_h(a, b, e) * k.t0.Chv(e, s3, s4);
            pv -= g0.g_vv_v(a, b, e) * k.t0.P(e, s3, s4);
          }
          K.P_h(a, b, s3, s4) = ph;
          K.P_v(a, b, s3, s4) = pv;

          double sh = ghhv_v(a, b, s3, s4) - ghhv_v(a, b, s4, s3);
          double sv = gvvv_v(a, b, s3, s4) - gvvv_v(a, b, s4, s3);
          for (int e = 0; e < n; ++e) {
            sh += g0.g_hh_v(e, b, s4) * g0.g_hh_v(a, e, s3) -
                  g0.g_hh_v(e, b, s3) * g0.g_hh_v(a, e, s4);
            sh -= g0.g_hh_v(a, b, e) * k.t0.Tv(e, s4, s3);
            sv += g0.g_vv_v(e, b, s4) * g0.g_vv_v(a, e, s3) -
                  g0.g_vv_v(e, b, s3) * g0.g_vv_v(a, e, s4);
            sv -= g0.g_vv_v(a, b, e) * k.t0.Tv(e, s4, s3);
          }
          K.S_h(a, b, s3, s4) = sh;
          K.S_v(a, b, s3, s4) = sv;
        }
  return K;
}

CurvatureBundle dual_curvature_formula(const FrameCtx<J2>& c) {
  const int n = c.n;
  CanonicalKit k = make_kit(c);
  Nd<double> lam_h =
      h_covariant_derivative(k.t1.Lam, kSigHHH, 0, k.D0, k.nv0, n);
  Nd<double> lam_v =
      v_covariant_derivative(k.t1.Lam, kSigHHH, 0, k.D0, k.nv0, n);
  Nd<double> tv_h =
      h_covariant_derivative(k.t1.Tv, kSigVVV, 0, k.D0, k.nv0, n);
  Nd<double> tv_v =
      v_covariant_derivative(k.t1.Tv, kSigVVV, 0, k.D0, k.nv0, n);

  CurvatureBundle K{nd4(n), nd4(n), nd4(n), nd4(n), nd4(n), nd4(n)};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int s3 = 0; s3 < n; ++s3)
        for (int s4 = 0; s4 < n; ++s4) {
          double rh = lam_h(a, s4, s3, b);
          double rv = 0.0;
          for (int d = 0; d < n; ++d) {
            rh += k.D0.C_hh_v(a, b, d) * k.t0.Rnl(d, s4, s3) +
                  k.D0.C_hh_v(a, s4, d) * k.t0.Rnl(d, s3, b) +
                  k.D0.C_hh_v(a, s3, d) * k.t0.Rnl(d, b, s4);
            rv += k.t0.Rnl(d, s4, s3) * k.t0.Tv(a, d, b);
          }
          K.R_hh(a, b, s3, s4) = rh;
          K.R_vh(a, b, s3, s4) = rv;

          double ph = lam_v(a, s3, b, s4);
          double pv = tv_h(a, b, s4, s3);
          for (int d = 0; d < n; ++d) {
            ph += k.t0.Lam(a, d, b) * k.D0.C_hh_v(d, s3, s4);
            pv += k.t0.Tv(a, d, b) * k.t0.P(d, s3, s4);
          }
          K.P_h(a, b, s3, s4) = ph;
          K.P_v(a, b, s3, s4) = pv;

          K.S_v(a, b, s3, s4) = tv_v(a, s4, s3, b);
        }
  return K;
}

CurvatureBundle symmetric_curvature_formula(const FrameCtx<J2>& c) {
  const int n = c.n;
  CanonicalKit k = make_kit(c);
  CurvatureBundle K = dual_curvature_formula(c);
  K.R_vh = scaled(K.R_vh, 0.5);
  K.P_h = scaled(K.P_h, 0.5);
  K.P_v = scaled(K.P_v, 0.5);

  Nd<double> lam_h =
      h_covariant_derivative(k.t1.Lam, kSigHHH, 0, k.D0, k.nv0, n);
  Nd<double> tv_v =
      v_covariant_derivative(k.t1.Tv, kSigVVV, 0, k.D0, k.nv0, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int s3 = 0; s3 < n; ++s3)
        for (int s4 = 0; s4 < n; ++s4) {
          double rh = 0.5 * (lam_h(a, b, s3, s4) - lam_h(a, b, s4, s3));
          double sv = 0.5 * (tv_v(a, b, s3, s4) - tv_v(a, b, s4, s3));
          for (int e = 0; e < n; ++e) {
            rh += 0.25 * (k.t0.Lam(e, b, s3) * k.t0.Lam(a, s4, e) -
                          k.t0.Lam(e, b, s4) * k.t0.Lam(a, s3, e));
            rh += 0.5 * k.t0.Lam(e, s3, s4) * k.t0.Lam(a, b, e);
            sv += 0.25 * (k.t0.Tv(e, b, s3) * k.t0.Tv(a, s4, e) -
                          k.t0.Tv(e, b, s4) * k.t0.Tv(a, s3, e));
            sv += 0.5 * k.t0.Tv(e, s4, s3) * k.t0.Tv(a, e, b);
          }
          K.R_hh(a, b, s3, s4) = rh;
          K.S_v(a, b, s3, s4) = sv;
        }
  return K;
}

CurvatureContractions contract(const CurvatureBundle& k, const HvMetric& g) {
  const int n = k.R_hh.shape()[0];
  CurvatureContractions out{nd2(n), nd2(n), nd2(n), nd2(n), 0.0, 0.0};
  for (int b = 0; b < n; ++b)
    for (int m = 0; m < n; ++m) {
      double ric = 0.0, ph = 0.0, pv = 0.0, sv = 0.0;
      for (int a = 0; a < n; ++a) {
        ric += k.R_hh(a, b, m, a);
        ph -= k.P_h(a, b, a, m);
        pv += k.P_v(a, b, m, a);
        sv += k.S_v(a, b, m, a);
      }
      out.ric_h(b, m) = ric;
      out.p_h(b, m) = ph;
      out.p_v(b, m) = pv;
      out.s_v(b, m) = sv;
      out.r_scalar += g.g_h_inv(b, m) * ric;
      out.s_scalar += g.g_v_inv(b, m) * sv;
    }
  return out;
}

CurvatureContractions natural_contraction_formula(const FrameCtx<J2>& c) {
  const int n = c.n;
  CanonicalKit k = make_kit(c);
  ContortionBundleT<J1> g1 = contortion(c);
  ContortionBundle g0 = values(g1);
  Nd<J1> ghi1 = values(c.ghi);
  Nd<J1> gvi1 = values(c.gvi);
  Nd<J0> ghi0 = values(ghi1);
  Nd<J0> gvi0 = values(gvi1);

  Nd<double> ghh_h =
      h_covariant_derivative(g1.g_hh, kSigHHH, 0, k.D0, k.nv0, n);
  Nd<double> ghhv_h =
      h_covariant_derivative(g1.g_hh_v, kSigHHV, 0, k.D0, k.nv0, n);
  Nd<double> gvvh_v =
      v_covariant_derivative(g1.g_vv_h, kSigVVH, 0, k.D0, k.nv0, n);
  Nd<double> gvvv_v =
      v_covariant_derivative(g1.g_vv_v, kSigVVV, 0, k.D0, k.nv0, n);
  Nd<double> cb_h = h_covariant_derivative(k.bv1.C_h, {slot_h_low()}, 0,
                                           k.D0, k.nv0, n);
  Nd<double> cb_v = v_covariant_derivative(k.bv1.C_h, {slot_h_low()}, 0,
                                           k.D0, k.nv0, n);
  Nd<double> cvb_h = h_covariant_derivative(k.bv1.C_v, {slot_v_low()}, 0,
                                            k.D0, k.nv0, n);
  Nd<double> cvb_v = v_covariant_derivative(k.bv1.C_v, {slot_v_low()}, 0,
                                            k.D0, k.nv0, n);

  CurvatureContractions out{nd2(n), nd2(n), nd2(n), nd2(n), 0.0, 0.0};
  for (int b = 0; b < n; ++b)
    for (int m = 0; m < n; ++m) {
      double ric = -cb_h(b, m);
      double ph = cb_v(b, m);
      double pv = cvb_h(b, m);
      double sv = -cvb_v(b, m);
      for (int a = 0; a < n; ++a) {
        ric += ghh_h(a, b, m, a) - k.bvh0(a) * g0.g_hh(a, b, m);
        ph += -ghhv_h(a, b, m, a) + k.bvh0(a) * g0.g_hh_v(a, b, m);
        pv += -gvvh_v(a, b, m, a) + k.bvv0(a) * g0.g_vv_h(a, b, m);
        sv += gvvv_v(a, b, m, a) - k.bvv0(a) * g0.g_vv_v(a, b, m);
        for (int e = 0; e < n; ++e) {
          ric += g0.g_hh(a, b, e) * g0.g_hh(e, m, a) -
                 g0.g_hh_v(a, b, e) * k.t0.Rnl(e, a, m);
          ph += g0.g_hh(a, b, e) *
                    (k.t0.Chv(e, a, m) - g0.g_hh_v(e, a, m)) +
                g0.g_hh_v(a, b, e) * k.t0.P(e, a, m);
          pv += -g0.g_vv_v(a, b, e) * g0.g_vv_h(e, a, m) -
                g0.g_vv_h(a, b, e) * k.t0.Chv(e, m, a) -
                g0.g_vv_v(e, b, a) * k.t0.P(a, m, e);
          sv += g0.g_vv_v(a, b, e) * g0.g_vv_v(e, m, a);
        }
      }
      out.ric_h(b, m) = ric;
      out.p_h(b, m) = ph;
      out.p_v(b, m) = pv;
      out.s_v(b, m) = sv;
    }

  // Scalars via divergences of the raised symmetrized contortion and basic
  // vectors.
  Nd<J1> omega_h = g1.g_hh + transpose_last2(g1.g_hh);
  Nd<J1> omega_v = g1.g_vv_v + transpose_last2(g1.g_vv_v);
  Nd<J1> vh(std::vector<int>{n}), vv(std::vector<int>{n});
  Nd<J1> cup_h(std::vector<int>{n}), cup_v(std::vector<int>{n});
  for (int a = 0; a < n; ++a) {
    J1 sh{}, sv2{}, ch{}, cv{};
    for (int m = 0; m < n; ++m) {
      ch += ghi1(a, m) * k.bv1.C_h(m);
      cv += gvi1(a, m) * k.bv1.C_v(m);
      for (int b = 0; b < n; ++b) {
        sh += ghi1(m, b) * omega_h(a, b, m);
        sv2 += gvi1(m, b) * omega_v(a, b, m);
      }
    }
    vh(a) = sh;
    vv(a) = sv2;
    cup_h(a) = ch;
    cup_v(a) = cv;
  }
  Nd<J0> vh0 = values(vh), vv0 = values(vv);
  double omega_div_h = divergence(vh, Deriv::H, false, k);
  double omega_div_v = divergence(vv, Deriv::V, true, k);
  double c_div_h = divergence(cup_h, Deriv::H, false, k);
  double c_div_v = divergence(cup_v, Deriv::V, true, k);
  double corr_h = 0.0, corr_v = 0.0;
  for (int a = 0; a < n; ++a) {
    corr_h += k.bvh0(a) * vh0(a);
    corr_v += k.bvv0(a) * vv0(a);
  }
  double quad_h = 0.0, quad_v = 0.0;
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m)
      for (int e = 0; e < n; ++e) {
        double rgh = 0.0, rgv = 0.0, rghv = 0.0;
        for (int b = 0; b < n; ++b) {
          rgh += ghi0(m, b) * g0.g_hh(a, b, e);
          rghv += ghi0(m, b) * g0.g_hh_v(a, b, e);
          rgv += gvi0(m, b) * g0.g_vv_v(a, b, e);
        }
        quad_h += rgh * g0.g_hh(e, m, a) - rghv * k.t0.Rnl(e, a, m);
        quad_v += rgv * g0.g_vv_v(e, m, a);
      }
  out.r_scalar = 0.5 * (omega_div_h - corr_h) - c_div_h + quad_h;
  out.s_scalar = 0.5 * (omega_div_v - corr_v) - c_div_v + quad_v;
  return out;
}

CurvatureContractions dual_contraction_formula(const FrameCtx<J2>& c) {
  const int n = c.n;
  CanonicalKit k = make_kit(c);
  Nd<J1> ghi1 = values(c.ghi);
  Nd<J1> gvi1 = values(c.gvi);

  Nd<double> cb_h = h_covariant_derivative(k.bv1.C_h, {slot_h_low()}, 0,
                                           k.D0, k.nv0, n);
  Nd<double> cb_v = v_covariant_derivative(k.bv1.C_h, {slot_h_low()}, 0,
                                           k.D0, k.nv0, n);
  Nd<double> cvb_h = h_covariant_derivative(k.bv1.C_v, {slot_v_low()}, 0,
                                            k.D0, k.nv0, n);
  Nd<double> cvb_v = v_covariant_derivative(k.bv1.C_v, {slot_v_low()}, 0,
                                            k.D0, k.nv0, n);

  std::vector<double> ctr(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int u = 0; u < n; ++u) ctr[a] += k.D0.C_hh_v(u, u, a);

  CurvatureContractions out{nd2(n), nd2(n), nd2(n), nd2(n), 0.0, 0.0};
  for (int b = 0; b < n; ++b)
    for (int m = 0; m < n; ++m) {
      double ric = -cb_h(m, b);
      double ph = cb_v(b, m);
      double pv = cvb_h(b, m);
      double sv = -cvb_v(m, b);
      for (int a = 0; a < n; ++a) {
        ric += ctr[a] * k.t0.Rnl(a, m, b);
        for (int u = 0; u < n; ++u) {
          ric += k.D0.C_hh_v(u, b, a) * k.t0.Rnl(a, u, m) +
                 k.D0.C_hh_v(u, m, a) * k.t0.Rnl(a, b, u);
          ph += k.t0.Lam(u, b, a) * k.D0.C_hh_v(a, u, m);
          pv += k.t0.Tv(u, a, b) * k.t0.P(a, m, u);
        }
      }
      out.ric_h(b, m) = ric;
      out.p_h(b, m) = ph;
      out.p_v(b, m) = pv;
      out.s_v(b, m) = sv;
    }

  Nd<J1> cup_h(std::vector<int>{n}), cup_v(std::vector<int>{n});
  for (int a = 0; a < n; ++a) {
    J1 ch{}, cv{};
    for (int m = 0; m < n; ++m) {
      ch += ghi1(a, m) * k.bv1.C_h(m);
      cv += gvi1(a, m) * k.bv1.C_v(m);
    }
    cup_h(a) = ch;
    cup_v(a) = cv;
  }
  out.r_scalar = -divergence(cup_h, Deriv::H, false, k);
  out.s_scalar = -divergence(cup_v, Deriv::V, true, k);
  return out;
}

CurvatureContractions symmetric_contraction_formula(const FrameCtx<J2>& c) {
  const int n = c.n;
  CanonicalKit k = make_kit(c);
  Nd<J0> ghi0 = values(values(c.ghi));
  Nd<J0> gvi0 = values(values(c.gvi));

  CurvatureContractions out = dual_contraction_formula(c);
  out.p_h = scaled(out.p_h, 0.5);
  out.p_v = scaled(out.p_v, 0.5);
  for (int b = 0; b < n; ++b)
    for (int m = 0; m < n; ++m) {
      double ric = 0.5 * out.ric_h(b, m);
      double sv = 0.5 * out.s_v(b, m);
      for (int a = 0; a < n; ++a) {
        ric -= 0.25 * k.bvh0(a) * k.t0.Lam(a, m, b);
        sv -= 0.25 * k.bvv0(a) * k.t0.Tv(a, m, b);
        for (int e = 0; e < n; ++e) {
          ric -= 0.25 * k.t0.Lam(a, m, e) * k.t0.Lam(e, a, b);
          sv -= 0.25 * k.t0.Tv(a, m, e) * k.t0.Tv(e, a, b);
        }
      }
      out.ric_h(b, m) = ric;
      out.s_v(b, m) = sv;
    }
  double quad_h = 0.0, quad_v = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < n; ++e) {
        double rlam = 0.0, rtv = 0.0;
        for (int u = 0; u < n; ++u) {
          rlam += ghi0(b, u) * k.t0.Lam(a, u, e);
          rtv += gvi0(b, u) * k.t0.Tv(a, u, e);
        }
        quad_h += rlam * k.t0.Lam(e, a, b);
        quad_v += rtv * k.t0.Tv(e, a, b);
      }
  out.r_scalar = 0.5 * out.r_scalar - 0.25 * quad_h;
  out.s_scalar = 0.5 * out.s_scalar - 0.25 * quad_v;
  return out;
}

std::map<std::string, double> bianchi_residuals(const Space& sp,
                                                const SpacePoint& p) {
  FrameCtx<J2> c = make_ctx<J2>(sp, p);
  const int n = c.n;
  CanonicalKit k = make_kit(c);
  Nd<double> lam_h =
      h_covariant_derivative(k.t1.Lam, kSigHHH, 0, k.D0, k.nv0, n);
  Nd<double> tv_v =
      v_covariant_derivative(k.t1.Tv, kSigVVV, 0, k.D0, k.nv0, n);
  Nd<double> cb_h = h_covariant_derivative(k.bv1.C_h, {slot_h_low()}, 0,
                                           k.D0, k.nv0, n);
  Nd<double> cvb_v = v_covariant_derivative(k.bv1.C_v, {slot_v_low()}, 0,
                                            k.D0, k.nv0, n);

  auto cyc_h = [&](int a, int p1, int q, int r) {
    double s = lam_h(a, p1, q, r);
    for (int e = 0; e < n; ++e) {
      s += k.t0.Lam(e, q, r) * k.t0.Lam(a, p1, e);
      s += k.t0.Rnl(e, p1, q) * k.t0.Chv(a, r, e);
    }
    return s;
  };
  auto cyc_v = [&](int a, int p1, int q, int r) {
    double s = tv_v(a, p1, q, r);
    for (int e = 0; e < n; ++e) s += k.t0.Tv(e, q, r) * k.t0.Tv(a, p1, e);
    return s;
  };

  double fb_h = 0.0, fb_v = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int m = 0; m < n; ++m)
        for (int v = 0; v < n; ++v) {
          fb_h = std::max(std::fabs(cyc_h(a, b, m, v) + cyc_h(a, m, v, b) +
                                    cyc_h(a, v, b, m)),
                          fb_h);
          fb_v = std::max(std::fabs(cyc_v(a, b, m, v) + cyc_v(a, m, v, b) +
                                    cyc_v(a, v, b, m)),
                          fb_v);
        }

  std::vector<double> ctr(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int u = 0; u < n; ++u) ctr[a] += k.t0.Chv(u, u, a);

  double cb = 0.0, cv = 0.0;
  for (int b = 0; b < n; ++b)
    for (int m = 0; m < n; ++m) {
      double lhs_h = 0.0, lhs_v = 0.0;
      for (int a = 0; a < n; ++a) {
        lhs_h += lam_h(a, b, m, a);
        lhs_v += tv_v(a, b, m, a);
      }
      double rhs_h = cb_h(b, m) - cb_h(m, b);
      double rhs_v = cvb_v(b, m) - cvb_v(m, b);
      for (int a = 0; a < n; ++a) {
        rhs_h += k.bvh0(a) * k.t0.Lam(a, b, m);
        rhs_v += k.bvv0(a) * k.t0.Tv(a, b, m);
        rhs_h += ctr[a] * k.t0.Rnl(a, m, b);
        for (int u = 0; u < n; ++u)
          rhs_h += k.t0.Rnl(a, u, m) * k.t0.Chv(u, b, a) +
                   k.t0.Rnl(a, b, u) * k.t0.Chv(u, m, a);
      }
      cb = std::max(std::fabs(lhs_h - rhs_h), cb);
      cv = std::max(std::fabs(lhs_v - rhs_v), cv);
    }

  return {{"first_bianchi_h", fb_h},
          {"first_bianchi_v", fb_v},
          {"contracted_bianchi_h", cb},
          {"contracted_bianchi_v", cv}};
}

FrameDerivatives frame_derivatives(ConnTag tag, const FrameCtx<J2>& c) {
  const int n = c.n;
  ConnectionCoefficients<J1> D1 = connection(tag, c);
  ConnectionCoefficients<J0> D0 = values(D1);
  Nd<J1> nv1 = values(c.N);
  Nd<J0> nv0 = values(nv1);

  Signature s_hu{slot_h_up()};
  Signature s_vu{slot_v_up()};
  Nd<J1> ah_h = h_covariant_derivative(c.Ah, s_hu, 1, D1, nv1, n);
  Nd<J1> ah_v = v_covariant_derivative(c.Ah, s_hu, 1, D1, nv1, n);
  Nd<J1> av_h = h_covariant_derivative(c.Av, s_vu, 1, D1, nv1, n);
  Nd<J1> av_v = v_covariant_derivative(c.Av, s_vu, 1, D1, nv1, n);

  Signature s_huhl{slot_h_up(), slot_h_low()};
  Signature s_huvl{slot_h_up(), slot_v_low()};
  Signature s_vuhl{slot_v_up(), slot_h_low()};
  Signature s_vuvl{slot_v_up(), slot_v_low()};
  return {values(ah_h),
          values(ah_v),
          values(av_h),
          values(av_v),
          h_covariant_derivative(ah_h, s_huhl, 1, D0, nv0, n),
          v_covariant_derivative(ah_h, s_huhl, 1, D0, nv0, n),
          h_covariant_derivative(ah_v, s_huvl, 1, D0, nv0, n),
          v_covariant_derivative(ah_v, s_huvl, 1, D0, nv0, n),
          h_covariant_derivative(av_h, s_vuhl, 1, D0, nv0, n),
          v_covariant_derivative(av_h, s_vuhl, 1, D0, nv0, n),
          h_covariant_derivative(av_v, s_vuvl, 1, D0, nv0, n),
          v_covariant_derivative(av_v, s_vuvl, 1, D0, nv0, n)};
}

double commutation_residual(ConnTag tag, const Space& sp,
                            const SpacePoint& p) {
  FrameCtx<J2> c = make_ctx<J2>(sp, p);
  const int n = c.n;
  TorsionBundle t0 = values(torsion(connection(tag, c), c));
  CurvatureBundle K = curvature_direct(tag, c);
  Nd<J0> Ah0 = values(values(c.Ah));
  Nd<J0> Av0 = values(values(c.Av));

  FrameDerivatives fd = frame_derivatives(tag, c);
  const Nd<J0>&ah_h0 = fd.ah_h, &ah_v0 = fd.ah_v;
  const Nd<J0>&av_h0 = fd.av_h, &av_v0 = fd.av_v;
  const Nd<J0>&ah_hh = fd.ah_hh, &ah_hv = fd.ah_hv;
  const Nd<J0>&ah_vh = fd.ah_vh, &ah_vv = fd.ah_vv;
  const Nd<J0>&av_hh = fd.av_hh, &av_hv = fd.av_hv;
  const Nd<J0>&av_vh = fd.av_vh, &av_vv = fd.av_vv;

  double worst = 0.0;
  auto keep = [&](double lhs, double rhs) {
    worst = std::max(std::fabs(lhs - rhs), worst);
  };
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int s3 = 0; s3 < n; ++s3)
        for (int s4 = 0; s4 < n; ++s4) {
          double hh_rhs = 0.0, hv_rhs = 0.0, vv_rhs = 0.0;
          double vhh_rhs = 0.0, vhv_rhs = 0.0, vvv_rhs = 0.0;
          for (int b = 0; b < n; ++b) {
            hh_rhs += K.R_hh(a, b, s4, s3) * Ah0(i, b) -
                      t0.Lam(b, s3, s4) * ah_h0(i, a, b);
            hv_rhs += K.P_h(a, b, s3, s4) * Ah0(i, b) -
                      t0.Chv(b, s3, s4) * ah_h0(i, a, b) -
                      t0.P(b, s3, s4) * ah_v0(i, a, b);
            vv_rhs += K.S_h(a, b, s4, s3) * Ah0(i, b) -
                      t0.Tv(b, s3, s4) * ah_v0(i, a, b);
            vhh_rhs += K.R_vh(a, b, s4, s3) * Av0(i, b) -
                       t0.Lam(b, s3, s4) * av_h0(i, a, b);
            vhv_rhs += K.P_v(a, b, s3, s4) * Av0(i, b) -
                       t0.Chv(b, s3, s4) * av_h0(i, a, b) -
                       t0.P(b, s3, s4) * av_v0(i, a, b);
            vvv_rhs += K.S_v(a, b, s4, s3) * Av0(i, b) -
                       t0.Tv(b, s3, s4) * av_v0(i, a, b);
          }
          for (int b = 0; b < n; ++b) {
            hh_rhs -= t0.Rnl(b, s3, s4) * ah_v0(i, a, b);
            vhh_rhs -= t0.Rnl(b, s3, s4) * av_v0(i, a, b);
          }
          keep(ah_hh(i, a, s3, s4) - ah_hh(i, a, s4, s3), hh_rhs);
          keep(ah_hv(i, a, s3, s4) - ah_vh(i, a, s4, s3), hv_rhs);
          keep(ah_vv(i, a, s3, s4) - ah_vv(i, a, s4, s3), vv_rhs);
          keep(av_hh(i, a, s3, s4) - av_hh(i, a, s4, s3), vhh_rhs);
          keep(av_hv(i, a, s3, s4) - av_vh(i, a, s4, s3), vhv_rhs);
          keep(av_vv(i, a, s3, s4) - av_vv(i, a, s4, s3), vvv_rhs);
        }
  return worst;
}

}  // namespace eaplab
