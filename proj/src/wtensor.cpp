#include "eaplab/wtensor.hpp"

#include <algorithm>
#include <cmath>

namespace eaplab {

namespace {

Nd<double> nd4(int n) { return Nd<double>(std::vector<int>{n, n, n, n}); }

WBundle zero_bundle(int n) {
  return {nd4(n), nd4(n), nd4(n), nd4(n), nd4(n), nd4(n)};
}

// Relative Frobenius distance; the census equality gauge.
double rel_dist(const Nd<double>& a, const Nd<double>& b) {
  return frobenius(a - b) / (1.0 + frobenius(a) + frobenius(b));
}

}  // namespace

WBundle w_via_commutator(ConnTag tag, const FrameCtx<J2>& c) {
  const int n = c.n;
  FrameDerivatives fd = frame_derivatives(tag, c);
  Nd<J0> Bh0 = values(values(c.Bh));
  Nd<J0> Bv0 = values(values(c.Bv));

  WBundle w = zero_bundle(n);
  for (int al = 0; al < n; ++al)
    for (int be = 0; be < n; ++be)
      for (int s3 = 0; s3 < n; ++s3)
        for (int s4 = 0; s4 < n; ++s4) {
          double hhh = 0.0, hhv = 0.0, vhh = 0.0;
          double vhv = 0.0, vvh = 0.0, vvv = 0.0;
          for (int i = 0; i < n; ++i) {
            hhh += Bh0(i, be) *
                   (fd.ah_hh(i, al, s3, s4) - fd.ah_hh(i, al, s4, s3));
            hhv += Bv0(i, be) *
                   (fd.av_hh(i, al, s3, s4) - fd.av_hh(i, al, s4, s3));
            vhh += Bh0(i, be) *
                   (fd.ah_hv(i, al, s3, s4) - fd.ah_vh(i, al, s4, s3));
            vhv += Bv0(i, be) *
                   (fd.av_hv(i, al, s3, s4) - fd.av_vh(i, al, s4, s3));
            vvh += Bh0(i, be) *
                   (fd.ah_vv(i, al, s3, s4) - fd.ah_vv(i, al, s4, s3));
            vvv += Bv0(i, be) *
                   (fd.av_vv(i, al, s3, s4) - fd.av_vv(i, al, s4, s3));
          }
          w.W_hhh(al, be, s3, s4) = hhh;
          w.W_hhv(al, be, s3, s4) = hhv;
          w.W_vhh(al, be, s3, s4) = vhh;
          w.W_vhv(al, be, s3, s4) = vhv;
          w.W_vvh(al, be, s3, s4) = vvh;
          w.W_vvv(al, be, s3, s4) = vvv;
        }
  return w;
}

WBundle w_via_commutator(ConnTag tag, const Space& sp, const SpacePoint& p) {
  FrameCtx<J2> c = make_ctx<J2>(sp, p);
  return w_via_commutator(tag, c);
}

WBundle w_lowered_commutator(ConnTag tag, const FrameCtx<J2>& c) {
  const int n = c.n;
  ConnectionCoefficients<J1> D1 = connection(tag, c);
  ConnectionCoefficients<J0> D0 = values(D1);
  Nd<J1> nv1 = values(c.N);
  Nd<J0> nv0 = values(nv1);
  Nd<J0> Ah0 = values(values(c.Ah));
  Nd<J0> Av0 = values(values(c.Av));

  Signature s_hl{slot_h_low()};
  Signature s_vl{slot_v_low()};
  Nd<J1> bh_h = h_covariant_derivative(c.Bh, s_hl, 1, D1, nv1, n);
  Nd<J1> bh_v = v_covariant_derivative(c.Bh, s_hl, 1, D1, nv1, n);
  Nd<J1> bv_h = h_covariant_derivative(c.Bv, s_vl, 1, D1, nv1, n);
  Nd<J1> bv_v = v_covariant_derivative(c.Bv, s_vl, 1, D1, nv1, n);

  Signature s_hlhl{slot_h_low(), slot_h_low()};
  Signature s_hlvl{slot_h_low(), slot_v_low()};
  Signature s_vlhl{slot_v_low(), slot_h_low()};
  Signature s_vlvl{slot_v_low(), slot_v_low()};
  Nd<J0> bh_hh = h_covariant_derivative(bh_h, s_hlhl, 1, D0, nv0, n);
  Nd<J0> bh_hv = v_covariant_derivative(bh_h, s_hlhl, 1, D0, nv0, n);
  Nd<J0> bh_vh = h_covariant_derivative(bh_v, s_hlvl, 1, D0, nv0, n);
  Nd<J0> bh_vv = v_covariant_derivative(bh_v, s_hlvl, 1, D0, nv0, n);
  Nd<J0> bv_hh = h_covariant_derivative(bv_h, s_vlhl, 1, D0, nv0, n);
  Nd<J0> bv_hv = v_covariant_derivative(bv_h, s_vlhl, 1, D0, nv0, n);
  Nd<J0> bv_vh = h_covariant_derivative(bv_v, s_vlvl, 1, D0, nv0, n);
  Nd<J0> bv_vv = v_covariant_derivative(bv_v, s_vlvl, 1, D0, nv0, n);

  WBundle w = zero_bundle(n);
  for (int al = 0; al < n; ++al)
    for (int be = 0; be < n; ++be)
      for (int s3 = 0; s3 < n; ++s3)
        for (int s4 = 0; s4 < n; ++s4) {
          double hhh = 0.0, hhv = 0.0, vhh = 0.0;
          double vhv = 0.0, vvh = 0.0, vvv = 0.0;
          for (int i = 0; i < n; ++i) {
            hhh += Ah0(i, al) * (bh_hh(i, be, s3, s4) - bh_hh(i, be, s4, s3));
            hhv += Av0(i, al) * (bv_hh(i, be, s3, s4) - bv_hh(i, be, s4, s3));
            vhh += Ah0(i, al) * (bh_hv(i, be, s3, s4) - bh_vh(i, be, s4, s3));
            vhv += Av0(i, al) * (bv_hv(i, be, s3, s4) - bv_vh(i, be, s4, s3));
            vvh += Ah0(i, al) * (bh_vv(i, be, s3, s4) - bh_vv(i, be, s4, s3));
            vvv += Av0(i, al) * (bv_vv(i, be, s3, s4) - bv_vv(i, be, s4, s3));
          }
          w.W_hhh(al, be, s3, s4) = hhh;
          w.W_hhv(al, be, s3, s4) = hhv;
          w.W_vhh(al, be, s3, s4) = vhh;
          w.W_vhv(al, be, s3, s4) = vhv;
          w.W_vvh(al, be, s3, s4) = vvh;
          w.W_vvv(al, be, s3, s4) = vvv;
        }
  return w;
}

WBundle w_natural_formula(const FrameCtx<J2>& c) {
  const int n = c.n;
  ConnectionCoefficients<J1> D1 = canonical_connection(c);
  ConnectionCoefficients<J0> D0 = values(D1);
  Nd<J1> nv1 = values(c.N);
  Nd<J0> nv0 = values(nv1);
  TorsionBundle t0 = values(torsion(D1, c));
  ContortionBundleT<J1> g1 = contortion(c);
  ContortionBundleT<J0> g0 = values(g1);

  Signature sig_hh{slot_h_up(), slot_h_low(), slot_h_low()};
  Signature sig_vvh{slot_v_up(), slot_v_low(), slot_h_low()};
  Signature sig_hhv{slot_h_up(), slot_h_low(), slot_v_low()};
  Signature sig_vvv{slot_v_up(), slot_v_low(), slot_v_low()};
  Nd<J0> ghh_h = h_covariant_derivative(g1.g_hh, sig_hh, 0, D0, nv0, n);
  Nd<J0> ghh_v = v_covariant_derivative(g1.g_hh, sig_hh, 0, D0, nv0, n);
  Nd<J0> gvvh_h = h_covariant_derivative(g1.g_vv_h, sig_vvh, 0, D0, nv0, n);
  Nd<J0> gvvh_v = v_covariant_derivative(g1.g_vv_h, sig_vvh, 0, D0, nv0, n);
  Nd<J0> ghhv_h = h_covariant_derivative(g1.g_hh_v, sig_hhv, 0, D0, nv0, n);
  Nd<J0> gvvv_h = h_covariant_derivative(g1.g_vv_v, sig_vvv, 0, D0, nv0, n);

  WBundle w = zero_bundle(n);
  for (int al = 0; al < n; ++al)
    for (int be = 0; be < n; ++be)
      for (int s3 = 0; s3 < n; ++s3)
        for (int s4 = 0; s4 < n; ++s4) {
          double hhh = ghh_h(al, be, s4, s3) - ghh_h(al, be, s3, s4);
          double hhv = gvvh_h(al, be, s4, s3) - gvvh_h(al, be, s3, s4);
          double vhh = ghhv_h(al, be, s4, s3) - ghh_v(al, be, s3, s4);
          double vhv = gvvv_h(al, be, s4, s3) - gvvh_v(al, be, s3, s4);
          for (int e = 0; e < n; ++e) {
            hhh += g0.g_hh(e, be, s3) * g0.g_hh(al, e, s4) -
                   g0.g_hh(e, be, s4) * g0.g_hh(al, e, s3) -
                   g0.g_hh(al, be, e) * t0.Lam(e, s3, s4);
            hhv += g0.g_vv_h(e, be, s3) * g0.g_vv_h(al, e, s4) -
                   g0.g_vv_h(e, be, s4) * g0.g_vv_h(al, e, s3) -
                   g0.g_vv_h(al, be, e) * t0.Lam(e, s3, s4);
            vhh += g0.g_hh(e, be, s3) * g0.g_hh_v(al, e, s4) -
                   g0.g_hh_v(e, be, s4) * g0.g_hh(al, e, s3) +
                   g0.g_vv_h(e, s4, s3) * g0.g_hh_v(al, be, e) -
                   g0.g_hh_v(e, s3, s4) * g0.g_hh(al, be, e);
            vhv += g0.g_vv_h(e, be, s3) * g0.g_vv_v(al, e, s4) -
                   g0.g_vv_v(e, be, s4) * g0.g_vv_h(al, e, s3) +
                   g0.g_vv_h(e, s4, s3) * g0.g_vv_v(al, be, e) -
                   g0.g_hh_v(e, s3, s4) * g0.g_vv_h(al, be, e);
          }
          w.W_hhh(al, be, s3, s4) = hhh;
          w.W_hhv(al, be, s3, s4) = hhv;
          w.W_vhh(al, be, s3, s4) = vhh;
          w.W_vhv(al, be, s3, s4) = vhv;
        }

  CurvatureBundle nat = natural_curvature_formula(c);
  w.W_vvh = transpose_last2(nat.S_h);
  w.W_vvv = transpose_last2(nat.S_v);
  return w;
}

WBundle w_dual_formula(const FrameCtx<J2>& c) {
  const int n = c.n;
  ConnectionCoefficients<J1> D1 = canonical_connection(c);
  ConnectionCoefficients<J0> D0 = values(D1);
  Nd<J1> nv1 = values(c.N);
  Nd<J0> nv0 = values(nv1);
  TorsionBundleT<J1> t1 = torsion(D1, c);
  TorsionBundle t0 = values(t1);

  Signature sig_lam{slot_h_up(), slot_h_low(), slot_h_low()};
  Signature sig_tv{slot_v_up(), slot_v_low(), slot_v_low()};
  Nd<J0> lam_h = h_covariant_derivative(t1.Lam, sig_lam, 0, D0, nv0, n);
  Nd<J0> lam_v = v_covariant_derivative(t1.Lam, sig_lam, 0, D0, nv0, n);
  Nd<J0> tv_h = h_covariant_derivative(t1.Tv, sig_tv, 0, D0, nv0, n);
  Nd<J0> tv_v = v_covariant_derivative(t1.Tv, sig_tv, 0, D0, nv0, n);

  WBundle w = zero_bundle(n);
  for (int al = 0; al < n; ++al)
    for (int be = 0; be < n; ++be)
      for (int s3 = 0; s3 < n; ++s3)
        for (int s4 = 0; s4 < n; ++s4) {
          double hhh = lam_h(al, s3, s4, be);
          double vvv = tv_v(al, s3, s4, be);
          // Quadratic terms carry the summed slot first, as produced by
          // commuting through the frame relation Lam * lambda.
          for (int e = 0; e < n; ++e) {
            hhh += t0.Lam(e, s3, s4) * t0.Lam(al, e, be) +
                   t0.Chv(al, be, e) * t0.Rnl(e, s3, s4) +
                   t0.Chv(al, s3, e) * t0.Rnl(e, s4, be) +
                   t0.Chv(al, s4, e) * t0.Rnl(e, be, s3);
            vvv += t0.Tv(e, s3, s4) * t0.Tv(al, e, be);
          }
          w.W_hhh(al, be, s3, s4) = hhh;
          w.W_vhh(al, be, s3, s4) = lam_v(al, s3, be, s4);
          w.W_vhv(al, be, s3, s4) = tv_h(al, be, s4, s3);
          w.W_vvv(al, be, s3, s4) = vvv;
        }
  return w;
}

WBundle w_symmetric_formula(const FrameCtx<J2>& c) {
  WBundle wd = w_dual_formula(c);
  CurvatureBundle sym = symmetric_curvature_formula(c);
  WBundle w = zero_bundle(c.n);
  w.W_hhh = transpose_last2(sym.R_hh);
  w.W_vhh = scaled(wd.W_vhh, 0.5);
  w.W_vhv = scaled(wd.W_vhv, 0.5);
  w.W_vvv = transpose_last2(sym.S_v);
  return w;
}

WBundle w_natural_formula(const Space& sp, const SpacePoint& p) {
  FrameCtx<J2> c = make_ctx<J2>(sp, p);
  return w_natural_formula(c);
}

WBundle w_dual_formula(const Space& sp, const SpacePoint& p) {
  FrameCtx<J2> c = make_ctx<J2>(sp, p);
  return w_dual_formula(c);
}

WBundle w_symmetric_formula(const Space& sp, const SpacePoint& p) {
  FrameCtx<J2> c = make_ctx<J2>(sp, p);
  return w_symmetric_formula(c);
}

WBundle w_formula(ConnTag tag, const FrameCtx<J2>& c) {
  switch (tag) {
    case ConnTag::natural: return w_natural_formula(c);
    case ConnTag::dual: return w_dual_formula(c);
    case ConnTag::symmetric: return w_symmetric_formula(c);
    case ConnTag::canonical:
    default: return zero_bundle(c.n);
  }
}

std::map<std::string, double> w_cyclic_residual(const Space& sp,
                                                const SpacePoint& p) {
  FrameCtx<J2> c = make_ctx<J2>(sp, p);
  const int n = c.n;
  TorsionBundle t0 = values(torsion(canonical_connection(c), c));
  WBundle wn = w_via_commutator(ConnTag::natural, c);
  WBundle ws = w_via_commutator(ConnTag::symmetric, c);
  WBundle wd = w_via_commutator(ConnTag::dual, c);

  auto cyc = [&](const Nd<double>& st, int al, int p1, int q, int r) {
    return st(al, p1, r, q) + st(al, q, p1, r) + st(al, r, q, p1);
  };

  // The dual cyclic sum picks up, on top of twice the nonlinear-connection
  // coupling, twice the cyclic quadratic torsion sum; both extras vanish
  // identically when n = 2.
  double worst_unit = 0.0, worst_double = 0.0;
  for (int al = 0; al < n; ++al)
    for (int p1 = 0; p1 < n; ++p1)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r) {
          double g = 0.0, quad = 0.0;
          for (int a = 0; a < n; ++a) {
            g += t0.Rnl(a, q, p1) * t0.Chv(al, r, a) +
                 t0.Rnl(a, r, q) * t0.Chv(al, p1, a) +
                 t0.Rnl(a, p1, r) * t0.Chv(al, q, a);
            quad += t0.Lam(a, q, r) * t0.Lam(al, p1, a) +
                    t0.Lam(a, r, p1) * t0.Lam(al, q, a) +
                    t0.Lam(a, p1, q) * t0.Lam(al, r, a);
          }
          worst_unit = std::max(std::fabs(cyc(wn.W_hhh, al, p1, q, r) - g),
                                worst_unit);
          worst_unit = std::max(std::fabs(cyc(ws.W_hhh, al, p1, q, r) - g),
                                worst_unit);
          worst_double =
              std::max(std::fabs(cyc(wd.W_hhh, al, p1, q, r) - 2.0 * (g + quad)),
                       worst_double);
        }
  return {{"cyclic_w_natural", worst_unit}, {"cyclic_w_dual", worst_double}};
}

namespace {

const Nd<double>& block_of(const WBundle& w, int k) {
  switch (k) {
    case 0: return w.W_hhh;
    case 1: return w.W_hhv;
    case 2: return w.W_vhh;
    case 3: return w.W_vhv;
    case 4: return w.W_vvh;
    default: return w.W_vvv;
  }
}

// Curvature partner with the same slot layout as block k.
const Nd<double>& partner_of(const CurvatureBundle& kb, int k) {
  switch (k) {
    case 0: return kb.R_hh;
    case 1: return kb.R_vh;
    case 2: return kb.P_h;
    case 3: return kb.P_v;
    case 4: return kb.S_h;
    default: return kb.S_v;
  }
}

const char* block_name(int k) {
  switch (k) {
    case 0: return "hhh";
    case 1: return "hhv";
    case 2: return "vhh";
    case 3: return "vhv";
    case 4: return "vvh";
    default: return "vvv";
  }
}

}  // namespace

WCensus w_census(const Space& sp, int samples, std::uint64_t seed) {
  const ConnTag tags[3] = {ConnTag::natural, ConnTag::dual,
                           ConnTag::symmetric};
  double max_abs_seen[3][6] = {};
  double curv_plain[3][6] = {};
  double curv_swapped[3][6] = {};
  double half_gap[3][6] = {};

  std::vector<SpacePoint> pts = sample_points(sp, samples, seed);
  for (const SpacePoint& p : pts) {
    FrameCtx<J2> c = make_ctx<J2>(sp, p);
    WBundle wd = w_via_commutator(ConnTag::dual, c);
    for (int t = 0; t < 3; ++t) {
      WBundle w = tags[t] == ConnTag::dual ? wd
                                           : w_via_commutator(tags[t], c);
      CurvatureBundle kb = curvature_direct(tags[t], c);
      for (int k = 0; k < 6; ++k) {
        const Nd<double>& blk = block_of(w, k);
        const Nd<double>& cv = partner_of(kb, k);
        max_abs_seen[t][k] = std::max(max_abs(blk), max_abs_seen[t][k]);
        curv_plain[t][k] = std::max(rel_dist(blk, cv), curv_plain[t][k]);
        curv_swapped[t][k] =
            std::max(rel_dist(blk, transpose_last2(cv)), curv_swapped[t][k]);
        if (tags[t] == ConnTag::symmetric)
          half_gap[t][k] = std::max(
              rel_dist(blk, scaled(block_of(wd, k), 0.5)), half_gap[t][k]);
      }
    }
  }

  const double tol = 1e-8;
  WCensus census;
  for (int t = 0; t < 3; ++t)
    for (int k = 0; k < 6; ++k) {
      WCensusEntry e;
      e.tag = tags[t];
      e.block = block_name(k);
      e.max_abs = max_abs_seen[t][k];
      double curv = std::min(curv_plain[t][k], curv_swapped[t][k]);
      if (e.max_abs < tol) {
        e.label = "zero";
        e.match_residual = e.max_abs;
        ++census.zero;
      } else if (curv < tol) {
        e.label = "curvature";
        e.match_residual = curv;
        ++census.curvature_equal;
      } else if (tags[t] == ConnTag::symmetric && half_gap[t][k] < tol) {
        e.label = "half_dual";
        e.match_residual = half_gap[t][k];
        ++census.half_dual;
      } else {
        e.label = "independent";
        e.match_residual = 0.0;
        ++census.independent;
      }
      census.entries.push_back(e);
    }
  census.degenerate = census.zero == 18;
  return census;
}

}  // namespace eaplab
