#pragma once

#include "eaplab/calculus.hpp"
#include "eaplab/connections.hpp"
#include "eaplab/nd.hpp"
#include "eaplab/spaces.hpp"

namespace eaplab {

/// Scalar Lagrangian ingredients built from the canonical torsion and its
/// traces.  No symmetry of the component matrices is assumed.
struct LagrangianValues {
  Nd<double> H_ab;         // Lam(nu, ep, al) Lam(ep, nu, be) - C_h(al) C_h(be)
  double H_scalar = 0.0;   // trace against the inverse horizontal metric
  double H_density = 0.0;  // lowered horizontal coframe determinant times H
  Nd<double> V_ab;         // Tv(d, e, a) Tv(e, d, b) - C_v(a) C_v(b)
  double V_scalar = 0.0;
  double V_density = 0.0;  // lowered vertical coframe determinant times V
};

inline LagrangianValues lagrangians(const Space& sp, const SpacePoint& p) {
  auto c = make_ctx<J1>(sp, p);
  int n = c.n;
  ConnectionCoefficients<J0> D = canonical_connection(c);
  TorsionBundle t = torsion(D, c);
  BasicVector bv = basic_vector(t);
  LagrangianValues out;
  out.H_ab = Nd<double>(std::vector<int>{n, n});
  out.V_ab = Nd<double>(std::vector<int>{n, n});
  Nd<double> ghi = values(c.ghi), gvi = values(c.gvi);
  for (int al = 0; al < n; ++al)
    for (int be = 0; be < n; ++be) {
      double h = 0.0, v = 0.0;
      for (int nu = 0; nu < n; ++nu)
        for (int ep = 0; ep < n; ++ep) {
          h += t.Lam(nu, ep, al) * t.Lam(ep, nu, be);
          v += t.Tv(nu, ep, al) * t.Tv(ep, nu, be);
        }
      out.H_ab(al, be) = h - bv.C_h(al) * bv.C_h(be);
      out.V_ab(al, be) = v - bv.C_v(al) * bv.C_v(be);
      out.H_scalar += ghi(al, be) * out.H_ab(al, be);
      out.V_scalar += gvi(al, be) * out.V_ab(al, be);
    }
  Nd<double> mh = values(c.Bh), mv = values(c.Bv);
  double det_h = 0.0, det_v = 0.0;
  invert_matrix(mh, &det_h);
  invert_matrix(mv, &det_v);
  out.H_density = det_h * out.H_scalar;
  out.V_density = det_v * out.V_scalar;
  return out;
}

}  // namespace eaplab
