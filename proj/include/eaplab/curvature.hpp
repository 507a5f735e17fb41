#pragma once

#include <map>
#include <string>

#include "eaplab/connections.hpp"

namespace eaplab {

// Six curvature-type blocks of a d-connection, each stored as
// [upper][lower][third][fourth] with the slot order of the defining
// commutation formulae:
//   R_hh(alpha, beta, mu, nu)   hh-curvature, antisymmetric in (mu, nu)
//   R_vh(a, b, mu, nu)          vv-curvature under horizontal derivatives
//   P_h(alpha, beta, nu, c)     mixed hh-block
//   P_v(a, b, nu, c)            mixed vv-block
//   S_h(alpha, beta, b, c)      vertical hh-block, antisymmetric in (b, c)
//   S_v(a, b, c, d)             vertical vv-block, antisymmetric in (c, d)
struct CurvatureBundle {
  Nd<double> R_hh;
  Nd<double> R_vh;
  Nd<double> P_h;
  Nd<double> P_v;
  Nd<double> S_h;
  Nd<double> S_v;
};

// Evaluates all six blocks of the tagged connection from their defining
// expressions: adapted derivatives of the coefficients, quadratic
// coefficient terms, and the nonlinear-connection curvature coupling.
// Needs second jets because connection coefficients already hold first
// derivatives of the frame.
CurvatureBundle curvature_direct(ConnTag tag, const FrameCtx<J2>& c);
CurvatureBundle curvature_direct(ConnTag tag, const Space& sp,
                                 const SpacePoint& p);

// Closed forms for the non-canonical connections, written purely in terms
// of canonical covariant derivatives, contortion, and torsion.  Each must
// agree with curvature_direct on the same tag; the pair forms a two-route
// consistency check.
CurvatureBundle natural_curvature_formula(const FrameCtx<J2>& c);
CurvatureBundle dual_curvature_formula(const FrameCtx<J2>& c);
CurvatureBundle symmetric_curvature_formula(const FrameCtx<J2>& c);

// Ricci-type traces and scalars.  ric_h(beta, mu) traces R_hh over
// (upper, fourth); p_h(beta, c) is minus the trace of P_h over
// (upper, third); p_v(b, nu) and s_v(b, c) trace P_v and S_v over
// (upper, fourth).  Scalars contract with the inverse metric blocks.
struct CurvatureContractions {
  Nd<double> ric_h;
  Nd<double> p_h;
  Nd<double> p_v;
  Nd<double> s_v;
  double r_scalar = 0.0;
  double s_scalar = 0.0;
};

CurvatureContractions contract(const CurvatureBundle& k, const HvMetric& g);

// Closed-form contractions, independent of the rank-four blocks: these
// rebuild the traces from divergences of torsion/contortion and the basic
// vectors, and must match contract(formula_bundle, metric).
CurvatureContractions natural_contraction_formula(const FrameCtx<J2>& c);
CurvatureContractions dual_contraction_formula(const FrameCtx<J2>& c);
CurvatureContractions symmetric_contraction_formula(const FrameCtx<J2>& c);

// Cyclic-sum identities of the canonical torsion.  Keys:
//   first_bianchi_h       cyclic horizontal identity on Lam
//   first_bianchi_v       cyclic vertical identity on Tv
//   contracted_bianchi_h  trace form with basic-vector and nlc terms
//   contracted_bianchi_v  trace form of the vertical identity
// Values are max-abs residuals; all should vanish on every space.
std::map<std::string, double> bianchi_residuals(const Space& sp,
                                                const SpacePoint& p);

// First and second adapted covariant derivatives of the raised frame
// families under one connection, evaluated at the base point.  Axes are
// (mesh, component, first derivative[, second derivative]); the second
// derivative treats the first as an ordinary one-slot tensor field, so
// these blocks are the raw material of every commutator instrument.
struct FrameDerivatives {
  Nd<double> ah_h, ah_v, av_h, av_v;
  Nd<double> ah_hh, ah_hv, ah_vh, ah_vv;
  Nd<double> av_hh, av_hv, av_vh, av_vv;
};

FrameDerivatives frame_derivatives(ConnTag tag, const FrameCtx<J2>& c);

// Commutes the tagged connection's covariant derivatives on both frame
// families and compares against the curvature/torsion expansion.  Returns
// the max-abs residual over all six commutator blocks.  Degenerates to
// 0 = 0 for the canonical connection, whose frame derivatives vanish.
double commutation_residual(ConnTag tag, const Space& sp, const SpacePoint& p);

}  // namespace eaplab
