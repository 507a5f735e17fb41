#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eaplab/curvature.hpp"

namespace eaplab {

// Commutator tensors of a d-connection acting on the parallelization
// fields, one block per (derivative pair, frame family) combination.
// Storage is [upper][lower][first derivative][second derivative]; the
// mixed blocks W_vhh / W_vhv carry (horizontal, vertical) derivative
// slots in that order.  W_hhh, W_hhv, W_vvh, W_vvv are antisymmetric in
// their last two slots by construction.
struct WBundle {
  Nd<double> W_hhh;
  Nd<double> W_hhv;
  Nd<double> W_vhh;
  Nd<double> W_vhv;
  Nd<double> W_vvh;
  Nd<double> W_vvv;
};

// Defining route: differentiate each raised frame family twice with the
// tagged connection, antisymmetrize, and strip the mesh index with the
// lowered coframe.  Vanishes identically for the canonical connection.
WBundle w_via_commutator(ConnTag tag, const FrameCtx<J2>& c);
WBundle w_via_commutator(ConnTag tag, const Space& sp, const SpacePoint& p);

// Same commutators built on the lowered frame families and stripped with
// the raised coframe.  Reproduces w_via_commutator up to one overall sign.
WBundle w_lowered_commutator(ConnTag tag, const FrameCtx<J2>& c);

// Closed forms in terms of contortion (natural) or canonical torsion
// (dual, symmetric); each must match the commutator route on its tag.
WBundle w_natural_formula(const FrameCtx<J2>& c);
WBundle w_dual_formula(const FrameCtx<J2>& c);
WBundle w_symmetric_formula(const FrameCtx<J2>& c);
WBundle w_natural_formula(const Space& sp, const SpacePoint& p);
WBundle w_dual_formula(const Space& sp, const SpacePoint& p);
WBundle w_symmetric_formula(const Space& sp, const SpacePoint& p);

// Formula route for any tag; the canonical bundle is identically zero.
WBundle w_formula(ConnTag tag, const FrameCtx<J2>& c);

// Cyclic-sum identities of the purely horizontal W blocks.  Keys:
//   cyclic_w_natural  natural and symmetric cyclic sums against the
//                     nonlinear-connection coupling (worst of the two)
//   cyclic_w_dual     dual cyclic sum against twice that coupling plus
//                     twice the cyclic quadratic horizontal-torsion sum
// Values are max-abs residuals; both vanish on every space.
std::map<std::string, double> w_cyclic_residual(const Space& sp,
                                                const SpacePoint& p);

// One census row: how a single W block of one connection behaves across
// the sampled points.  label is "zero", "curvature" (coincides with the
// same connection's same-type curvature block, directly or with the last
// two slots swapped), "half_dual" (symmetric block equal to half the
// dual one), or "independent".  max_abs is the largest component seen;
// match_residual is the relative Frobenius distance backing a
// non-independent label (equal to max_abs for "zero" rows).
struct WCensusEntry {
  ConnTag tag;
  std::string block;
  std::string label;
  double max_abs = 0.0;
  double match_residual = 0.0;
};

// Census over the three non-canonical connections: eighteen rows in a
// fixed (connection, block) order plus aggregate counts.  degenerate is
// set when every block vanished at every sample.
struct WCensus {
  std::vector<WCensusEntry> entries;
  int zero = 0;
  int curvature_equal = 0;
  int half_dual = 0;
  int independent = 0;
  bool degenerate = false;
};

WCensus w_census(const Space& sp, int samples, std::uint64_t seed = 42);

}  // namespace eaplab
