#pragma once
/**
 * @file classify.hpp
 * @brief Cartan/Berwald/CB regime residuals, space classification, and the
 *        consequence suites that verify what each regime forces.
 */

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "eaplab/connections.hpp"
#include "eaplab/nd.hpp"
#include "eaplab/report.hpp"
#include "eaplab/spaces.hpp"

namespace eaplab {

/// Pointwise defect of the Cartan-type condition for `tag`: the max-abs of
/// the horizontal covariant derivative of the Liouville field, then of its
/// vertical covariant derivative minus the identity.  Both vanish exactly
/// when N^a_mu = y^b G_vv_h(a,b,mu) and y^b C_vv_v(a,b,c) = 0.
std::pair<double, double> cartan_residual(const Space& sp, const SpacePoint& p,
                                          ConnTag tag = ConnTag::canonical);

/// Pointwise defect of the Berwald-type condition for `tag`: the max-abs of
/// the gap between the fibre jacobian of N and the vv-coefficients, then of
/// the hv-coefficients.
std::pair<double, double> berwald_residual(const Space& sp, const SpacePoint& p,
                                           ConnTag tag = ConnTag::canonical);

/// Nonlinear connection induced by the frame alone: y^b times the plain
/// x-derivative of the lowered vertical frame, contracted with the raised
/// one.  Coincides with the space's own N exactly on Cartan-type spaces.
Nd<double> induced_nlc(const Space& sp, const SpacePoint& p);

/// Outcome of a residual sweep: `label` is one of generic, cartan, berwald,
/// cb, or indeterminate (some residual between the pass and fail bands).
/// `residuals` holds the per-condition maxima over the sweep.
struct ClassificationReport {
  std::string label;
  std::map<std::string, double> residuals;
  int samples = 0;
  std::uint64_t seed = 0;
  double pass_tol = 0.0;
  double fail_tol = 0.0;
};

ClassificationReport classify(const Space& sp, int samples = 50,
                              std::uint64_t seed = 42, double pass_tol = 1e-9,
                              double fail_tol = 1e-3);

// Consequence suites.  Each gates on the defining residuals at every sample
// point (throwing PreconditionNotCartan / PreconditionNotBerwald /
// PreconditionNotCB), then accumulates the residuals of everything the
// regime forces: vanishing torsion/contortion blocks, homogeneity and
// x-only behaviour, the reduced curvature and W formulas, and the
// zero/alive block masks of the regime tables.
SuiteReport cartan_consequence_suite(const Space& sp, int samples = 50,
                                     std::uint64_t seed = 42);
SuiteReport berwald_consequence_suite(const Space& sp, int samples = 50,
                                      std::uint64_t seed = 42);
SuiteReport cb_consequence_suite(const Space& sp, int samples = 50,
                                 std::uint64_t seed = 42);

}  // namespace eaplab
