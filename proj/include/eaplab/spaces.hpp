#pragma once

/**
 * @file spaces.hpp
 * @brief Parallelizable fibered spaces: frame fields, nonlinear connections
 *        and the built-in catalog.
 *
 * A space of dimension n supplies 2n frame fields over the slit tangent
 * bundle, split into a horizontal block Lh(i, alpha) and a vertical block
 * Lv(i, a), both indexed mesh-first, together with a nonlinear connection
 * N(a, mu).  All evaluators are available at three derivative levels so the
 * calculus can consume exact first and second derivatives.
 */

#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "eaplab/errors.hpp"
#include "eaplab/nd.hpp"

namespace eaplab {

struct SpacePoint {
  std::vector<double> x;
  std::vector<double> y;
};

struct DomainBox {
  double x_lo = -1.0;
  double x_hi = 1.0;
  double r_min = 0.5;
  double r_max = 1.5;
};

inline constexpr double kFrameDetThreshold = 1e-10;

template <class S>
struct FramePairT {
  Nd<S> Lh;  // lambda_i{}^alpha, mesh index first
  Nd<S> Lv;  // lambda_i{}^a
};

template <class S>
struct CoFramePairT {
  Nd<S> Ch;  // lambda_i{}_alpha
  Nd<S> Cv;  // lambda_i{}_a
  double det_h = 0.0;
  double det_v = 0.0;
};

using FramePair = FramePairT<double>;
using CoFramePair = CoFramePairT<double>;

class Space {
 public:
  Space(std::string name, int n, std::string family, DomainBox box)
      : name_(std::move(name)), n_(n), family_(std::move(family)), box_(box) {}
  virtual ~Space() = default;

  const std::string& name() const { return name_; }
  int dim() const { return n_; }
  /// Expected classification label: flat | generic | cartan | berwald | cb.
  const std::string& family() const { return family_; }
  const DomainBox& domain() const { return box_; }

  virtual void frame(std::span<const J0> x, std::span<const J0> y,
                     Nd<J0>& Lh, Nd<J0>& Lv) const = 0;
  virtual void frame(std::span<const J1> x, std::span<const J1> y,
                     Nd<J1>& Lh, Nd<J1>& Lv) const = 0;
  virtual void frame(std::span<const J2> x, std::span<const J2> y,
                     Nd<J2>& Lh, Nd<J2>& Lv) const = 0;
  virtual void nlc(std::span<const J0> x, std::span<const J0> y,
                   Nd<J0>& N) const = 0;
  virtual void nlc(std::span<const J1> x, std::span<const J1> y,
                   Nd<J1>& N) const = 0;
  virtual void nlc(std::span<const J2> x, std::span<const J2> y,
                   Nd<J2>& N) const = 0;

 private:
  std::string name_;
  int n_;
  std::string family_;
  DomainBox box_;
};

/// Throws PointOutsideDomain / EvaluationDomainError when p is not usable.
void check_point(const Space& sp, const SpacePoint& p);

/// Frame blocks at a point, after domain validation.
FramePair evaluate_frame(const Space& sp, const SpacePoint& p);

/// Nonlinear connection coefficients N(a, mu) at a point.
Nd<double> evaluate_nlc(const Space& sp, const SpacePoint& p);

/// Inverse (lowered) frame blocks.  Throws SingularFrame when a block's
/// determinant magnitude falls below kFrameDetThreshold; the message names
/// the offending block.
template <class S>
CoFramePairT<S> invert_frame(const FramePairT<S>& fr) {
  int n = fr.Lh.shape()[0];
  CoFramePairT<S> co;
  Nd<S> mh(std::vector<int>{n, n}), mv(std::vector<int>{n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mh(i, j) = fr.Lh(i, j);
      mv(i, j) = fr.Lv(i, j);
    }
  invert_matrix(mh, &co.det_h);
  invert_matrix(mv, &co.det_v);
  if (std::fabs(co.det_h) < kFrameDetThreshold)
    throw SingularFrame("horizontal frame block is singular");
  if (std::fabs(co.det_v) < kFrameDetThreshold)
    throw SingularFrame("vertical frame block is singular");
  // mh now holds the inverse of Lh viewed as the (mesh, component) matrix;
  // the lowered frame is its transpose: sum_i Lh(i,a) Ch(i,b) = delta_ab.
  co.Ch = Nd<S>(std::vector<int>{n, n});
  co.Cv = Nd<S>(std::vector<int>{n, n});
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) {
      co.Ch(i, a) = mh(a, i);
      co.Cv(i, a) = mv(a, i);
    }
  return co;
}

const Space& builtin_space(const std::string& name);
std::vector<const Space*> builtin_spaces();

/// Extra spaces used by the test suites (not part of the catalog).
std::shared_ptr<const Space> make_flat(int n);
std::shared_ptr<const Space> make_generic(int n);

/// Deterministic sample of admissible points: base coordinates uniform in
/// the box, fiber norm uniform-by-rejection inside the annulus.
std::vector<SpacePoint> sample_points(const Space& sp, int count,
                                      std::uint64_t seed);

/// Smallest singular-value proxy over a domain sample: the minimum absolute
/// frame-block determinant and the largest condition estimate encountered.
struct FrameConditionReport {
  double min_abs_det_h = 0.0;
  double min_abs_det_v = 0.0;
  double max_condition = 0.0;
};
FrameConditionReport frame_condition_report(const Space& sp, int count,
                                            std::uint64_t seed);

}  // namespace eaplab
