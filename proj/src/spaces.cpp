#include "eaplab/spaces.hpp"

#include <cmath>

namespace eaplab {

namespace {

template <class D>
class SpaceImpl : public Space {
 public:
  using Space::Space;

  void frame(std::span<const J0> x, std::span<const J0> y, Nd<J0>& Lh,
             Nd<J0>& Lv) const override {
    self().template frameT<J0>(x, y, Lh, Lv);
  }
  void frame(std::span<const J1> x, std::span<const J1> y, Nd<J1>& Lh,
             Nd<J1>& Lv) const override {
    self().template frameT<J1>(x, y, Lh, Lv);
  }
  void frame(std::span<const J2> x, std::span<const J2> y, Nd<J2>& Lh,
             Nd<J2>& Lv) const override {
    self().template frameT<J2>(x, y, Lh, Lv);
  }
  void nlc(std::span<const J0> x, std::span<const J0> y,
           Nd<J0>& N) const override {
    self().template nlcT<J0>(x, y, N);
  }
  void nlc(std::span<const J1> x, std::span<const J1> y,
           Nd<J1>& N) const override {
    self().template nlcT<J1>(x, y, N);
  }
  void nlc(std::span<const J2> x, std::span<const J2> y,
           Nd<J2>& N) const override {
    self().template nlcT<J2>(x, y, N);
  }

 private:
  const D& self() const { return *static_cast<const D*>(this); }
};

template <class S>
Nd<S> identity_block(int n) {
  Nd<S> m(std::vector<int>{n, n});
  for (int i = 0; i < n; ++i) m(i, i) = S(1.0);
  return m;
}

/// Base connection of an x-only vertical frame, G(a, b, mu), computed by
/// differentiating the inverted frame one extra level in the base slots.
/// Only valid for spaces whose vertical frame ignores the fiber coordinates.
template <class S, class D>
Nd<S> vertical_base_connection(const D& space, std::span<const S> x) {
  using U = Dual<S>;
  int n = space.dim();
  std::vector<U> xu(static_cast<std::size_t>(n));
  std::vector<U> yu(static_cast<std::size_t>(n));
  for (int mu = 0; mu < n; ++mu) {
    U v;
    v.f = x[static_cast<std::size_t>(mu)];
    v.d.assign(static_cast<std::size_t>(n), S{});
    v.d[static_cast<std::size_t>(mu)] = S(1.0);
    xu[static_cast<std::size_t>(mu)] = v;
  }
  Nd<U> Lh, Lv;
  space.template frameT<U>(std::span<const U>(xu), std::span<const U>(yu), Lh,
                           Lv);
  Nd<U> m(std::vector<int>{n, n});
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) m(i, a) = Lv(i, a);
  invert_matrix(m);
  Nd<S> G(std::vector<int>{n, n, n});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int mu = 0; mu < n; ++mu) {
        S acc{};
        for (int i = 0; i < n; ++i)
          acc += value_of(Lv(i, a)) * partial(m(b, i), mu);
        G(a, b, mu) = acc;
      }
  return G;
}

class FlatSpace final : public SpaceImpl<FlatSpace> {
 public:
  explicit FlatSpace(int n, std::string name = "flat")
      : SpaceImpl(std::move(name), n, "cb", DomainBox{}) {}

  template <class S>
  void frameT(std::span<const S>, std::span<const S>, Nd<S>& Lh,
              Nd<S>& Lv) const {
    Lh = identity_block<S>(dim());
    Lv = identity_block<S>(dim());
  }
  template <class S>
  void nlcT(std::span<const S>, std::span<const S>, Nd<S>& N) const {
    N = Nd<S>(std::vector<int>{dim(), dim()});
  }
};

// Fully generic space: both frame blocks mix base and fiber coordinates and
// the nonlinear connection is not induced by either block.  Perturbation
// amplitude 0.1 keeps both determinants well inside [0.5, 2] on the domain.
class Generic2 final : public SpaceImpl<Generic2> {
 public:
  Generic2() : SpaceImpl("generic2", 2, "generic", DomainBox{}) {}

  template <class S>
  void frameT(std::span<const S> x, std::span<const S> y, Nd<S>& Lh,
              Nd<S>& Lv) const {
    Lh = identity_block<S>(2);
    Lv = identity_block<S>(2);
    Lh(0, 0) += 0.1 * sin(x[0] + y[1]);
    Lh(0, 1) += 0.1 * (cos(x[1]) * sin(y[0]));
    Lh(1, 0) += 0.1 * cos(x[0] - y[0]);
    Lh(1, 1) += 0.1 * sin(x[1] + y[0]);
    Lv(0, 0) += 0.1 * cos(x[1] + y[0]);
    Lv(0, 1) += 0.1 * (sin(x[0]) * cos(y[1]));
    Lv(1, 0) += 0.1 * (sin(x[1]) * sin(y[0]));
    Lv(1, 1) += 0.1 * cos(x[0] - y[1]);
  }
  // The second term breaks integrability so the nlc curvature stays alive.
  template <class S>
  void nlcT(std::span<const S> x, std::span<const S> y, Nd<S>& N) const {
    N = Nd<S>(std::vector<int>{2, 2});
    for (int a = 0; a < 2; ++a)
      for (int mu = 0; mu < 2; ++mu)
        N(a, mu) = 0.1 * (y[a] * cos(x[mu])) +
                   0.05 * (y[1 - a] * sin(x[1 - mu] + 0.4 * a + 0.7 * mu));
  }
};

class Generic3 final : public SpaceImpl<Generic3> {
 public:
  Generic3() : SpaceImpl("generic3", 3, "generic", DomainBox{}) {}

  template <class S>
  void frameT(std::span<const S> x, std::span<const S> y, Nd<S>& Lh,
              Nd<S>& Lv) const {
    int n = 3;
    Lh = identity_block<S>(n);
    Lv = identity_block<S>(n);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) {
        Lh(i, a) += 0.1 * sin(x[(i + a) % 3] + 0.5 * y[(i + 2 * a) % 3] +
                              (0.3 * i - 0.2 * a));
        Lv(i, a) += 0.1 * cos(x[(i + 2 * a) % 3] - 0.5 * y[(i + a) % 3] +
                              0.1 * (i + a));
      }
  }
  template <class S>
  void nlcT(std::span<const S> x, std::span<const S> y, Nd<S>& N) const {
    N = Nd<S>(std::vector<int>{3, 3});
    for (int a = 0; a < 3; ++a)
      for (int mu = 0; mu < 3; ++mu)
        N(a, mu) = 0.1 * (y[a] * cos(x[mu])) +
                   0.05 * (y[(a + 1) % 3] *
                           sin(x[(mu + 1) % 3] + 0.4 * a + 0.7 * mu));
  }
};

// Vertical frame is a rotation through theta(x) = x^1 + x^2, so the induced
// fiber connection is the rotation generator and N = (-y^2, y^1) per base
// direction.  The horizontal block stays fully generic in (x, y).
class Cartan2 final : public SpaceImpl<Cartan2> {
 public:
  Cartan2() : SpaceImpl("cartan2", 2, "cartan", DomainBox{}) {}

  template <class S>
  void frameT(std::span<const S> x, std::span<const S> y, Nd<S>& Lh,
              Nd<S>& Lv) const {
    Lh = identity_block<S>(2);
    Lh(0, 0) += 0.1 * sin(x[0] + y[0]);
    Lh(0, 1) += 0.1 * cos(x[1] - y[1]);
    Lh(1, 0) += 0.1 * sin(x[1] + y[1]);
    Lh(1, 1) += 0.1 * cos(x[0] - y[0]);
    S th = x[0] + x[1];
    Lv = Nd<S>(std::vector<int>{2, 2});
    Lv(0, 0) = cos(th);
    Lv(0, 1) = -sin(th);
    Lv(1, 0) = sin(th);
    Lv(1, 1) = cos(th);
  }
  template <class S>
  void nlcT(std::span<const S>, std::span<const S> y, Nd<S>& N) const {
    N = Nd<S>(std::vector<int>{2, 2});
    for (int mu = 0; mu < 2; ++mu) {
      N(0, mu) = -y[1];
      N(1, mu) = y[0];
    }
  }
};

// Both frame blocks depend on the base only; N is linear in the fiber with
// coefficient equal to the vertical frame's base connection, plus an affine
// part phi(x) that breaks the fiber-spray compatibility.
class Berwald2 final : public SpaceImpl<Berwald2> {
 public:
  Berwald2() : SpaceImpl("berwald2", 2, "berwald", DomainBox{}) {}

  template <class S>
  void frameT(std::span<const S> x, std::span<const S>, Nd<S>& Lh,
              Nd<S>& Lv) const {
    Lh = identity_block<S>(2);
    Lv = identity_block<S>(2);
    Lh(0, 0) += 0.1 * sin(x[0] + x[1]);
    Lh(0, 1) += 0.1 * cos(x[0]);
    Lh(1, 0) += 0.1 * sin(x[1]);
    Lh(1, 1) += 0.1 * cos(x[0] - x[1]);
    Lv(0, 0) += 0.1 * cos(x[0] + x[1]);
    Lv(0, 1) += 0.1 * sin(x[0]);
    Lv(1, 0) += 0.1 * cos(x[1]);
    Lv(1, 1) += 0.1 * sin(x[0] - x[1]);
  }
  template <class S>
  void nlcT(std::span<const S> x, std::span<const S> y, Nd<S>& N) const {
    Nd<S> G = vertical_base_connection<S>(*this, x);
    N = Nd<S>(std::vector<int>{2, 2});
    for (int a = 0; a < 2; ++a)
      for (int mu = 0; mu < 2; ++mu) {
        S acc{};
        for (int b = 0; b < 2; ++b) acc += y[b] * G(a, b, mu);
        N(a, mu) = acc;
      }
    N(0, 0) += 0.1 * sin(x[1]);
    N(0, 1) += 0.1 * cos(x[0]);
    N(1, 0) += 0.1 * sin(x[0] + x[1]);
    N(1, 1) += 0.1 * cos(x[0] - x[1]);
  }
};

// As Berwald2 but with N exactly the fiber-linear connection of the
// vertical frame, so the fiber-spray compatibility holds as well.
class Cb2 final : public SpaceImpl<Cb2> {
 public:
  Cb2() : SpaceImpl("cb2", 2, "cb", DomainBox{}) {}

  template <class S>
  void frameT(std::span<const S> x, std::span<const S>, Nd<S>& Lh,
              Nd<S>& Lv) const {
    Lh = identity_block<S>(2);
    Lv = identity_block<S>(2);
    Lh(0, 0) += 0.1 * sin(x[0]);
    Lh(0, 1) += 0.1 * cos(x[1]);
    Lh(1, 0) += 0.1 * sin(x[0] + x[1]);
    Lh(1, 1) += 0.1 * cos(x[0] + x[1]);
    Lv(0, 0) += 0.1 * cos(x[0]);
    Lv(0, 1) += 0.1 * sin(x[1]);
    Lv(1, 0) += 0.1 * cos(x[0] - x[1]);
    Lv(1, 1) += 0.05 * sin(x[0] + x[1]);
  }
  template <class S>
  void nlcT(std::span<const S> x, std::span<const S> y, Nd<S>& N) const {
    Nd<S> G = vertical_base_connection<S>(*this, x);
    N = Nd<S>(std::vector<int>{2, 2});
    for (int a = 0; a < 2; ++a)
      for (int mu = 0; mu < 2; ++mu) {
        S acc{};
        for (int b = 0; b < 2; ++b) acc += y[b] * G(a, b, mu);
        N(a, mu) = acc;
      }
  }
};

const FlatSpace kFlat{2};
const Generic2 kGeneric2;
const Cartan2 kCartan2;
const Berwald2 kBerwald2;
const Cb2 kCb2;

}  // namespace

void check_point(const Space& sp, const SpacePoint& p) {
  int n = sp.dim();
  if (static_cast<int>(p.x.size()) != n || static_cast<int>(p.y.size()) != n)
    throw EvaluationDomainError("point arity does not match space dimension " +
                                std::to_string(n));
  double r2 = 0.0;
  for (double v : p.y) r2 += v * v;
  double r = std::sqrt(r2);
  if (r < 1e-12)
    throw EvaluationDomainError("fiber point lies on the excluded zero section");
  const DomainBox& b = sp.domain();
  for (double v : p.x)
    if (v < b.x_lo || v > b.x_hi)
      throw PointOutsideDomain("base coordinate outside [" +
                               std::to_string(b.x_lo) + ", " +
                               std::to_string(b.x_hi) + "]");
  if (r < b.r_min || r > b.r_max)
    throw PointOutsideDomain("fiber norm outside the annulus [" +
                             std::to_string(b.r_min) + ", " +
                             std::to_string(b.r_max) + "]");
}

FramePair evaluate_frame(const Space& sp, const SpacePoint& p) {
  check_point(sp, p);
  FramePair fr;
  sp.frame(std::span<const double>(p.x), std::span<const double>(p.y), fr.Lh,
           fr.Lv);
  return fr;
}

Nd<double> evaluate_nlc(const Space& sp, const SpacePoint& p) {
  check_point(sp, p);
  Nd<double> N;
  sp.nlc(std::span<const double>(p.x), std::span<const double>(p.y), N);
  return N;
}

const Space& builtin_space(const std::string& name) {
  for (const Space* sp : builtin_spaces())
    if (sp->name() == name) return *sp;
  throw UnknownSpace("unknown space '" + name + "'");
}

std::vector<const Space*> builtin_spaces() {
  return {&kFlat, &kGeneric2, &kCartan2, &kBerwald2, &kCb2};
}

std::shared_ptr<const Space> make_flat(int n) {
  return std::make_shared<FlatSpace>(n, "flat" + std::to_string(n));
}

std::shared_ptr<const Space> make_generic(int n) {
  if (n == 2) return std::shared_ptr<const Space>(&kGeneric2, [](const Space*) {});
  if (n == 3) return std::make_shared<Generic3>();
  throw UnknownSpace("no generic space of dimension " + std::to_string(n));
}

std::vector<SpacePoint> sample_points(const Space& sp, int count,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    // 53 uniform mantissa bits; identical across platforms.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  const DomainBox& b = sp.domain();
  int n = sp.dim();
  std::vector<SpacePoint> pts;
  pts.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(pts.size()) < count) {
    SpacePoint p;
    p.x.resize(static_cast<std::size_t>(n));
    p.y.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      p.x[static_cast<std::size_t>(k)] = b.x_lo + uniform() * (b.x_hi - b.x_lo);
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) {
      double v = -b.r_max + uniform() * 2.0 * b.r_max;
      p.y[static_cast<std::size_t>(k)] = v;
      r2 += v * v;
    }
    double r = std::sqrt(r2);
    if (r < b.r_min || r > b.r_max) continue;
    pts.push_back(std::move(p));
  }
  return pts;
}

FrameConditionReport frame_condition_report(const Space& sp, int count,
                                            std::uint64_t seed) {
  FrameConditionReport rep;
  rep.min_abs_det_h = rep.min_abs_det_v = 1e300;
  for (const SpacePoint& p : sample_points(sp, count, seed)) {
    FramePair fr = evaluate_frame(sp, p);
    CoFramePair co = invert_frame(fr);
    rep.min_abs_det_h = std::min(rep.min_abs_det_h, std::fabs(co.det_h));
    rep.min_abs_det_v = std::min(rep.min_abs_det_v, std::fabs(co.det_v));
    double ch = frobenius(fr.Lh) * frobenius(co.Ch);
    double cv = frobenius(fr.Lv) * frobenius(co.Cv);
    rep.max_condition = std::max({rep.max_condition, ch, cv});
  }
  return rep;
}

}  // namespace eaplab
