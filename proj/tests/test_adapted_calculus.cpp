#include "doctest.h"

#include "eaplab/calculus.hpp"
#include "eaplab/metric.hpp"

using namespace eaplab;

namespace {

const SpacePoint kP{{0.3, -0.2}, {0.7, 0.9}};

// scalar field with genuine x/y coupling, used by the derivative checks
template <class S>
S probe(std::span<const S> x, std::span<const S> y) {
  return sin(x[0] + 2.0 * y[1]) * y[0] + exp(0.2 * x[1] * y[0]);
}

}  // namespace

TEST_CASE("adapted base derivative matches a finite-difference assembly") {
  const Space& sp = builtin_space("generic2");
  auto f = [](std::span<const J1> x, std::span<const J1> y) {
    return probe<J1>(x, y);
  };
  auto f0 = [](std::span<const double> x, std::span<const double> y) {
    return probe<double>(x, y);
  };
  Nd<double> nv = evaluate_nlc(sp, kP);
  int n = sp.dim();
  for (int mu = 0; mu < n; ++mu) {
    double lhs = delta_derivative(f, sp, kP, mu);
    double rhs = fd_partial(f0, kP.x, kP.y, mu);
    for (int b = 0; b < n; ++b)
      rhs -= nv(b, mu) * fd_partial(f0, kP.x, kP.y, n + b);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    CHECK(std::fabs(lhs) > 1e-3);  // non-vacuous
  }
}

TEST_CASE("adapted derivative reduces to the plain one on base-only fields") {
  const Space& sp = builtin_space("generic2");
  auto f = [](std::span<const J1> x, std::span<const J1>) {
    return cos(x[0]) * x[1];
  };
  auto f0 = [](std::span<const double> x, std::span<const double>) {
    return cos(x[0]) * x[1];
  };
  for (int mu = 0; mu < 2; ++mu) {
    double lhs = delta_derivative(f, sp, kP, mu);
    double rhs = fd_partial(f0, kP.x, kP.y, mu);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("commutator of adapted derivatives is driven by the nlc curvature") {
  const Space& sp = builtin_space("generic2");
  FrameCtx<J2> c = make_ctx<J2>(sp, kP);
  int n = c.n;

  Nd<J2> F(std::vector<int>{1});
  {
    std::span<const J2> cs(c.coords);
    F(0) = probe<J2>(cs.first(n), cs.subspan(n));
  }
  Nd<J1> nv1 = values(c.N);
  Nd<J0> nv0 = values(nv1);
  Nd<J1> F1 = delta_all(F, nv1, n);        // (0, mu) = delta_mu f
  Nd<J0> F2 = delta_all(F1, nv0, n);       // (0, mu, nu) = delta_nu delta_mu f
  Nd<J0> vf = vpartial_all(values(F), n);  // (0, b) = vdot_b f
  Nd<J0> R = nlc_curvature(sp, kP);

  CHECK(max_abs(R) > 1e-3);  // the commutator test must not be vacuous here
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      double lhs = F2(0, nu, mu) - F2(0, mu, nu);
      double rhs = 0.0;
      for (int b = 0; b < n; ++b) rhs += R(b, mu, nu) * vf(0, b);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
}

TEST_CASE("nlc curvature is antisymmetric and vanishes where it should") {
  for (const char* name : {"flat", "cartan2"}) {
    const Space& sp = builtin_space(name);
    for (const SpacePoint& p : sample_points(sp, 6, 7)) {
      Nd<double> R = nlc_curvature(sp, p);
      CHECK(max_abs(R) < 1e-12);
    }
  }
  for (const char* name : {"generic2", "berwald2", "cb2"}) {
    const Space& sp = builtin_space(name);
    for (const SpacePoint& p : sample_points(sp, 6, 7)) {
      Nd<double> R = nlc_curvature(sp, p);
      CHECK(max_abs(R + transpose_last2(R)) == 0.0);
    }
  }
}

TEST_CASE("covariant kernel matches a hand-expanded mixed derivative") {
  const Space& sp = builtin_space("generic2");
  FrameCtx<J1> c = make_ctx<J1>(sp, kP);
  int n = c.n;
  Nd<J0> nv = values(c.N);
  ConnectionCoefficients<J0> D = natural_connection(c);

  // genuine rank-2 field T(u, s) = lambda_0^u * lambda_1_s with an upper
  // horizontal and a lower vertical slot
  Nd<J1> T(std::vector<int>{n, n});
  for (int u = 0; u < n; ++u)
    for (int s = 0; s < n; ++s) T(u, s) = c.Ah(0, u) * c.Bv(1, s);

  Signature sig{slot_h_up(), slot_v_low()};
  Nd<J0> got_h = h_covariant_derivative(T, sig, 0, D, nv, n);
  Nd<J0> got_v = v_covariant_derivative(T, sig, 0, D, nv, n);

  Nd<J0> dT = delta_all(T, nv, n);
  Nd<J0> vT = vpartial_all(T, n);
  Nd<J0> Tv = values(T);
  for (int u = 0; u < n; ++u)
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < n; ++m) {
        double eh = dT(u, s, m);
        double ev = vT(u, s, m);
        for (int e = 0; e < n; ++e) {
          eh += Tv(e, s) * D.G_hh(u, e, m) - Tv(u, e) * D.G_vv_h(e, s, m);
          ev += Tv(e, s) * D.C_hh_v(u, e, m) - Tv(u, e) * D.C_vv_v(e, s, m);
        }
        CHECK(got_h(u, s, m) == doctest::Approx(eh).epsilon(1e-14));
        CHECK(got_v(u, s, m) == doctest::Approx(ev).epsilon(1e-14));
      }
}

TEST_CASE("inert leading axes only stack independent slices") {
  const Space& sp = builtin_space("generic2");
  FrameCtx<J1> c = make_ctx<J1>(sp, kP);
  int n = c.n;
  Nd<J0> nv = values(c.N);
  ConnectionCoefficients<J0> D = natural_connection(c);

  Signature one{slot_h_low()};
  Nd<J0> full = h_covariant_derivative(c.Bh, one, 1, D, nv, n);
  for (int i = 0; i < n; ++i) {
    Nd<J1> row(std::vector<int>{n});
    for (int s = 0; s < n; ++s) row(s) = c.Bh(i, s);
    Nd<J0> sliced = h_covariant_derivative(row, one, 0, D, nv, n);
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < n; ++m)
        CHECK(full(i, s, m) == doctest::Approx(sliced(s, m)).epsilon(1e-15));
  }
}

TEST_CASE("signature arity is enforced") {
  const Space& sp = builtin_space("generic2");
  FrameCtx<J1> c = make_ctx<J1>(sp, kP);
  Nd<J0> nv = values(c.N);
  ConnectionCoefficients<J0> D = natural_connection(c);
  Signature two{slot_h_low(), slot_h_low()};
  CHECK_THROWS_AS(h_covariant_derivative(c.Bh, two, 1, D, nv, c.n),
                  SignatureMismatch);
}
