#include <cmath>
#include <span>
#include <vector>

#include "doctest.h"
#include "eaplab/dual.hpp"

using namespace eaplab;

namespace {

// Reference function with hand-written derivatives, independent of the dual
// arithmetic.  f = sin(x0) y1^2 + x1 y0.
struct Ref {
  static double value(double x0, double x1, double y0, double y1) {
    return std::sin(x0) * y1 * y1 + x1 * y0;
  }
  static std::vector<double> grad(double x0, double x1, double y0, double y1) {
    (void)x1;
    return {std::cos(x0) * y1 * y1, y0, x1, 2.0 * std::sin(x0) * y1};
  }
  static std::vector<std::vector<double>> hess(double x0, double x1, double y0,
                                               double y1) {
    (void)x1;
    (void)y0;
    std::vector<std::vector<double>> h(4, std::vector<double>(4, 0.0));
    h[0][0] = -std::sin(x0) * y1 * y1;
    h[0][3] = h[3][0] = 2.0 * std::cos(x0) * y1;
    h[1][2] = h[2][1] = 1.0;
    h[3][3] = 2.0 * std::sin(x0);
    return h;
  }
};

const auto f_ref = [](auto x, auto y) {
  return sin(x[0]) * y[1] * y[1] + x[1] * y[0];
};

// Deeper composite for chain/quotient rules: exp(0.3 sin(x0 + y1)) / (2 + x1 y0).
const auto f_deep = [](auto x, auto y) {
  return exp(0.3 * sin(x[0] + y[1])) / (2.0 + x[1] * y[0]);
};

double deep_value(double x0, double x1, double y0, double y1) {
  return std::exp(0.3 * std::sin(x0 + y1)) / (2.0 + x1 * y0);
}

}  // namespace

TEST_CASE("finite differences reproduce hand-written derivatives") {
  std::vector<double> x{0.4, -0.7}, y{1.1, 0.6};
  std::span<const double> xs(x), ys(y);
  auto g = Ref::grad(x[0], x[1], y[0], y[1]);
  for (int s = 0; s < 4; ++s)
    CHECK(std::fabs(fd_partial(f_ref, xs, ys, s) - g[s]) < 1e-8);
  auto h = Ref::hess(x[0], x[1], y[0], y[1]);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(std::fabs(fd_partial2(f_ref, xs, ys, i, j) - h[i][j]) < 1e-5);
}

TEST_CASE("jet evaluation matches hand-written derivatives exactly") {
  std::vector<double> x{0.4, -0.7}, y{1.1, 0.6};
  std::span<const double> xs(x), ys(y);
  Jet j = jet_evaluate(f_ref, xs, ys);
  CHECK(std::fabs(j.value - Ref::value(x[0], x[1], y[0], y[1])) < 1e-14);
  auto g = Ref::grad(x[0], x[1], y[0], y[1]);
  auto h = Ref::hess(x[0], x[1], y[0], y[1]);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::fabs(j.grad[i] - g[i]) < 1e-13);
    for (int k = 0; k < 4; ++k) CHECK(std::fabs(j.hess[i][k] - h[i][k]) < 1e-12);
  }
}

TEST_CASE("jet agrees with finite differences on a composite") {
  std::vector<double> x{-0.3, 0.8}, y{0.9, -0.5};
  std::span<const double> xs(x), ys(y);
  Jet j = jet_evaluate(f_deep, xs, ys);
  CHECK(std::fabs(j.value - deep_value(x[0], x[1], y[0], y[1])) < 1e-14);
  for (int s = 0; s < 4; ++s) {
    double fd = fd_partial(f_deep, xs, ys, s);
    CHECK(std::fabs(j.grad[s] - fd) <= 1e-5 * (1.0 + std::fabs(j.grad[s])));
  }
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      double fd = fd_partial2(f_deep, xs, ys, i, k);
      CHECK(std::fabs(j.hess[i][k] - fd) <= 2e-5 * (1.0 + std::fabs(j.hess[i][k])));
    }
}

TEST_CASE("jet hessian is symmetric") {
  std::vector<double> x{0.15, -0.45}, y{0.7, 1.2};
  Jet j = jet_evaluate(f_deep, std::span<const double>(x),
                       std::span<const double>(y));
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      CHECK(std::fabs(j.hess[i][k] - j.hess[k][i]) < 1e-12);
}

TEST_CASE("jet evaluation is linear in the evaluator") {
  std::vector<double> x{0.25, 0.5}, y{-0.8, 1.0};
  std::span<const double> xs(x), ys(y);
  auto combo = [](auto x_, auto y_) {
    return 2.5 * (sin(x_[0]) * y_[1] * y_[1] + x_[1] * y_[0]) -
           1.25 * (exp(0.3 * sin(x_[0] + y_[1])) / (2.0 + x_[1] * y_[0]));
  };
  Jet ja = jet_evaluate(f_ref, xs, ys);
  Jet jb = jet_evaluate(f_deep, xs, ys);
  Jet jc = jet_evaluate(combo, xs, ys);
  CHECK(std::fabs(jc.value - (2.5 * ja.value - 1.25 * jb.value)) < 1e-13);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::fabs(jc.grad[i] - (2.5 * ja.grad[i] - 1.25 * jb.grad[i])) < 1e-13);
    for (int k = 0; k < 4; ++k)
      CHECK(std::fabs(jc.hess[i][k] -
                      (2.5 * ja.hess[i][k] - 1.25 * jb.hess[i][k])) < 1e-12);
  }
}

TEST_CASE("dual quotient and sqrt chain through nesting") {
  auto f = [](auto x, auto y) {
    return sqrt(2.0 + x[0] * y[0]) / (1.0 + x[0] * x[0]);
  };
  std::vector<double> x{0.6}, y{1.3};
  std::span<const double> xs(x), ys(y);
  Jet j = jet_evaluate(f, xs, ys);
  // d/dx0 at (0.6, 1.3), hand-derived.
  double u = 2.0 + 0.6 * 1.3, w = 1.0 + 0.36;
  double du = 1.3, dw = 1.2;
  double expected = (0.5 * du / std::sqrt(u) * w - std::sqrt(u) * dw) / (w * w);
  CHECK(std::fabs(j.grad[0] - expected) < 1e-13);
  double fd = fd_partial2(f, xs, ys, 0, 1);
  CHECK(std::fabs(j.hess[0][1] - fd) <= 1e-5 * (1.0 + std::fabs(j.hess[0][1])));
}
