#pragma once

/**
 * @file dual.hpp
 * @brief Forward-mode differentiation scalars, nested for higher orders.
 *
 * A Dual<T> carries a value and one vector of partial derivatives with
 * respect to a set of seeded coordinate slots.  Nesting (Dual<Dual<double>>)
 * yields exact second derivatives; the mixed-partial matrix extracted from a
 * nested dual is symmetric by construction of the arithmetic.
 *
 * An empty partial vector means "no dependence on any seed" and acts as a
 * vector of zeros.  This lets plain literals enter expressions without
 * knowing how many slots were seeded.
 */

#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace eaplab {

template <class T>
struct Dual {
  using inner = T;

  T f{};
  std::vector<T> d{};

  Dual() = default;
  Dual(double v) : f(v) {}
  Dual(T v, std::vector<T> g) : f(std::move(v)), d(std::move(g)) {}
};

using J0 = double;
using J1 = Dual<double>;
using J2 = Dual<Dual<double>>;

template <class S>
struct lower_level;
template <class T>
struct lower_level<Dual<T>> {
  using type = T;
};
template <class S>
using lower_t = typename lower_level<S>::type;
template <class S>
using up_t = Dual<S>;

namespace detail {
template <class T>
inline T dual_at(const std::vector<T>& v, std::size_t i) {
  return i < v.size() ? v[i] : T{};
}
}  // namespace detail

template <class T>
inline Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.f = a.f + b.f;
  std::size_t m = std::max(a.d.size(), b.d.size());
  r.d.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    r.d[i] = detail::dual_at(a.d, i) + detail::dual_at(b.d, i);
  return r;
}

template <class T>
inline Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.f = a.f - b.f;
  std::size_t m = std::max(a.d.size(), b.d.size());
  r.d.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    r.d[i] = detail::dual_at(a.d, i) - detail::dual_at(b.d, i);
  return r;
}

template <class T>
inline Dual<T> operator-(const Dual<T>& a) {
  Dual<T> r;
  r.f = -a.f;
  r.d.resize(a.d.size());
  for (std::size_t i = 0; i < a.d.size(); ++i) r.d[i] = -a.d[i];
  return r;
}

template <class T>
inline Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.f = a.f * b.f;
  std::size_t m = std::max(a.d.size(), b.d.size());
  r.d.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    r.d[i] = detail::dual_at(a.d, i) * b.f + a.f * detail::dual_at(b.d, i);
  return r;
}

template <class T>
inline Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.f = a.f / b.f;
  std::size_t m = std::max(a.d.size(), b.d.size());
  r.d.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    r.d[i] = (detail::dual_at(a.d, i) - r.f * detail::dual_at(b.d, i)) / b.f;
  return r;
}

template <class T>
inline Dual<T> operator+(const Dual<T>& a, double b) { return a + Dual<T>(b); }
template <class T>
inline Dual<T> operator+(double a, const Dual<T>& b) { return Dual<T>(a) + b; }
template <class T>
inline Dual<T> operator-(const Dual<T>& a, double b) { return a - Dual<T>(b); }
template <class T>
inline Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(a) - b; }
template <class T>
inline Dual<T> operator*(const Dual<T>& a, double b) { return a * Dual<T>(b); }
template <class T>
inline Dual<T> operator*(double a, const Dual<T>& b) { return Dual<T>(a) * b; }
template <class T>
inline Dual<T> operator/(const Dual<T>& a, double b) { return a / Dual<T>(b); }
template <class T>
inline Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }

template <class T>
inline Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) { a = a + b; return a; }
template <class T>
inline Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) { a = a - b; return a; }
template <class T>
inline Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b) { a = a * b; return a; }

using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;

template <class T>
inline Dual<T> sin(const Dual<T>& a) {
  Dual<T> r;
  r.f = sin(a.f);
  T c = cos(a.f);
  r.d.resize(a.d.size());
  for (std::size_t i = 0; i < a.d.size(); ++i) r.d[i] = a.d[i] * c;
  return r;
}

template <class T>
inline Dual<T> cos(const Dual<T>& a) {
  Dual<T> r;
  r.f = cos(a.f);
  T s = sin(a.f);
  r.d.resize(a.d.size());
  for (std::size_t i = 0; i < a.d.size(); ++i) r.d[i] = -(a.d[i] * s);
  return r;
}

template <class T>
inline Dual<T> exp(const Dual<T>& a) {
  Dual<T> r;
  r.f = exp(a.f);
  r.d.resize(a.d.size());
  for (std::size_t i = 0; i < a.d.size(); ++i) r.d[i] = a.d[i] * r.f;
  return r;
}

template <class T>
inline Dual<T> log(const Dual<T>& a) {
  Dual<T> r;
  r.f = log(a.f);
  r.d.resize(a.d.size());
  for (std::size_t i = 0; i < a.d.size(); ++i) r.d[i] = a.d[i] / a.f;
  return r;
}

template <class T>
inline Dual<T> sqrt(const Dual<T>& a) {
  Dual<T> r;
  r.f = sqrt(a.f);
  r.d.resize(a.d.size());
  for (std::size_t i = 0; i < a.d.size(); ++i)
    r.d[i] = a.d[i] / (2.0 * r.f);
  return r;
}

/// Magnitude of the value part, used for pivot selection.
inline double mag(double x) { return std::fabs(x); }
template <class T>
inline double mag(const Dual<T>& a) { return mag(a.f); }

inline double scalar_of(double x) { return x; }
template <class T>
inline double scalar_of(const Dual<T>& a) { return scalar_of(a.f); }

/// Truncate one derivative level: the value part.
template <class T>
inline T value_of(const Dual<T>& a) { return a.f; }

/// Partial derivative with respect to seeded slot `i`, one level down.
template <class T>
inline T partial(const Dual<T>& a, int i) {
  return detail::dual_at(a.d, static_cast<std::size_t>(i));
}

/// Lift a coordinate value to level S as the variable in slot `slot`
/// out of `m` seeded slots.  Every nesting level is seeded so that
/// repeated `partial` extraction yields true higher derivatives.
template <class S>
S seed(double v, int slot, int m) {
  if constexpr (std::is_same_v<S, double>) {
    (void)slot;
    (void)m;
    return v;
  } else {
    S s;
    s.f = seed<typename S::inner>(v, slot, m);
    s.d.assign(static_cast<std::size_t>(m), typename S::inner{});
    s.d[static_cast<std::size_t>(slot)] = typename S::inner(1.0);
    return s;
  }
}

/// Lift a full coordinate tuple (x then y) to level S with identity seeding.
template <class S>
std::vector<S> seed_point(std::span<const double> x, std::span<const double> y) {
  int m = static_cast<int>(x.size() + y.size());
  std::vector<S> c;
  c.reserve(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < x.size(); ++i)
    c.push_back(seed<S>(x[i], static_cast<int>(i), m));
  for (std::size_t i = 0; i < y.size(); ++i)
    c.push_back(seed<S>(y[i], static_cast<int>(x.size() + i), m));
  return c;
}

/// Value, gradient and Hessian of a scalar evaluator at one point.
/// Slot order is the n base coordinates followed by the n fiber coordinates.
struct Jet {
  double value = 0.0;
  std::vector<double> grad;
  std::vector<std::vector<double>> hess;
};

template <class F>
Jet jet_evaluate(F&& f, std::span<const double> x, std::span<const double> y) {
  int m = static_cast<int>(x.size() + y.size());
  std::vector<J2> c = seed_point<J2>(x, y);
  std::span<const J2> cs(c);
  J2 r = f(cs.first(x.size()), cs.subspan(x.size()));
  Jet out;
  out.value = scalar_of(r);
  out.grad.resize(static_cast<std::size_t>(m));
  out.hess.assign(static_cast<std::size_t>(m),
                  std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (int i = 0; i < m; ++i) {
    J1 gi = partial(r, i);
    out.grad[static_cast<std::size_t>(i)] = value_of(gi);
    for (int j = 0; j < m; ++j)
      out.hess[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          partial(gi, j);
  }
  return out;
}

/// Central finite difference in one coordinate slot; reference oracle only.
template <class F>
double fd_partial(F&& f, std::span<const double> x, std::span<const double> y,
                  int slot, double h = 1e-5) {
  std::vector<double> xp(x.begin(), x.end()), yp(y.begin(), y.end());
  std::vector<double> xm(x.begin(), x.end()), ym(y.begin(), y.end());
  int n = static_cast<int>(x.size());
  if (slot < n) {
    xp[slot] += h;
    xm[slot] -= h;
  } else {
    yp[slot - n] += h;
    ym[slot - n] -= h;
  }
  return (f(std::span<const double>(xp), std::span<const double>(yp)) -
          f(std::span<const double>(xm), std::span<const double>(ym))) /
         (2.0 * h);
}

/// Central second difference; h defaults looser since the error is O(h^2)
/// on a quantity divided by h^2.
template <class F>
double fd_partial2(F&& f, std::span<const double> x, std::span<const double> y,
                   int s1, int s2, double h = 1e-3) {
  auto shift = [&](int slot, double dh, std::vector<double>& xs,
                   std::vector<double>& ys) {
    int n = static_cast<int>(x.size());
    if (slot < n)
      xs[slot] += dh;
    else
      ys[slot - n] += dh;
  };
  if (s1 == s2) {
    std::vector<double> xp(x.begin(), x.end()), yp(y.begin(), y.end());
    std::vector<double> xm(x.begin(), x.end()), ym(y.begin(), y.end());
    shift(s1, h, xp, yp);
    shift(s1, -h, xm, ym);
    return (f(std::span<const double>(xp), std::span<const double>(yp)) -
            2.0 * f(x, y) +
            f(std::span<const double>(xm), std::span<const double>(ym))) /
           (h * h);
  }
  double acc = 0.0;
  for (int sa : {+1, -1}) {
    for (int sb : {+1, -1}) {
      std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
      shift(s1, sa * h, xs, ys);
      shift(s2, sb * h, xs, ys);
      acc += sa * sb *
             f(std::span<const double>(xs), std::span<const double>(ys));
    }
  }
  return acc / (4.0 * h * h);
}

}  // namespace eaplab
