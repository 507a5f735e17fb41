#pragma once

/**
 * @file calculus.hpp
 * @brief Adapted derivatives on the slit tangent bundle.
 *
 * The adapted basis is (delta_mu, dot-partial_a) with
 * delta_mu = partial_mu - N(b, mu) dot-partial_b.  Tensor component blocks
 * carry a slot signature; one generic kernel produces the horizontal or
 * vertical covariant derivative of any block, with optional leading inert
 * axes (e.g. the mesh index of a frame field).
 *
 * Derivative bookkeeping: a block evaluated at scalar level Dual<T> is
 * differentiated once to produce a block at level T.  Connection
 * coefficients and N enter at the output level.
 */

#include <cstdint>
#include <vector>

#include "eaplab/spaces.hpp"

namespace eaplab {

enum class Kind : std::uint8_t { H, V };
enum class Variance : std::uint8_t { Up, Low };

struct Slot {
  Kind kind;
  Variance var;
};
using Signature = std::vector<Slot>;

inline Slot slot_h_up() { return {Kind::H, Variance::Up}; }
inline Slot slot_h_low() { return {Kind::H, Variance::Low}; }
inline Slot slot_v_up() { return {Kind::V, Variance::Up}; }
inline Slot slot_v_low() { return {Kind::V, Variance::Low}; }

/// A tensor component block at value level, with its slot signature.
struct TensorBlock {
  Signature sig;
  Nd<double> data;
};

/// Frame, inverse frame, nonlinear connection and metric blocks at one
/// point, all at scalar level S.  Mesh index comes first in Ah/Av/Bh/Bv.
template <class S>
struct FrameCtx {
  int n = 0;
  Nd<S> Ah, Av;  // raised blocks lambda_i{}^alpha, lambda_i{}^a
  Nd<S> Bh, Bv;  // lowered blocks lambda_i{}_alpha, lambda_i{}_a
  Nd<S> N;       // N(a, mu)
  Nd<S> gh, ghi, gv, gvi;
  std::vector<S> coords;  // seeded coordinates, x then y
  const Space* space = nullptr;
  SpacePoint point;
};

template <class S>
FrameCtx<S> make_ctx(const Space& sp, const SpacePoint& p) {
  check_point(sp, p);
  FrameCtx<S> c;
  c.n = sp.dim();
  c.space = &sp;
  c.point = p;
  c.coords = seed_point<S>(p.x, p.y);
  std::span<const S> cs(c.coords);
  auto xs = cs.first(p.x.size());
  auto ys = cs.subspan(p.x.size());
  FramePairT<S> fr;
  sp.frame(xs, ys, fr.Lh, fr.Lv);
  CoFramePairT<S> co = invert_frame(fr);
  c.Ah = std::move(fr.Lh);
  c.Av = std::move(fr.Lv);
  c.Bh = std::move(co.Ch);
  c.Bv = std::move(co.Cv);
  sp.nlc(xs, ys, c.N);
  int n = c.n;
  c.gh = Nd<S>(std::vector<int>{n, n});
  c.ghi = Nd<S>(std::vector<int>{n, n});
  c.gv = Nd<S>(std::vector<int>{n, n});
  c.gvi = Nd<S>(std::vector<int>{n, n});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      S gh{}, ghi{}, gv{}, gvi{};
      for (int i = 0; i < n; ++i) {
        gh += c.Bh(i, a) * c.Bh(i, b);
        ghi += c.Ah(i, a) * c.Ah(i, b);
        gv += c.Bv(i, a) * c.Bv(i, b);
        gvi += c.Av(i, a) * c.Av(i, b);
      }
      c.gh(a, b) = gh;
      c.ghi(a, b) = ghi;
      c.gv(a, b) = gv;
      c.gvi(a, b) = gvi;
    }
  return c;
}

/// Liouville field components y^a at the context's scalar level (seeded, so
/// fiber derivatives of it are exact).
template <class S>
Nd<S> liouville(const FrameCtx<S>& c) {
  Nd<S> y(std::vector<int>{c.n});
  for (int a = 0; a < c.n; ++a)
    y(a) = c.coords[static_cast<std::size_t>(c.n + a)];
  return y;
}

/// delta_mu applied elementwise to a block one level up; appends the
/// derivative axis. nlc_values must be at the output level.
template <class T>
Nd<T> delta_all(const Nd<Dual<T>>& a, const Nd<T>& nlc_values, int n) {
  std::vector<int> shp = a.shape();
  shp.push_back(n);
  Nd<T> out(shp);
  for (std::size_t e = 0; e < a.size(); ++e)
    for (int mu = 0; mu < n; ++mu) {
      T v = partial(a.flat(e), mu);
      for (int b = 0; b < n; ++b)
        v -= nlc_values(b, mu) * partial(a.flat(e), n + b);
      out.flat(e * static_cast<std::size_t>(n) + static_cast<std::size_t>(mu)) = v;
    }
  return out;
}

/// dot-partial_c applied elementwise; appends the derivative axis.
template <class T>
Nd<T> vpartial_all(const Nd<Dual<T>>& a, int n) {
  std::vector<int> shp = a.shape();
  shp.push_back(n);
  Nd<T> out(shp);
  for (std::size_t e = 0; e < a.size(); ++e)
    for (int c = 0; c < n; ++c)
      out.flat(e * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)) =
          partial(a.flat(e), n + c);
  return out;
}

/// Adapted base derivative of a scalar evaluator at a point.
template <class F>
double delta_derivative(F&& f, const Space& sp, const SpacePoint& p, int mu) {
  check_point(sp, p);
  std::vector<J1> c = seed_point<J1>(p.x, p.y);
  std::span<const J1> cs(c);
  J1 r = f(cs.first(p.x.size()), cs.subspan(p.x.size()));
  Nd<double> nv = evaluate_nlc(sp, p);
  int n = sp.dim();
  double v = partial(r, mu);
  for (int b = 0; b < n; ++b) v -= nv(b, mu) * partial(r, n + b);
  return v;
}

/// Curvature of the nonlinear connection,
/// R(a, mu, nu) = delta_nu N(a, mu) - delta_mu N(a, nu);
/// antisymmetric in the last two axes by construction.
template <class T>
Nd<T> nlc_curvature(const FrameCtx<Dual<T>>& c) {
  Nd<T> nv = values(c.N);
  Nd<T> dN = delta_all(c.N, nv, c.n);  // [a][mu][nu] = delta_nu N(a, mu)
  Nd<T> R(std::vector<int>{c.n, c.n, c.n});
  for (int a = 0; a < c.n; ++a)
    for (int mu = 0; mu < c.n; ++mu)
      for (int nu = 0; nu < c.n; ++nu)
        R(a, mu, nu) = dN(a, mu, nu) - dN(a, nu, mu);
  return R;
}

inline Nd<double> nlc_curvature(const Space& sp, const SpacePoint& p) {
  FrameCtx<J1> c = make_ctx<J1>(sp, p);
  return nlc_curvature(c);
}

/// Connection coefficient blocks of one linear connection.
template <class S>
struct ConnectionCoefficients {
  Nd<S> G_hh;    // [alpha][mu][nu]
  Nd<S> G_vv_h;  // [a][b][nu]
  Nd<S> C_hh_v;  // [alpha][mu][c]
  Nd<S> C_vv_v;  // [a][b][c]
};

template <class T>
ConnectionCoefficients<T> values(const ConnectionCoefficients<Dual<T>>& D) {
  return {values(D.G_hh), values(D.G_vv_h), values(D.C_hh_v), values(D.C_vv_v)};
}

enum class Deriv : std::uint8_t { H, V };

/// Generic covariant derivative of a component block.
///
/// `comp` holds the components at one level up; the first `n_inert` axes are
/// carried along untouched (no connection term), the remaining axes follow
/// `sig`.  Appends the derivative axis.  The base part is delta_mu for
/// Deriv::H and dot-partial_c for Deriv::V; each signature slot contributes
/// +/- its connection block contraction per its kind and variance.
template <class T>
Nd<T> covariant_derivative(const Nd<Dual<T>>& comp, const Signature& sig,
                           int n_inert, Deriv dir,
                           const ConnectionCoefficients<T>& D,
                           const Nd<T>& nlc_values, int n) {
  if (comp.rank() != n_inert + static_cast<int>(sig.size()))
    throw SignatureMismatch("component rank does not match signature");
  Nd<T> base = dir == Deriv::H ? delta_all(comp, nlc_values, n)
                               : vpartial_all(comp, n);
  Nd<T> vals = values(comp);
  std::vector<int> oshape = base.shape();
  Nd<T> out = base;
  for_each_index(oshape, [&](std::span<const int> oidx) {
    int m = oidx[oidx.size() - 1];
    std::array<int, kMaxRank> cidx{};
    int cr = comp.rank();
    for (int k = 0; k < cr; ++k) cidx[static_cast<std::size_t>(k)] = oidx[static_cast<std::size_t>(k)];
    std::span<const int> cspan(cidx.data(), static_cast<std::size_t>(cr));
    T acc = out.at(oidx);
    for (std::size_t s = 0; s < sig.size(); ++s) {
      int axis = n_inert + static_cast<int>(s);
      int is = cidx[static_cast<std::size_t>(axis)];
      const Nd<T>& coef =
          dir == Deriv::H
              ? (sig[s].kind == Kind::H ? D.G_hh : D.G_vv_h)
              : (sig[s].kind == Kind::H ? D.C_hh_v : D.C_vv_v);
      std::array<int, kMaxRank> tidx = cidx;
      for (int eps = 0; eps < n; ++eps) {
        tidx[static_cast<std::size_t>(axis)] = eps;
        const T& tv = vals.at(std::span<const int>(tidx.data(), static_cast<std::size_t>(cr)));
        if (sig[s].var == Variance::Up)
          acc += tv * coef(is, eps, m);
        else
          acc -= tv * coef(eps, is, m);
      }
    }
    out.at(oidx) = acc;
  });
  return out;
}

template <class T>
Nd<T> h_covariant_derivative(const Nd<Dual<T>>& comp, const Signature& sig,
                             int n_inert, const ConnectionCoefficients<T>& D,
                             const Nd<T>& nlc_values, int n) {
  return covariant_derivative(comp, sig, n_inert, Deriv::H, D, nlc_values, n);
}

template <class T>
Nd<T> v_covariant_derivative(const Nd<Dual<T>>& comp, const Signature& sig,
                             int n_inert, const ConnectionCoefficients<T>& D,
                             const Nd<T>& nlc_values, int n) {
  return covariant_derivative(comp, sig, n_inert, Deriv::V, D, nlc_values, n);
}

}  // namespace eaplab
