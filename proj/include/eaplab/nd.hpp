#pragma once

/**
 * @file nd.hpp
 * @brief Small dense multi-index array used for coefficient blocks.
 *
 * Row-major storage, runtime rank up to kMaxRank.  Component counts here are
 * tiny (dimension 2 or 3, rank at most 6 including a mesh axis and a
 * derivative axis), so everything is plain loops over std::vector storage.
 */

#include <array>
#include <cassert>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "eaplab/dual.hpp"

namespace eaplab {

inline constexpr int kMaxRank = 6;

template <class T>
class Nd {
 public:
  Nd() = default;
  explicit Nd(std::vector<int> shape) : shape_(std::move(shape)) {
    assert(shape_.size() <= kMaxRank);
    std::size_t total = 1;
    for (int s : shape_) total *= static_cast<std::size_t>(s);
    strides_.assign(shape_.size(), 1);
    for (int i = static_cast<int>(shape_.size()) - 2; i >= 0; --i)
      strides_[i] = strides_[i + 1] * shape_[i + 1];
    data_.assign(total, T{});
  }

  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  template <class... I>
  T& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    return data_[offset(idx...)];
  }

  T& at(std::span<const int> idx) { return data_[offset_span(idx)]; }
  const T& at(std::span<const int> idx) const { return data_[offset_span(idx)]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  T& flat(std::size_t i) { return data_[i]; }
  const T& flat(std::size_t i) const { return data_[i]; }

 private:
  template <class... I>
  std::size_t offset(I... idx) const {
    assert(sizeof...(I) == shape_.size());
    std::size_t off = 0;
    std::size_t k = 0;
    ((off += static_cast<std::size_t>(idx) * strides_[k++]), ...);
    return off;
  }
  std::size_t offset_span(std::span<const int> idx) const {
    assert(idx.size() == shape_.size());
    std::size_t off = 0;
    for (std::size_t k = 0; k < idx.size(); ++k)
      off += static_cast<std::size_t>(idx[k]) * strides_[k];
    return off;
  }

  std::vector<int> shape_;
  std::vector<std::size_t> strides_;
  std::vector<T> data_;
};

/// Visit every multi-index of `shape` in row-major order.
inline void for_each_index(std::span<const int> shape,
                           const std::function<void(std::span<const int>)>& fn) {
  std::array<int, kMaxRank> idx{};
  int r = static_cast<int>(shape.size());
  if (r == 0) {
    fn({});
    return;
  }
  for (;;) {
    fn(std::span<const int>(idx.data(), static_cast<std::size_t>(r)));
    int k = r - 1;
    while (k >= 0) {
      if (++idx[k] < shape[k]) break;
      idx[k] = 0;
      --k;
    }
    if (k < 0) return;
  }
}

/// Elementwise truncation to the value part, one level down.
template <class T>
Nd<T> values(const Nd<Dual<T>>& a) {
  Nd<T> r(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) r.flat(i) = value_of(a.flat(i));
  return r;
}

/// Elementwise partial with respect to seeded slot `slot`, one level down.
template <class T>
Nd<T> partials(const Nd<Dual<T>>& a, int slot) {
  Nd<T> r(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) r.flat(i) = partial(a.flat(i), slot);
  return r;
}

inline double max_abs(const Nd<double>& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double v = std::fabs(a.flat(i));
    if (v > m) m = v;
  }
  return m;
}

inline double max_abs_diff(const Nd<double>& a, const Nd<double>& b) {
  assert(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double v = std::fabs(a.flat(i) - b.flat(i));
    if (v > m) m = v;
  }
  return m;
}

inline double frobenius(const Nd<double>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.flat(i) * a.flat(i);
  return std::sqrt(s);
}

template <class T>
Nd<T> operator+(const Nd<T>& a, const Nd<T>& b) {
  assert(a.shape() == b.shape());
  Nd<T> r(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) r.flat(i) = a.flat(i) + b.flat(i);
  return r;
}

template <class T>
Nd<T> operator-(const Nd<T>& a, const Nd<T>& b) {
  assert(a.shape() == b.shape());
  Nd<T> r(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) r.flat(i) = a.flat(i) - b.flat(i);
  return r;
}

template <class T>
Nd<T> scaled(const Nd<T>& a, double c) {
  Nd<T> r(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) r.flat(i) = a.flat(i) * c;
  return r;
}

/// Swap the last two axes.
template <class T>
Nd<T> transpose_last2(const Nd<T>& a) {
  std::vector<int> shp = a.shape();
  int r = a.rank();
  assert(r >= 2);
  std::swap(shp[r - 2], shp[r - 1]);
  Nd<T> out(shp);
  for_each_index(shp, [&](std::span<const int> idx) {
    std::array<int, kMaxRank> src{};
    for (int k = 0; k < r; ++k) src[k] = idx[k];
    std::swap(src[r - 2], src[r - 1]);
    out.at(idx) = a.at(std::span<const int>(src.data(), static_cast<std::size_t>(r)));
  });
  return out;
}

/// In-place Gauss-Jordan inverse of an n-by-n matrix of scalars.
/// Pivots are chosen by the magnitude of the value part.  Returns the
/// smallest pivot magnitude encountered so callers can detect near-singular
/// input; the determinant (of the value part) is written to det_out.
template <class T>
double invert_matrix(Nd<T>& m, double* det_out = nullptr) {
  int n = m.shape()[0];
  assert(m.rank() == 2 && m.shape()[1] == n);
  Nd<T> inv(std::vector<int>{n, n});
  for (int i = 0; i < n; ++i) inv(i, i) = T(1.0);
  double min_pivot = -1.0;
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (mag(m(r, col)) > mag(m(piv, col))) piv = r;
    if (piv != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(m(piv, c), m(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
      det = -det;
    }
    double p = mag(m(col, col));
    if (min_pivot < 0.0 || p < min_pivot) min_pivot = p;
    det *= scalar_of(m(col, col));
    T pivot = m(col, col);
    for (int c = 0; c < n; ++c) {
      m(col, c) = m(col, c) / pivot;
      inv(col, c) = inv(col, c) / pivot;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      T factor = m(r, col);
      if (mag(factor) == 0.0 && std::is_same_v<T, double>) continue;
      for (int c = 0; c < n; ++c) {
        m(r, c) = m(r, c) - factor * m(col, c);
        inv(r, c) = inv(r, c) - factor * inv(col, c);
      }
    }
  }
  if (det_out) *det_out = det;
  m = inv;
  return min_pivot;
}

}  // namespace eaplab
