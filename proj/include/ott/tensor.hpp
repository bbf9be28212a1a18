#pragma once

// dense tensors of arbitrary order with the handful of operations the
// odeco machinery needs: mode contraction, self-contraction, symmetry
// residuals and norms; row-major storage, last index fastest

#include "scalars.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ott
{
  template <class T>
  class DenseTensor
  {
  public:
    DenseTensor() : dims_{}, data_(1, T{}) {} // order-0 scalar

    explicit DenseTensor(std::vector<std::size_t> dims) : dims_(std::move(dims))
    {
      std::size_t sz = 1;
      for( std::size_t d : dims_ )
      {
        if( d == 0 )
          throw std::invalid_argument("DenseTensor: zero-length mode");
        sz *= d;
      }
      data_.assign(sz, T{});
    }

    std::size_t order() const { return dims_.size(); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }

    T& operator[](std::size_t flat) { return data_[flat]; }
    const T& operator[](std::size_t flat) const { return data_[flat]; }

    std::size_t offset(std::span<const std::size_t> idx) const
    {
      std::size_t off = 0;
      for( std::size_t k = 0; k < dims_.size(); ++k )
        off = off * dims_[k] + idx[k];
      return off;
    }

    T& at(std::span<const std::size_t> idx) { return data_[checked_offset(idx)]; }
    const T& at(std::span<const std::size_t> idx) const { return data_[checked_offset(idx)]; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool operator==(const DenseTensor&) const = default;

  private:
    std::size_t checked_offset(std::span<const std::size_t> idx) const
    {
      if( idx.size() != dims_.size() )
        throw std::invalid_argument("DenseTensor::at: index order mismatch");
      for( std::size_t k = 0; k < dims_.size(); ++k )
        if( idx[k] >= dims_[k] )
          throw std::out_of_range("DenseTensor::at: index out of range");
      return offset(idx);
    }

    std::vector<std::size_t> dims_;
    std::vector<T> data_;
  };

  // odometer step in row-major order; returns false after the last index
  inline bool advance_index(std::vector<std::size_t>& idx, std::span<const std::size_t> dims)
  {
    for( std::size_t k = idx.size(); k-- > 0; )
    {
      if( ++idx[k] < dims[k] )
        return true;
      idx[k] = 0;
    }
    return false;
  }

  inline std::vector<std::size_t> row_major_strides(const std::vector<std::size_t>& dims)
  {
    std::vector<std::size_t> s(dims.size(), 1);
    for( std::size_t k = dims.size(); k-- > 1; )
      s[k - 1] = s[k] * dims[k];
    return s;
  }

  // single-mode contraction: sum_c a[..., c, ...] * b[..., c, ...] over
  // mode_a of a and mode_b of b; result modes are a's (without mode_a)
  // followed by b's (without mode_b)
  template <class T>
  DenseTensor<T> contract(const DenseTensor<T>& a, const DenseTensor<T>& b,
                          std::size_t mode_a, std::size_t mode_b)
  {
    if( mode_a >= a.order() || mode_b >= b.order() )
      throw std::invalid_argument("contract: mode index out of range");
    if( a.dims()[mode_a] != b.dims()[mode_b] )
      throw std::invalid_argument("contract: contracted mode lengths differ");

    const std::vector<std::size_t> sa = row_major_strides(a.dims());
    const std::vector<std::size_t> sb = row_major_strides(b.dims());
    const std::size_t nc = a.dims()[mode_a];

    std::vector<std::size_t> rdims;
    rdims.reserve(a.order() + b.order() - 2);
    for( std::size_t k = 0; k < a.order(); ++k )
      if( k != mode_a )
        rdims.push_back(a.dims()[k]);
    for( std::size_t k = 0; k < b.order(); ++k )
      if( k != mode_b )
        rdims.push_back(b.dims()[k]);

    DenseTensor<T> r(rdims);
    std::vector<std::size_t> idx(rdims.size(), 0);
    std::size_t flat = 0;
    do
    {
      std::size_t off_a = 0, off_b = 0, pos = 0;
      for( std::size_t k = 0; k < a.order(); ++k )
        if( k != mode_a )
          off_a += idx[pos++] * sa[k];
      for( std::size_t k = 0; k < b.order(); ++k )
        if( k != mode_b )
          off_b += idx[pos++] * sb[k];
      T acc{};
      for( std::size_t c = 0; c < nc; ++c )
        acc += a[off_a + c * sa[mode_a]] * b[off_b + c * sb[mode_b]];
      r[flat++] = acc;
    } while( advance_index(idx, rdims) );
    return r;
  }

  // contraction of t with itself over mode q in both copies
  template <class T>
  DenseTensor<T> self_contract(const DenseTensor<T>& t, std::size_t q)
  {
    return contract(t, t, q, q);
  }

  template <class T>
  double frobenius_norm(const DenseTensor<T>& t)
  {
    double acc = 0;
    for( std::size_t i = 0; i < t.size(); ++i )
    {
      const double v = to_double(t[i]);
      acc += v * v;
    }
    return std::sqrt(acc);
  }

  template <class T>
  T max_abs(const DenseTensor<T>& t)
  {
    T m{};
    for( std::size_t i = 0; i < t.size(); ++i )
      m = std::max(m, abs_val(t[i]));
    return m;
  }

  // max |t[idx] - t[idx']| where idx'[k] = idx[perm[k]]; perm must be a
  // permutation of the modes and permuted modes must have equal lengths
  template <class T>
  T permutation_residual(const DenseTensor<T>& t, std::span<const std::size_t> perm)
  {
    if( perm.size() != t.order() )
      throw std::invalid_argument("permutation_residual: permutation order mismatch");
    std::vector<bool> seen(t.order(), false);
    for( std::size_t k = 0; k < perm.size(); ++k )
    {
      if( perm[k] >= t.order() || seen[perm[k]] )
        throw std::invalid_argument("permutation_residual: not a permutation");
      seen[perm[k]] = true;
      if( t.dims()[perm[k]] != t.dims()[k] )
        throw std::invalid_argument("permutation_residual: permuted mode lengths differ");
    }

    T worst{};
    std::vector<std::size_t> idx(t.order(), 0), pidx(t.order(), 0);
    do
    {
      for( std::size_t k = 0; k < perm.size(); ++k )
        pidx[k] = idx[perm[k]];
      const T d = abs_val(t[t.offset(idx)] - t[t.offset(pidx)]);
      worst = std::max(worst, d);
    } while( advance_index(idx, t.dims()) );
    return worst;
  }

  // max deviation of t from invariance under all transpositions inside each
  // group of modes; groups must be disjoint and constant-length within a group
  template <class T>
  T symmetry_residual(const DenseTensor<T>& t, const std::vector<std::vector<std::size_t>>& groups)
  {
    std::vector<bool> used(t.order(), false);
    for( const auto& g : groups )
      for( std::size_t m : g )
      {
        if( m >= t.order() )
          throw std::invalid_argument("symmetry_residual: mode index out of range");
        if( used[m] )
          throw std::invalid_argument("symmetry_residual: groups overlap");
        used[m] = true;
        if( t.dims()[m] != t.dims()[g[0]] )
          throw std::invalid_argument("symmetry_residual: mode lengths differ within group");
      }

    T worst{};
    std::vector<std::size_t> perm(t.order());
    for( const auto& g : groups )
      for( std::size_t i = 0; i < g.size(); ++i )
        for( std::size_t j = i + 1; j < g.size(); ++j )
        {
          for( std::size_t k = 0; k < t.order(); ++k )
            perm[k] = k;
          std::swap(perm[g[i]], perm[g[j]]);
          worst = std::max(worst, permutation_residual(t, std::span<const std::size_t>(perm)));
        }
    return worst;
  }

  template <class T>
  DenseTensor<T> add(const DenseTensor<T>& a, const DenseTensor<T>& b)
  {
    if( a.dims() != b.dims() )
      throw std::invalid_argument("add: shape mismatch");
    DenseTensor<T> r = a;
    for( std::size_t i = 0; i < r.size(); ++i )
      r[i] += b[i];
    return r;
  }

  template <class T>
  DenseTensor<T> sub(const DenseTensor<T>& a, const DenseTensor<T>& b)
  {
    if( a.dims() != b.dims() )
      throw std::invalid_argument("sub: shape mismatch");
    DenseTensor<T> r = a;
    for( std::size_t i = 0; i < r.size(); ++i )
      r[i] -= b[i];
    return r;
  }

  template <class T>
  DenseTensor<T> scale(const DenseTensor<T>& a, const T& c)
  {
    DenseTensor<T> r = a;
    for( std::size_t i = 0; i < r.size(); ++i )
      r[i] *= c;
    return r;
  }
}
