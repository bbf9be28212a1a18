#pragma once

// independent reference implementations used only by the tests: written as
// plain nested loops / textbook algorithms, deliberately sharing no code with
// the library paths they check

#include "ott/rng.hpp"
#include "ott/scalars.hpp"
#include "ott/tensor.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace oracle
{
  // single-mode contraction assembled index-by-index with at(); no strides
  template <class T>
  ott::DenseTensor<T> contract(const ott::DenseTensor<T>& a, const ott::DenseTensor<T>& b,
                               std::size_t mode_a, std::size_t mode_b)
  {
    std::vector<std::size_t> rdims;
    for( std::size_t k = 0; k < a.order(); ++k )
      if( k != mode_a )
        rdims.push_back(a.dims()[k]);
    for( std::size_t k = 0; k < b.order(); ++k )
      if( k != mode_b )
        rdims.push_back(b.dims()[k]);

    ott::DenseTensor<T> r(rdims);
    std::vector<std::size_t> idx(rdims.size(), 0);
    do
    {
      std::vector<std::size_t> ia, ib;
      std::size_t pos = 0;
      for( std::size_t k = 0; k < a.order(); ++k )
        ia.push_back(k == mode_a ? 0 : idx[pos++]);
      for( std::size_t k = 0; k < b.order(); ++k )
        ib.push_back(k == mode_b ? 0 : idx[pos++]);
      T acc{};
      for( std::size_t c = 0; c < a.dims()[mode_a]; ++c )
      {
        ia[mode_a] = c;
        ib[mode_b] = c;
        acc += a.at(ia) * b.at(ib);
      }
      r.at(idx) = acc;
    } while( ott::advance_index(idx, rdims) );
    return r;
  }

  // random tensors for property tests
  inline ott::DenseTensor<double> random_real_tensor(const std::vector<std::size_t>& dims,
                                                     std::uint64_t seed)
  {
    ott::DenseTensor<double> t(dims);
    ott::Rng rng(seed, 901);
    for( std::size_t i = 0; i < t.size(); ++i )
      t[i] = rng.normal();
    return t;
  }

  // entries uniform in [-5, 5]
  inline ott::DenseTensor<ott::bigint> random_int_tensor(const std::vector<std::size_t>& dims,
                                                         std::uint64_t seed)
  {
    ott::DenseTensor<ott::bigint> t(dims);
    ott::Rng rng(seed, 902);
    for( std::size_t i = 0; i < t.size(); ++i )
      t[i] = ott::bigint(std::int64_t(rng.below(11)) - 5);
    return t;
  }

  // the fixed order-4 regression tensor: entry at flat position f (row-major)
  // is (f^2 + 3f + 1) mod 11 - 5
  inline ott::DenseTensor<ott::bigint> fixed_int_tensor(std::size_t n)
  {
    ott::DenseTensor<ott::bigint> t({n, n, n, n});
    for( std::size_t f = 0; f < t.size(); ++f )
      t[f] = ott::bigint(std::int64_t((f * f + 3 * f + 1) % 11) - 5);
    return t;
  }

  // symmetric core built rank-by-rank (outer accumulation order differs from
  // the library's entry-wise loop)
  inline ott::DenseTensor<double> rank_accumulated_core(const std::vector<double>& w,
                                                        const Eigen::MatrixXd& dirs)
  {
    const std::size_t n = std::size_t(dirs.cols());
    ott::DenseTensor<double> t({n, n, n});
    for( std::size_t i = 0; i < w.size(); ++i )
      for( std::size_t a = 0; a < n; ++a )
        for( std::size_t b = 0; b < n; ++b )
          for( std::size_t s = 0; s < n; ++s )
          {
            std::vector<std::size_t> idx{a, b, s};
            t.at(idx) += w[i] * dirs(i, a) * dirs(i, b) * dirs(i, s);
          }
    return t;
  }

  // worst |g| over the full minor families, all six indices free (including
  // e = f and e > f), written as direct loops
  template <class T>
  T q_family_worst(const ott::DenseTensor<T>& p)
  {
    const std::size_t n = p.dims()[0];
    const auto off = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d)
    { return ((a * n + b) * n + c) * n + d; };
    T worst{};
    for( std::size_t a = 0; a < n; ++a )
      for( std::size_t b = 0; b < n; ++b )
        for( std::size_t c = 0; c < n; ++c )
          for( std::size_t d = 0; d < n; ++d )
            for( std::size_t e = 0; e < n; ++e )
              for( std::size_t f = 0; f < n; ++f )
              {
                T g1{}, g2{};
                for( std::size_t t = 0; t < n; ++t )
                {
                  g1 += p[off(a, b, e, t)] * p[off(c, d, f, t)] -
                        p[off(a, b, f, t)] * p[off(c, d, e, t)];
                  g2 += p[off(e, t, a, b)] * p[off(f, t, c, d)] -
                        p[off(f, t, a, b)] * p[off(e, t, c, d)];
                }
                worst = std::max({worst, ott::abs_val(g1), ott::abs_val(g2)});
              }
    return worst;
  }

  // h at n = 2 with everything unrolled by hand: k in {0,1}^2, the two
  // permutations of S_2 each for sigma and gamma
  template <class T>
  T h2_unrolled(const ott::DenseTensor<T>& p)
  {
    const auto off = [](std::size_t a, std::size_t b, std::size_t c, std::size_t d)
    { return ((a * 2 + b) * 2 + c) * 2 + d; };
    T total{};
    for( std::size_t k1 = 0; k1 < 2; ++k1 )
      for( std::size_t k2 = 0; k2 < 2; ++k2 )
        for( int s = 0; s < 2; ++s )
          for( int g = 0; g < 2; ++g )
          {
            const std::size_t sa = s ? 1 : 0, sb = s ? 0 : 1;
            const std::size_t ga = g ? 1 : 0, gb = g ? 0 : 1;
            const T term = p[off(k1, sa, k2, ga)] * p[off(k2, sb, k1, gb)];
            if( ((s + g) % 2) == 0 )
              total += term;
            else
              total -= term;
          }
    return total;
  }

  // textbook dense Gaussian elimination over F_p
  inline std::size_t dense_rank_mod_p(std::vector<std::vector<std::uint64_t>> m, std::uint64_t p)
  {
    if( m.empty() )
      return 0;
    const std::size_t nr = m.size(), nc = m[0].size();
    std::size_t rank = 0;
    for( std::size_t col = 0; col < nc && rank < nr; ++col )
    {
      std::size_t piv = rank;
      while( piv < nr && m[piv][col] % p == 0 )
        ++piv;
      if( piv == nr )
        continue;
      std::swap(m[rank], m[piv]);
      // scale pivot row to 1
      std::uint64_t inv = 1, base = m[rank][col] % p, e = p - 2;
      while( e )
      {
        if( e & 1 )
          inv = inv * base % p;
        base = base * base % p;
        e >>= 1;
      }
      for( auto& x : m[rank] )
        x = x % p * inv % p;
      for( std::size_t i = 0; i < nr; ++i )
        if( i != rank && m[i][col] % p != 0 )
        {
          const std::uint64_t f = m[i][col] % p;
          for( std::size_t j = 0; j < nc; ++j )
            m[i][j] = (m[i][j] + (p - f) * m[rank][j]) % p;
        }
      ++rank;
    }
    return rank;
  }

  // cofactor expansion along the first row, n <= 4
  template <class T>
  T det_cofactor(const std::vector<std::vector<T>>& m)
  {
    const std::size_t n = m.size();
    if( n == 0 )
      return T(1);
    if( n == 1 )
      return m[0][0];
    T acc{};
    for( std::size_t j = 0; j < n; ++j )
    {
      std::vector<std::vector<T>> minor;
      for( std::size_t i = 1; i < n; ++i )
      {
        std::vector<T> row;
        for( std::size_t jj = 0; jj < n; ++jj )
          if( jj != j )
            row.push_back(m[i][jj]);
        minor.push_back(row);
      }
      const T c = m[0][j] * det_cofactor(minor);
      if( j % 2 == 0 )
        acc += c;
      else
        acc -= c;
    }
    return acc;
  }

  // p[a,b,c,d] = sum_s T[a,b,s] S[c,d,s] by five explicit loops
  inline ott::DenseTensor<double> train_from_cores(const ott::DenseTensor<double>& tc,
                                                   const ott::DenseTensor<double>& sc)
  {
    const std::size_t n = tc.dims()[0];
    ott::DenseTensor<double> p({n, n, n, n});
    for( std::size_t a = 0; a < n; ++a )
      for( std::size_t b = 0; b < n; ++b )
        for( std::size_t c = 0; c < n; ++c )
          for( std::size_t d = 0; d < n; ++d )
          {
            double acc = 0;
            for( std::size_t s = 0; s < n; ++s )
            {
              std::vector<std::size_t> it{a, b, s}, is{c, d, s};
              acc += tc.at(it) * sc.at(is);
            }
            std::vector<std::size_t> ip{a, b, c, d};
            p.at(ip) = acc;
          }
    return p;
  }
}
