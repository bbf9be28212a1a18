#pragma once

// numeric / exact evaluation of the three polynomial families attached to an
// order-4 cubical tensor p:
//   P: pair-swap symmetry differences p_abcd - p_{s1(ab) s2(cd)}
//   Q: the 2x2-minor families g1/g2 built from single contractions of p
//   h: the signed cyclic sum over k in [n]^n and two permutations, evaluated
//      either by definition or by regrouping the inner sum as a determinant

#include "scalars.hpp"
#include "tensor.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace ott
{
  struct SignedPermutations
  {
    std::vector<std::vector<std::size_t>> perms;
    std::vector<int> signs;
  };

  inline SignedPermutations all_permutations(std::size_t n)
  {
    SignedPermutations out;
    std::vector<std::size_t> p(n);
    for( std::size_t i = 0; i < n; ++i )
      p[i] = i;
    do
    {
      int inv = 0;
      for( std::size_t i = 0; i < n; ++i )
        for( std::size_t j = i + 1; j < n; ++j )
          if( p[i] > p[j] )
            ++inv;
      out.perms.push_back(p);
      out.signs.push_back(inv % 2 == 0 ? 1 : -1);
    } while( std::next_permutation(p.begin(), p.end()) );
    return out;
  }

  inline std::size_t require_order4_cubical(const auto& p)
  {
    if( p.order() != 4 )
      throw std::invalid_argument("expected an order-4 tensor");
    const auto& d = p.dims();
    if( d[1] != d[0] || d[2] != d[0] || d[3] != d[0] )
      throw std::invalid_argument("expected a cubical tensor");
    return d[0];
  }

  // worst violation over one equation family; argmax identifies the worst
  // equation with 1-based indices, degree is the homogeneity degree in the
  // entries of p
  template <class T>
  struct FamilyResidual
  {
    T max_abs{};
    std::vector<int> argmax;
    int degree = 1;
  };

  template <class T>
  FamilyResidual<T> eval_P_residual(const DenseTensor<T>& p)
  {
    const std::size_t n = require_order4_cubical(p);
    FamilyResidual<T> r;
    r.degree = 1;
    std::vector<std::size_t> idx(4, 0), jdx(4);
    do
    {
      for( int variant = 1; variant <= 3; ++variant )
      {
        jdx = idx;
        if( variant & 1 )
          std::swap(jdx[0], jdx[1]);
        if( variant & 2 )
          std::swap(jdx[2], jdx[3]);
        const T diff = abs_val(p[p.offset(idx)] - p[p.offset(jdx)]);
        if( diff > r.max_abs )
        {
          r.max_abs = diff;
          r.argmax = {int(idx[0]) + 1, int(idx[1]) + 1, int(idx[2]) + 1, int(idx[3]) + 1, variant};
        }
      }
    } while( advance_index(idx, p.dims()) );
    if( r.argmax.empty() )
      r.argmax = {1, 1, 1, 1, 1};
    (void)n;
    return r;
  }

  template <class T>
  FamilyResidual<T> eval_Q_residual(const DenseTensor<T>& p)
  {
    const std::size_t n = require_order4_cubical(p);
    FamilyResidual<T> r;
    r.degree = 2;
    const auto off = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d)
    { return ((a * n + b) * n + c) * n + d; };

    for( std::size_t a = 0; a < n; ++a )
      for( std::size_t b = 0; b < n; ++b )
        for( std::size_t c = 0; c < n; ++c )
          for( std::size_t d = 0; d < n; ++d )
            for( std::size_t e = 0; e < n; ++e )
              for( std::size_t f = e + 1; f < n; ++f )
              {
                T g1{}, g2{};
                for( std::size_t t = 0; t < n; ++t )
                {
                  g1 += p[off(a, b, e, t)] * p[off(c, d, f, t)] -
                        p[off(a, b, f, t)] * p[off(c, d, e, t)];
                  g2 += p[off(e, t, a, b)] * p[off(f, t, c, d)] -
                        p[off(f, t, a, b)] * p[off(e, t, c, d)];
                }
                const T a1 = abs_val(g1), a2 = abs_val(g2);
                if( a1 > r.max_abs )
                {
                  r.max_abs = a1;
                  r.argmax = {1, int(a) + 1, int(b) + 1, int(c) + 1,
                              int(d) + 1, int(e) + 1, int(f) + 1};
                }
                if( a2 > r.max_abs )
                {
                  r.max_abs = a2;
                  r.argmax = {2, int(a) + 1, int(b) + 1, int(c) + 1,
                              int(d) + 1, int(e) + 1, int(f) + 1};
                }
              }
    if( r.argmax.empty() )
      r.argmax = {1, 1, 1, 1, 1, 1, 2}; // n = 1: family is empty, report trivial slot
    return r;
  }

  // fraction-free Gaussian elimination; divisions are exact for integral T
  template <class T>
  T det_bareiss(std::vector<std::vector<T>> m)
  {
    const std::size_t n = m.size();
    if( n == 0 )
      return T(1);
    T prev(1);
    int sign = 1;
    for( std::size_t k = 0; k + 1 < n; ++k )
    {
      if( m[k][k] == T{} )
      {
        std::size_t piv = k + 1;
        while( piv < n && m[piv][k] == T{} )
          ++piv;
        if( piv == n )
          return T{};
        std::swap(m[k], m[piv]);
        sign = -sign;
      }
      for( std::size_t i = k + 1; i < n; ++i )
      {
        for( std::size_t j = k + 1; j < n; ++j )
          m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        m[i][k] = T{};
      }
      prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
  }

  inline double det_partial_pivot(std::vector<std::vector<double>> m)
  {
    const std::size_t n = m.size();
    double det = 1;
    for( std::size_t k = 0; k < n; ++k )
    {
      std::size_t piv = k;
      for( std::size_t i = k + 1; i < n; ++i )
        if( std::fabs(m[i][k]) > std::fabs(m[piv][k]) )
          piv = i;
      if( m[piv][k] == 0.0 )
        return 0.0;
      if( piv != k )
      {
        std::swap(m[k], m[piv]);
        det = -det;
      }
      det *= m[k][k];
      for( std::size_t i = k + 1; i < n; ++i )
      {
        const double f = m[i][k] / m[k][k];
        for( std::size_t j = k + 1; j < n; ++j )
          m[i][j] -= f * m[k][j];
      }
    }
    return det;
  }

  template <class T>
  T determinant(std::vector<std::vector<T>> m)
  {
    if constexpr( std::is_floating_point_v<T> )
      return det_partial_pivot(std::move(m));
    else
      return det_bareiss(std::move(m));
  }

  // h by definition: sum over k in [n]^n and sigma, gamma in S_n of
  // sgn(sigma) sgn(gamma) prod_m p[k_m, sigma(m), k_{m-1}, gamma(m)] with
  // k_0 = k_n (indices cyclic).  cost (n! )^2 n^n -- refuse n > 5
  template <class T>
  T eval_h_naive(const DenseTensor<T>& p)
  {
    const std::size_t n = require_order4_cubical(p);
    if( n > 5 )
      throw std::domain_error("eval_h_naive: refusing n > 5, use eval_h_det");
    const SignedPermutations sp = all_permutations(n);
    const auto off = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d)
    { return ((a * n + b) * n + c) * n + d; };

    T total{};
    std::vector<std::size_t> k(n, 0);
    const std::vector<std::size_t> kdims(n, n);
    do
    {
      for( std::size_t si = 0; si < sp.perms.size(); ++si )
        for( std::size_t gi = 0; gi < sp.perms.size(); ++gi )
        {
          T term(1);
          for( std::size_t m = 0; m < n; ++m )
          {
            const std::size_t prev = (m == 0) ? k[n - 1] : k[m - 1];
            term *= p[off(k[m], sp.perms[si][m], prev, sp.perms[gi][m])];
          }
          if( sp.signs[si] * sp.signs[gi] > 0 )
            total += term;
          else
            total -= term;
        }
    } while( advance_index(k, kdims) );
    return total;
  }

  // same value, with the gamma-sum regrouped as a determinant per (k, sigma):
  // det M with M[m][j] = p[k_m, sigma(m), k_{m-1}, j].  cost n! n^n det(n) --
  // refuse n > 7
  template <class T>
  T eval_h_det(const DenseTensor<T>& p)
  {
    const std::size_t n = require_order4_cubical(p);
    if( n > 7 )
      throw std::domain_error("eval_h_det: refusing n > 7");
    const SignedPermutations sp = all_permutations(n);
    const auto off = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d)
    { return ((a * n + b) * n + c) * n + d; };

    T total{};
    std::vector<std::vector<T>> m(n, std::vector<T>(n));
    std::vector<std::size_t> k(n, 0);
    const std::vector<std::size_t> kdims(n, n);
    do
    {
      for( std::size_t si = 0; si < sp.perms.size(); ++si )
      {
        for( std::size_t row = 0; row < n; ++row )
        {
          const std::size_t prev = (row == 0) ? k[n - 1] : k[row - 1];
          const std::size_t base = off(k[row], sp.perms[si][row], prev, 0);
          for( std::size_t j = 0; j < n; ++j )
            m[row][j] = p[base + j];
        }
        const T d = determinant(m);
        if( sp.signs[si] > 0 )
          total += d;
        else
          total -= d;
      }
    } while( advance_index(k, kdims) );
    return total;
  }

  template <class T>
  FamilyResidual<T> eval_h_residual(const DenseTensor<T>& p)
  {
    const std::size_t n = require_order4_cubical(p);
    FamilyResidual<T> r;
    r.degree = int(n);
    r.max_abs = abs_val(eval_h_det(p));
    return r;
  }

  // report row for one family on one tensor; normalized by the max-abs norm
  // of p raised to the family degree (scale-invariant)
  struct ResidualReport
  {
    std::string family;
    int n = 0;
    double max_abs = 0;
    double normalized = 0;
    std::vector<int> argmax;
  };

  template <class T>
  ResidualReport make_residual_report(const std::string& family, const DenseTensor<T>& p,
                                      const FamilyResidual<T>& r)
  {
    ResidualReport rep;
    rep.family = family;
    rep.n = int(p.dims()[0]);
    rep.max_abs = to_double(r.max_abs);
    rep.argmax = r.argmax;
    const double nrm = to_double(max_abs(p));
    rep.normalized = (nrm == 0.0) ? 0.0 : rep.max_abs / std::pow(nrm, r.degree);
    return rep;
  }
}
