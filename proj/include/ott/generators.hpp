#pragma once

// symbolic generator families in the n^4 entry variables x_{abcd} of an
// order-4 cubical tensor:
//   gen_P: pair-swap symmetry differences, one per non-representative orbit
//          element (so the family has no linear redundancy)
//   gen_Q: the 2x2-minor sums g1/g2, deduplicated up to sign
//   gen_h: the full signed cyclic polynomial h_n

#include "equations.hpp"
#include "polynomial.hpp"

#include <string>
#include <vector>

namespace ott
{
  // 0-based entry variable index of x_{abcd}
  inline std::uint32_t entry_var(std::size_t n, std::size_t a, std::size_t b, std::size_t c,
                                 std::size_t d)
  {
    return std::uint32_t(((a * n + b) * n + c) * n + d);
  }

  struct Generator
  {
    SparsePolynomial poly{0};
    std::vector<int> provenance; // 1-based indices identifying the source equation
  };

  struct EquationSystem
  {
    int n = 0;
    std::string family;
    std::uint32_t nvars = 0;
    std::vector<Generator> generators;
  };

  // x_{abcd} - x_{s1(ab) s2(cd)} for every index tuple, emitted against the
  // orbit representative (a <= b, c <= d) only and deduplicated, so exactly
  // sum_orbits (|orbit| - 1) generators survive
  inline EquationSystem gen_P(int n)
  {
    if( n < 2 )
      throw std::invalid_argument("gen_P: n must be at least 2");
    const std::size_t un = std::size_t(n);
    EquationSystem sys;
    sys.n = n;
    sys.family = "P";
    sys.nvars = std::uint32_t(un * un * un * un);

    std::vector<std::string> seen;
    for( std::size_t a = 0; a < un; ++a )
      for( std::size_t b = a; b < un; ++b )
        for( std::size_t c = 0; c < un; ++c )
          for( std::size_t d = c; d < un; ++d )
            for( int variant = 1; variant <= 3; ++variant )
            {
              std::size_t aa = a, bb = b, cc = c, dd = d;
              if( variant & 1 )
                std::swap(aa, bb);
              if( variant & 2 )
                std::swap(cc, dd);
              if( aa == a && bb == b && cc == c && dd == d )
                continue; // fixed point of the swap

              SparsePolynomial f(sys.nvars);
              f.add_term({{entry_var(un, a, b, c, d), 1}}, 1);
              f.add_term({{entry_var(un, aa, bb, cc, dd), 1}}, -1);
              if( f.empty() )
                continue;
              f.normalize_sign();
              const std::string key = f.canonical_key();
              if( std::find(seen.begin(), seen.end(), key) != seen.end() )
                continue;
              seen.push_back(key);
              sys.generators.push_back(
                {std::move(f), {int(a) + 1, int(b) + 1, int(c) + 1, int(d) + 1, variant}});
            }
    return sys;
  }

  inline EquationSystem gen_Q(int n)
  {
    if( n < 2 )
      throw std::invalid_argument("gen_Q: n must be at least 2");
    const std::size_t un = std::size_t(n);
    EquationSystem sys;
    sys.n = n;
    sys.family = "Q";
    sys.nvars = std::uint32_t(un * un * un * un);

    std::vector<std::string> seen;
    for( std::size_t a = 0; a < un; ++a )
      for( std::size_t b = 0; b < un; ++b )
        for( std::size_t c = 0; c < un; ++c )
          for( std::size_t d = 0; d < un; ++d )
            for( std::size_t e = 0; e < un; ++e )
              for( std::size_t f = e + 1; f < un; ++f )
                for( int fam = 1; fam <= 2; ++fam )
                {
                  SparsePolynomial g(sys.nvars);
                  for( std::size_t t = 0; t < un; ++t )
                  {
                    if( fam == 1 )
                    {
                      g.add_term({{entry_var(un, a, b, e, t), 1},
                                  {entry_var(un, c, d, f, t), 1}}, 1);
                      g.add_term({{entry_var(un, a, b, f, t), 1},
                                  {entry_var(un, c, d, e, t), 1}}, -1);
                    }
                    else
                    {
                      g.add_term({{entry_var(un, e, t, a, b), 1},
                                  {entry_var(un, f, t, c, d), 1}}, 1);
                      g.add_term({{entry_var(un, f, t, a, b), 1},
                                  {entry_var(un, e, t, c, d), 1}}, -1);
                    }
                  }
                  if( g.empty() )
                    continue;
                  g.normalize_sign();
                  const std::string key = g.canonical_key();
                  if( std::find(seen.begin(), seen.end(), key) != seen.end() )
                    continue;
                  seen.push_back(key);
                  sys.generators.push_back({std::move(g),
                                            {fam, int(a) + 1, int(b) + 1, int(c) + 1,
                                             int(d) + 1, int(e) + 1, int(f) + 1}});
                }
    return sys;
  }

  // h_n as one polynomial: sum over k in [n]^n, sigma, gamma in S_n of
  // sgn(sigma) sgn(gamma) prod_m x[k_m, sigma(m), k_{m-1}, gamma(m)]
  inline SparsePolynomial gen_h(int n)
  {
    if( n < 1 )
      throw std::invalid_argument("gen_h: n must be positive");
    if( n > 4 )
      throw std::domain_error("gen_h: refusing n > 4 (term explosion)");
    const std::size_t un = std::size_t(n);
    SparsePolynomial h(std::uint32_t(un * un * un * un));
    const SignedPermutations sp = all_permutations(un);

    std::vector<std::size_t> k(un, 0);
    const std::vector<std::size_t> kdims(un, un);
    do
    {
      for( std::size_t si = 0; si < sp.perms.size(); ++si )
        for( std::size_t gi = 0; gi < sp.perms.size(); ++gi )
        {
          Monomial mono;
          for( std::size_t m = 0; m < un; ++m )
          {
            const std::size_t prev = (m == 0) ? k[un - 1] : k[m - 1];
            mono.push_back({entry_var(un, k[m], sp.perms[si][m], prev, sp.perms[gi][m]), 1});
          }
          h.add_term(mono, sp.signs[si] * sp.signs[gi]);
        }
    } while( advance_index(k, kdims) );
    return h;
  }
}
