#pragma once

// arithmetic and sparse linear algebra over prime fields F_p with p < 2^31
// (products fit in 64 bits without tricks)

#include "scalars.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace ott
{
  // the three largest primes below 2^31
  inline constexpr std::array<std::uint64_t, 3> default_primes{2147483647ull, 2147483629ull,
                                                              2147483587ull};

  inline std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p)
  {
    return (a * b) % p; // requires p < 2^31, enforced at matrix construction
  }

  inline std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p)
  {
    std::uint64_t r = 1 % p;
    a %= p;
    while( e )
    {
      if( e & 1 )
        r = mod_mul(r, a, p);
      a = mod_mul(a, a, p);
      e >>= 1;
    }
    return r;
  }

  inline std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p)
  {
    if( a % p == 0 )
      throw std::invalid_argument("mod_inv: zero has no inverse");
    return mod_pow(a, p - 2, p); // Fermat, p prime
  }

  inline std::uint64_t mod_from_bigint(const bigint& c, std::uint64_t p)
  {
    bigint r = c % bigint(p);
    if( r < 0 )
      r += bigint(p);
    return r.convert_to<std::uint64_t>();
  }

  // deterministic Miller-Rabin for 64-bit inputs
  inline bool is_probable_prime(std::uint64_t n)
  {
    if( n < 2 )
      return false;
    for( std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                            31ull, 37ull} )
    {
      if( n == q )
        return true;
      if( n % q == 0 )
        return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while( (d & 1) == 0 )
    {
      d >>= 1;
      ++s;
    }
    const auto mulmod128 = [](std::uint64_t a, std::uint64_t b, std::uint64_t m)
    { return std::uint64_t((unsigned __int128)a * b % m); };
    const auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m)
    {
      std::uint64_t r = 1;
      a %= m;
      while( e )
      {
        if( e & 1 )
          r = mulmod128(r, a, m);
        a = mulmod128(a, a, m);
        e >>= 1;
      }
      return r;
    };
    for( std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                            31ull, 37ull} )
    {
      std::uint64_t x = powmod(a, d, n);
      if( x == 1 || x == n - 1 )
        continue;
      bool composite = true;
      for( int r = 1; r < s; ++r )
      {
        x = mulmod128(x, x, n);
        if( x == n - 1 )
        {
          composite = false;
          break;
        }
      }
      if( composite )
        return false;
    }
    return true;
  }

  inline void require_field_prime(std::uint64_t p)
  {
    if( p >= (1ull << 31) || !is_probable_prime(p) )
      throw std::invalid_argument("modulus must be a prime below 2^31");
  }

  // sparse row: (column, value mod p) pairs, strictly increasing columns,
  // values in (0, p)
  struct SparseRow
  {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;
  };

  struct PrimeFieldMatrix
  {
    std::uint64_t modulus = 0;
    std::uint64_t ncols = 0;
    std::vector<SparseRow> rows;
  };

  // incremental sparse Gaussian elimination: a growing basis of rows
  // normalized to unit leading (smallest-column) coefficient
  class RowReducer
  {
  public:
    explicit RowReducer(std::uint64_t p) : p_(p) { require_field_prime(p); }

    // subtract basis rows while the leading column is owned by the basis;
    // afterwards the row is either empty (dependent) or has a fresh lead
    void reduce(SparseRow& row) const
    {
      while( !row.entries.empty() )
      {
        const auto it = basis_.find(row.entries.front().first);
        if( it == basis_.end() )
          return;
        subtract_scaled(row, it->second, row.entries.front().second);
      }
    }

    // returns true (and grows the basis) if the row was independent
    bool insert(SparseRow row)
    {
      reduce(row);
      if( row.entries.empty() )
        return false;
      const std::uint64_t inv = mod_inv(row.entries.front().second, p_);
      for( auto& [c, v] : row.entries )
        v = mod_mul(v, inv, p_);
      const std::uint64_t lead = row.entries.front().first;
      basis_.emplace(lead, std::move(row));
      return true;
    }

    std::size_t rank() const { return basis_.size(); }
    std::uint64_t modulus() const { return p_; }

  private:
    // row -= coef * b  (b has unit leading coefficient)
    void subtract_scaled(SparseRow& row, const SparseRow& b, std::uint64_t coef) const
    {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
      out.reserve(row.entries.size() + b.entries.size());
      std::size_t i = 0, j = 0;
      while( i < row.entries.size() || j < b.entries.size() )
      {
        if( j == b.entries.size() ||
            (i < row.entries.size() && row.entries[i].first < b.entries[j].first) )
          out.push_back(row.entries[i++]);
        else if( i == row.entries.size() || b.entries[j].first < row.entries[i].first )
        {
          // coef and the basis value are both nonzero mod p, so p - coef*b is too
          out.push_back({b.entries[j].first, p_ - mod_mul(coef, b.entries[j].second, p_)});
          ++j;
        }
        else
        {
          const std::uint64_t v =
            (row.entries[i].second + p_ - mod_mul(coef, b.entries[j].second, p_)) % p_;
          if( v != 0 )
            out.push_back({row.entries[i].first, v});
          ++i;
          ++j;
        }
      }
      row.entries = std::move(out);
    }

    std::uint64_t p_;
    std::unordered_map<std::uint64_t, SparseRow> basis_;
  };

  // rank over F_p; rows are processed sparsest-first (deterministic but
  // order-independent in the result)
  inline std::size_t rank_mod_p(const PrimeFieldMatrix& m)
  {
    require_field_prime(m.modulus);
    std::vector<std::size_t> order(m.rows.size());
    for( std::size_t i = 0; i < order.size(); ++i )
      order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b)
              {
                const auto& ra = m.rows[a].entries;
                const auto& rb = m.rows[b].entries;
                if( ra.size() != rb.size() )
                  return ra.size() < rb.size();
                if( ra != rb )
                  return ra < rb;
                return a < b;
              });
    RowReducer red(m.modulus);
    for( std::size_t i : order )
    {
      std::uint64_t prev_col = 0;
      bool first = true;
      for( const auto& [c, v] : m.rows[i].entries )
      {
        if( c >= m.ncols || v == 0 || v >= m.modulus || (!first && c <= prev_col) )
          throw std::invalid_argument("rank_mod_p: malformed sparse row");
        prev_col = c;
        first = false;
      }
      red.insert(m.rows[i]);
    }
    return red.rank();
  }
}
