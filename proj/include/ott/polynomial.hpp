#pragma once

// sparse multivariate polynomials with exact integer coefficients, ordered by
// graded lex (degree first, then lex with lower variable index more
// significant); enough structure for generator families, Macaulay-style span
// rows and analytic Jacobians

#include "scalars.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ott
{
  // sorted (variable, exponent) pairs, exponents positive; the empty vector
  // is the constant monomial 1
  using VarExp = std::pair<std::uint32_t, std::uint32_t>;
  using Monomial = std::vector<VarExp>;

  inline int mono_degree(const Monomial& m)
  {
    int d = 0;
    for( const auto& [v, e] : m )
      d += int(e);
    return d;
  }

  // canonical form: sort by variable, merge repeats, drop zero exponents
  inline Monomial mono_canonical(Monomial m)
  {
    std::sort(m.begin(), m.end());
    Monomial out;
    for( const auto& [v, e] : m )
    {
      if( e == 0 )
        continue;
      if( !out.empty() && out.back().first == v )
        out.back().second += e;
      else
        out.push_back({v, e});
    }
    return out;
  }

  inline Monomial mono_mul(const Monomial& a, const Monomial& b)
  {
    Monomial out;
    std::size_t i = 0, j = 0;
    while( i < a.size() || j < b.size() )
    {
      if( j == b.size() || (i < a.size() && a[i].first < b[j].first) )
        out.push_back(a[i++]);
      else if( i == a.size() || b[j].first < a[i].first )
        out.push_back(b[j++]);
      else
      {
        out.push_back({a[i].first, a[i].second + b[j].second});
        ++i;
        ++j;
      }
    }
    return out;
  }

  // graded lex: higher total degree wins; within a degree, the monomial with
  // the larger exponent at the earliest differing variable wins.  returns
  // -1 / 0 / 1 for a < b / a == b / a > b
  inline int compare_grlex(const Monomial& a, const Monomial& b)
  {
    const int da = mono_degree(a), db = mono_degree(b);
    if( da != db )
      return da < db ? -1 : 1;
    std::size_t i = 0, j = 0;
    while( i < a.size() && j < b.size() )
    {
      if( a[i].first != b[j].first )
        return a[i].first < b[j].first ? 1 : -1;
      if( a[i].second != b[j].second )
        return a[i].second > b[j].second ? 1 : -1;
      ++i;
      ++j;
    }
    if( i < a.size() )
      return 1;
    if( j < b.size() )
      return -1;
    return 0;
  }

  struct GrlexDescending
  {
    bool operator()(const Monomial& a, const Monomial& b) const
    {
      return compare_grlex(a, b) > 0;
    }
  };

  template <class T>
  T coeff_as(const bigint& c)
  {
    if constexpr( std::is_floating_point_v<T> )
      return to_double(c);
    else
      return T(c);
  }

  class SparsePolynomial
  {
  public:
    using TermMap = std::map<Monomial, bigint, GrlexDescending>;

    explicit SparsePolynomial(std::uint32_t nvars = 0) : nvars_(nvars) {}

    std::uint32_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t nterms() const { return terms_.size(); }

    void add_term(const Monomial& mono, const bigint& coeff)
    {
      if( coeff == 0 )
        return;
      const Monomial m = mono_canonical(mono);
      for( const auto& [v, e] : m )
        if( v >= nvars_ )
          throw std::invalid_argument("SparsePolynomial: variable index out of range");
      auto [it, inserted] = terms_.try_emplace(m, coeff);
      if( !inserted )
      {
        it->second += coeff;
        if( it->second == 0 )
          terms_.erase(it);
      }
    }

    bigint coeff(const Monomial& mono) const
    {
      const auto it = terms_.find(mono_canonical(mono));
      return it == terms_.end() ? bigint(0) : it->second;
    }

    int degree() const
    {
      int d = -1;
      for( const auto& [m, c] : terms_ )
        d = std::max(d, mono_degree(m));
      return d; // -1 for the zero polynomial
    }

    bool homogeneous() const
    {
      if( terms_.empty() )
        return true;
      const int d = mono_degree(terms_.begin()->first);
      for( const auto& [m, c] : terms_ )
        if( mono_degree(m) != d )
          return false;
      return true;
    }

    SparsePolynomial& operator+=(const SparsePolynomial& o)
    {
      if( o.nvars_ != nvars_ )
        throw std::invalid_argument("SparsePolynomial: mixing variable counts");
      for( const auto& [m, c] : o.terms_ )
        add_term(m, c);
      return *this;
    }

    SparsePolynomial scaled(const bigint& c) const
    {
      SparsePolynomial out(nvars_);
      if( c == 0 )
        return out;
      for( const auto& [m, co] : terms_ )
        out.terms_.emplace(m, co * c);
      return out;
    }

    SparsePolynomial mul_monomial(const Monomial& mono) const
    {
      const Monomial m = mono_canonical(mono);
      for( const auto& [v, e] : m )
        if( v >= nvars_ )
          throw std::invalid_argument("SparsePolynomial: variable index out of range");
      SparsePolynomial out(nvars_);
      for( const auto& [mm, c] : terms_ )
        out.terms_.emplace(mono_mul(mm, m), c);
      return out;
    }

    // flip the overall sign if the leading (graded-lex greatest) coefficient
    // is negative; returns the sign applied (+1 or -1)
    int normalize_sign()
    {
      if( terms_.empty() || terms_.begin()->second > 0 )
        return 1;
      for( auto& [m, c] : terms_ )
        c = -c;
      return -1;
    }

    SparsePolynomial derivative(std::uint32_t var) const
    {
      SparsePolynomial out(nvars_);
      for( const auto& [m, c] : terms_ )
        for( std::size_t k = 0; k < m.size(); ++k )
          if( m[k].first == var )
          {
            Monomial dm = m;
            if( dm[k].second == 1 )
              dm.erase(dm.begin() + k);
            else
              --dm[k].second;
            out.add_term(dm, c * int(m[k].second));
            break;
          }
      return out;
    }

    template <class T>
    T eval(std::span<const T> point) const
    {
      if( point.size() != nvars_ )
        throw std::invalid_argument("SparsePolynomial::eval: point length mismatch");
      T total{};
      for( const auto& [m, c] : terms_ )
      {
        T term = coeff_as<T>(c);
        for( const auto& [v, e] : m )
          for( std::uint32_t k = 0; k < e; ++k )
            term *= point[v];
        total += term;
      }
      return total;
    }

    template <class T>
    T eval(const std::vector<T>& point) const
    {
      return eval(std::span<const T>(point));
    }

    bool operator==(const SparsePolynomial& o) const
    {
      return nvars_ == o.nvars_ &&
             std::equal(terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end());
    }

    // string key of the sign-normalized polynomial, for dedup up to sign
    std::string canonical_key() const
    {
      SparsePolynomial c = *this;
      c.normalize_sign();
      std::ostringstream os;
      for( const auto& [m, co] : c.terms_ )
      {
        os << co << ':';
        for( const auto& [v, e] : m )
          os << v << '^' << e << ',';
        os << ';';
      }
      return os.str();
    }

  private:
    std::uint32_t nvars_;
    TermMap terms_;
  };
}
