#pragma once

// degree-bounded ideal membership over prime fields.  the homogeneous span
// {m * g : deg m + deg g = d} is represented in the monomial basis of degree
// d; a homogeneous target of degree d lies in the ideal in degree d iff
// appending its row does not increase the rank.
//
// two paths compute the same ranks:
//   span_matrix + rank_mod_p -- the explicit matrix, fine at small scale
//   MembershipTester -- exploits that two-term difference generators stay
//     two-term differences under monomial multiplication, so their row space
//     is the cycle space of a graph (rank by union-find); every other row is
//     projected to per-component coefficient sums and eliminated sparsely

#include "generators.hpp"
#include "modular.hpp"
#include "polynomial.hpp"
#include "rng.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ott
{
  // ranks the monomials of a fixed degree in the graded-lex (descending)
  // order used everywhere else: column 0 is x_0^d
  class MonomialIndexer
  {
  public:
    MonomialIndexer(std::uint32_t nvars, int degree) : v_(nvars), d_(degree)
    {
      if( degree < 0 )
        throw std::invalid_argument("MonomialIndexer: negative degree");
      if( nvars == 0 && degree > 0 )
        throw std::invalid_argument("MonomialIndexer: no variables");
      // Pascal triangle with overflow detection
      const std::size_t rows = std::size_t(v_) + std::size_t(d_) + 1;
      binom_.assign(rows, std::vector<std::uint64_t>(std::size_t(d_) + 1, 0));
      for( std::size_t i = 0; i < rows; ++i )
      {
        binom_[i][0] = 1;
        for( std::size_t j = 1; j <= std::size_t(d_) && j <= i; ++j )
        {
          const std::uint64_t s = binom_[i - 1][j - 1] + binom_[i - 1][j];
          if( s < binom_[i - 1][j - 1] )
            throw std::overflow_error("MonomialIndexer: column count overflows");
          binom_[i][j] = s;
        }
      }
    }

    std::uint32_t nvars() const { return v_; }
    int degree() const { return d_; }

    std::uint64_t count() const
    {
      return d_ == 0 ? 1 : binom(std::uint64_t(v_) + std::uint64_t(d_) - 1, std::uint64_t(d_));
    }

    // non-decreasing variable tuples of length d, lexicographic order
    std::vector<std::uint32_t> first_tuple() const { return std::vector<std::uint32_t>(d_, 0); }

    bool next_tuple(std::vector<std::uint32_t>& t) const
    {
      for( std::size_t i = t.size(); i-- > 0; )
        if( t[i] + 1 < v_ )
        {
          const std::uint32_t x = t[i] + 1;
          for( std::size_t j = i; j < t.size(); ++j )
            t[j] = x;
          return true;
        }
      return false;
    }

    static Monomial tuple_to_monomial(const std::vector<std::uint32_t>& t)
    {
      Monomial m;
      for( std::uint32_t v : t )
        if( !m.empty() && m.back().first == v )
          ++m.back().second;
        else
          m.push_back({v, 1});
      return m;
    }

    std::uint64_t index_of(const Monomial& mono) const
    {
      std::vector<std::uint32_t> t;
      for( const auto& [v, e] : mono )
      {
        if( v >= v_ )
          throw std::invalid_argument("MonomialIndexer: variable out of range");
        for( std::uint32_t k = 0; k < e; ++k )
          t.push_back(v);
      }
      if( int(t.size()) != d_ )
        throw std::invalid_argument("MonomialIndexer: monomial has wrong degree");

      std::uint64_t idx = 0;
      std::uint32_t prev = 0;
      for( std::size_t pos = 0; pos < t.size(); ++pos )
      {
        const std::uint64_t rem = t.size() - pos - 1;
        for( std::uint32_t c = prev; c < t[pos]; ++c )
          idx += binom(std::uint64_t(v_ - c) + rem - 1, rem);
        prev = t[pos];
      }
      return idx;
    }

    Monomial monomial_at(std::uint64_t idx) const
    {
      if( idx >= count() )
        throw std::out_of_range("MonomialIndexer: index out of range");
      std::vector<std::uint32_t> t;
      std::uint32_t prev = 0;
      for( int pos = 0; pos < d_; ++pos )
      {
        const std::uint64_t rem = std::uint64_t(d_ - pos - 1);
        std::uint32_t c = prev;
        while( true )
        {
          const std::uint64_t cnt = binom(std::uint64_t(v_ - c) + rem - 1, rem);
          if( idx < cnt )
            break;
          idx -= cnt;
          ++c;
        }
        t.push_back(c);
        prev = c;
      }
      return tuple_to_monomial(t);
    }

  private:
    std::uint64_t binom(std::uint64_t a, std::uint64_t b) const
    {
      if( b > std::uint64_t(d_) )
        throw std::invalid_argument("MonomialIndexer: binomial out of table");
      if( a >= binom_.size() )
        throw std::invalid_argument("MonomialIndexer: binomial out of table");
      return binom_[std::size_t(a)][std::size_t(b)];
    }

    std::uint32_t v_;
    int d_;
    std::vector<std::vector<std::uint64_t>> binom_;
  };

  namespace detail
  {
    inline std::uint32_t common_nvars(const std::vector<const EquationSystem*>& systems)
    {
      if( systems.empty() )
        throw std::invalid_argument("need at least one generator system");
      const std::uint32_t nv = systems.front()->nvars;
      for( const auto* s : systems )
      {
        if( s == nullptr || s->nvars != nv )
          throw std::invalid_argument("generator systems disagree on variable count");
        for( const auto& g : s->generators )
          if( g.poly.nvars() != nv || !g.poly.homogeneous() )
            throw std::invalid_argument("generators must be homogeneous in the shared variables");
      }
      return nv;
    }
  }

  // explicit Macaulay-style span matrix in degree `degree` over F_p; rows
  // appear system by system, generator by generator, multiplier by multiplier
  inline PrimeFieldMatrix span_matrix(const std::vector<const EquationSystem*>& systems,
                                      int degree, std::uint64_t p)
  {
    require_field_prime(p);
    const std::uint32_t nv = detail::common_nvars(systems);
    const MonomialIndexer cols(nv, degree);

    PrimeFieldMatrix m;
    m.modulus = p;
    m.ncols = cols.count();
    for( const auto* sys : systems )
      for( const auto& g : sys->generators )
      {
        const int dg = g.poly.degree();
        if( dg < 0 || dg > degree )
          continue;
        const MonomialIndexer mul(nv, degree - dg);
        std::vector<std::uint32_t> t = mul.first_tuple();
        do
        {
          const Monomial mm = MonomialIndexer::tuple_to_monomial(t);
          SparseRow row;
          for( const auto& [mono, c] : g.poly.terms() )
          {
            const std::uint64_t v = mod_from_bigint(c, p);
            if( v != 0 )
              row.entries.push_back({cols.index_of(mono_mul(mono, mm)), v});
          }
          std::sort(row.entries.begin(), row.entries.end());
          if( !row.entries.empty() )
            m.rows.push_back(std::move(row));
        } while( mul.next_tuple(t) );
      }
    return m;
  }

  // union-find over column indices, roots are the smallest member
  class ColumnUnionFind
  {
  public:
    std::uint64_t find(std::uint64_t x)
    {
      auto it = parent_.find(x);
      if( it == parent_.end() )
        return x;
      // path halving
      std::uint64_t r = x;
      while( true )
      {
        auto jt = parent_.find(r);
        if( jt == parent_.end() )
          break;
        r = jt->second;
      }
      std::uint64_t c = x;
      while( c != r )
      {
        auto jt = parent_.find(c);
        const std::uint64_t nxt = jt->second;
        jt->second = r;
        c = nxt;
      }
      return r;
    }

    // returns true if two components were merged
    bool unite(std::uint64_t a, std::uint64_t b)
    {
      std::uint64_t ra = find(a), rb = find(b);
      if( ra == rb )
        return false;
      if( ra > rb )
        std::swap(ra, rb);
      parent_[rb] = ra;
      return true;
    }

  private:
    std::unordered_map<std::uint64_t, std::uint64_t> parent_;
  };

  // shared machinery for membership queries against one generator span
  class MembershipTester
  {
  public:
    MembershipTester(const std::vector<const EquationSystem*>& systems, int degree,
                     std::vector<std::uint64_t> primes)
      : nvars_(detail::common_nvars(systems)), degree_(degree), primes_(std::move(primes)),
        cols_(nvars_, degree)
    {
      if( primes_.empty() )
        throw std::invalid_argument("MembershipTester: need at least one prime");
      for( std::uint64_t p : primes_ )
        require_field_prime(p);

      // pass A: difference generators become graph edges
      for( const auto* sys : systems )
        for( const auto& g : sys->generators )
        {
          const int dg = g.poly.degree();
          if( dg < 0 || dg > degree_ )
            continue;
          if( !is_difference(g.poly) )
            continue;
          const auto& t0 = *g.poly.terms().begin();
          const auto& t1 = *std::next(g.poly.terms().begin());
          const MonomialIndexer mul(nvars_, degree_ - dg);
          std::vector<std::uint32_t> t = mul.first_tuple();
          do
          {
            const Monomial mm = MonomialIndexer::tuple_to_monomial(t);
            const std::uint64_t u = cols_.index_of(mono_mul(t0.first, mm));
            const std::uint64_t v = cols_.index_of(mono_mul(t1.first, mm));
            ++nominal_rows_;
            if( uf_.unite(u, v) )
              ++rank_uf_;
          } while( mul.next_tuple(t) );
        }

      // pass B: everything else, projected to per-component sums
      std::unordered_set<std::string> seen;
      std::vector<std::vector<std::pair<std::uint64_t, bigint>>> qrows;
      for( const auto* sys : systems )
        for( const auto& g : sys->generators )
        {
          const int dg = g.poly.degree();
          if( dg < 0 || dg > degree_ || is_difference(g.poly) )
            continue;
          const MonomialIndexer mul(nvars_, degree_ - dg);
          std::vector<std::uint32_t> t = mul.first_tuple();
          do
          {
            ++nominal_rows_;
            auto qr = quotient_row(g.poly, MonomialIndexer::tuple_to_monomial(t));
            if( qr.empty() )
              continue;
            // sign-normalize and deduplicate: proportional rows are common here
            if( qr.front().second < 0 )
              for( auto& [c, v] : qr )
                v = -v;
            std::string key;
            for( const auto& [c, v] : qr )
            {
              key += std::to_string(c);
              key += ':';
              key += v.str();
              key += ';';
            }
            if( seen.insert(std::move(key)).second )
              qrows.push_back(std::move(qr));
          } while( mul.next_tuple(t) );
        }

      // deterministic sparsest-first elimination order, shared by all primes
      std::sort(qrows.begin(), qrows.end(),
                [](const auto& a, const auto& b)
                {
                  if( a.size() != b.size() )
                    return a.size() < b.size();
                  return a < b;
                });

      for( std::uint64_t p : primes_ )
      {
        RowReducer red(p);
        for( const auto& qr : qrows )
        {
          SparseRow row;
          for( const auto& [c, v] : qr )
          {
            const std::uint64_t mv = mod_from_bigint(v, p);
            if( mv != 0 )
              row.entries.push_back({c, mv});
          }
          if( !row.entries.empty() )
            red.insert(std::move(row));
        }
        base_ranks_.push_back(rank_uf_ + red.rank());
        reducers_.push_back(std::move(red));
      }
    }

    std::uint32_t nvars() const { return nvars_; }
    int degree() const { return degree_; }
    std::uint64_t ncols() const { return cols_.count(); }
    std::uint64_t nominal_rows() const { return nominal_rows_; }
    const std::vector<std::uint64_t>& primes() const { return primes_; }
    std::size_t structural_rank() const { return rank_uf_; }
    const std::vector<std::size_t>& base_ranks() const { return base_ranks_; }

    // per-prime rank of the span with the target row appended
    std::vector<std::size_t> ranks_with(const SparsePolynomial& target) const
    {
      if( target.nvars() != nvars_ )
        throw std::invalid_argument("MembershipTester: target variable count mismatch");
      if( !target.homogeneous() )
        throw std::invalid_argument("MembershipTester: target must be homogeneous");
      if( !target.empty() && target.degree() != degree_ )
        throw std::invalid_argument("MembershipTester: target degree mismatch");

      const auto qr = quotient_row(target, Monomial{});
      std::vector<std::size_t> out;
      for( std::size_t k = 0; k < primes_.size(); ++k )
      {
        SparseRow row;
        for( const auto& [c, v] : qr )
        {
          const std::uint64_t mv = mod_from_bigint(v, primes_[k]);
          if( mv != 0 )
            row.entries.push_back({c, mv});
        }
        reducers_[k].reduce(row);
        out.push_back(base_ranks_[k] + (row.entries.empty() ? 0 : 1));
      }
      return out;
    }

    static bool is_difference(const SparsePolynomial& p)
    {
      if( p.nterms() != 2 )
        return false;
      const auto it = p.terms().begin();
      return it->second == -std::next(it)->second;
    }

  private:
    // coefficients of poly * mult, summed per union-find component; the
    // union-find is fixed after construction, so lookups stay consistent
    std::vector<std::pair<std::uint64_t, bigint>> quotient_row(const SparsePolynomial& poly,
                                                               const Monomial& mult) const
    {
      std::map<std::uint64_t, bigint> acc;
      for( const auto& [mono, c] : poly.terms() )
        acc[uf_.find(cols_.index_of(mono_mul(mono, mult)))] += c;
      std::vector<std::pair<std::uint64_t, bigint>> out;
      for( auto& [col, v] : acc )
        if( v != 0 )
          out.push_back({col, std::move(v)});
      return out;
    }

    std::uint32_t nvars_;
    int degree_;
    std::vector<std::uint64_t> primes_;
    MonomialIndexer cols_;
    mutable ColumnUnionFind uf_;
    std::size_t rank_uf_ = 0;
    std::uint64_t nominal_rows_ = 0;
    std::vector<RowReducer> reducers_;
    std::vector<std::size_t> base_ranks_;
  };

  struct MembershipVerdict
  {
    std::string target;
    int degree = 0;
    std::uint64_t nvars = 0;
    std::uint64_t rows = 0; // nominal span rows before structural reduction
    std::uint64_t cols = 0;
    std::vector<std::uint64_t> primes;
    std::vector<std::size_t> rank_without;
    std::vector<std::size_t> rank_with;
    std::string verdict; // "non-member" | "member-mod-all-primes" | "mixed"
    std::optional<double> probe_residual;
  };

  // non-member is a proof (rank grows over some field of characteristic 0
  // reduction); member-mod-all-primes is evidence only
  inline MembershipVerdict ideal_membership(const std::string& name,
                                            const SparsePolynomial& target,
                                            const std::vector<const EquationSystem*>& systems,
                                            std::vector<std::uint64_t> primes =
                                              {default_primes.begin(), default_primes.end()},
                                            int degree = -1)
  {
    const int d = degree >= 0 ? degree : std::max(target.degree(), 1);
    const MembershipTester tester(systems, d, std::move(primes));

    MembershipVerdict v;
    v.target = name;
    v.degree = d;
    v.nvars = tester.nvars();
    v.rows = tester.nominal_rows();
    v.cols = tester.ncols();
    v.primes = tester.primes();
    v.rank_without = tester.base_ranks();
    v.rank_with = tester.ranks_with(target);

    bool all_grow = true, none_grow = true;
    for( std::size_t k = 0; k < v.primes.size(); ++k )
    {
      if( v.rank_with[k] > v.rank_without[k] )
        none_grow = false;
      else
        all_grow = false;
    }
    v.verdict = all_grow ? "non-member" : (none_grow ? "member-mod-all-primes" : "mixed");
    return v;
  }

  // numeric cross-check: least-squares fit of the target by the span products
  // at random sample points; small relative residual is consistent with
  // membership, a large one with independence
  inline double membership_float_probe(const SparsePolynomial& target,
                                       const std::vector<const EquationSystem*>& systems,
                                       int sample_points, std::uint64_t seed)
  {
    const std::uint32_t nv = detail::common_nvars(systems);
    if( target.nvars() != nv || !target.homogeneous() || target.empty() )
      throw std::invalid_argument("membership_float_probe: need a homogeneous nonzero target");
    if( sample_points < 1 )
      throw std::invalid_argument("membership_float_probe: need sample points");
    const int d = target.degree();

    std::vector<SparsePolynomial> products;
    for( const auto* sys : systems )
      for( const auto& g : sys->generators )
      {
        const int dg = g.poly.degree();
        if( dg < 0 || dg > d )
          continue;
        const MonomialIndexer mul(nv, d - dg);
        std::vector<std::uint32_t> t = mul.first_tuple();
        do
        {
          products.push_back(g.poly.mul_monomial(MonomialIndexer::tuple_to_monomial(t)));
        } while( mul.next_tuple(t) );
      }
    if( products.empty() )
      return 1.0; // nothing to fit with: the residual is the whole target
    if( double(products.size()) * double(sample_points) > 2e7 )
      throw std::domain_error("membership_float_probe: problem too large for the dense probe");

    Rng rng(seed, 77);
    Eigen::MatrixXd a(sample_points, Eigen::Index(products.size()));
    Eigen::VectorXd b(sample_points);
    std::vector<double> x(nv);
    for( int i = 0; i < sample_points; ++i )
    {
      for( auto& xi : x )
        xi = rng.normal();
      for( std::size_t j = 0; j < products.size(); ++j )
        a(i, Eigen::Index(j)) = products[j].eval(x);
      b(i) = target.eval(x);
    }
    const double bn = b.norm();
    if( bn == 0.0 )
      return 0.0;
    const Eigen::VectorXd c = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    return (a * c - b).norm() / bn;
  }
}
