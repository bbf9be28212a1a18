#include "oracles.hpp"

#include "ott/ideal.hpp"

#include <gtest/gtest.h>

using ott::bigint;
using ott::EquationSystem;
using ott::Monomial;
using ott::SparsePolynomial;

namespace
{
  EquationSystem single_system(int n, const std::string& name, const SparsePolynomial& p)
  {
    EquationSystem s;
    s.n = n;
    s.family = name;
    s.nvars = p.nvars();
    s.generators.push_back({p, {1}});
    return s;
  }
}

TEST(MonomialIndexer, small_cases_and_order)
{
  ott::MonomialIndexer ix(2, 2);
  EXPECT_EQ(ix.count(), 3u);
  EXPECT_EQ(ix.monomial_at(0), (Monomial{{0, 2}}));
  EXPECT_EQ(ix.monomial_at(1), (Monomial{{0, 1}, {1, 1}}));
  EXPECT_EQ(ix.monomial_at(2), (Monomial{{1, 2}}));

  EXPECT_EQ(ott::MonomialIndexer(16, 2).count(), 136u);
  EXPECT_EQ(ott::MonomialIndexer(81, 3).count(), 91881u);

  ott::MonomialIndexer d0(5, 0);
  EXPECT_EQ(d0.count(), 1u);
  EXPECT_EQ(d0.monomial_at(0), Monomial{});
  EXPECT_EQ(d0.index_of({}), 0u);
}

TEST(MonomialIndexer, round_trip_and_enumeration_agree)
{
  ott::MonomialIndexer ix(4, 3);
  EXPECT_EQ(ix.count(), 20u);
  auto t = ix.first_tuple();
  std::uint64_t pos = 0;
  do
  {
    const Monomial m = ott::MonomialIndexer::tuple_to_monomial(t);
    EXPECT_EQ(ix.index_of(m), pos);
    EXPECT_EQ(ix.monomial_at(pos), m);
    ++pos;
  } while( ix.next_tuple(t) );
  EXPECT_EQ(pos, ix.count());

  // enumeration order is graded-lex descending
  EXPECT_GT(ott::compare_grlex(ix.monomial_at(3), ix.monomial_at(11)), 0);

  EXPECT_THROW(ix.index_of({{0, 2}}), std::invalid_argument); // wrong degree
  EXPECT_THROW(ix.index_of({{4, 3}}), std::invalid_argument); // variable out of range
  EXPECT_THROW(ix.monomial_at(20), std::out_of_range);
}

TEST(SpanMatrix, shapes_for_small_families)
{
  const auto P = ott::gen_P(2);
  const auto Q = ott::gen_Q(2);
  const auto sp = ott::span_matrix({&P}, 2, 97);
  EXPECT_EQ(sp.rows.size(), 7u * 16u);
  EXPECT_EQ(sp.ncols, 136u);
  for( const auto& r : sp.rows )
    EXPECT_EQ(r.entries.size(), 2u);

  const auto sq = ott::span_matrix({&Q}, 2, 97);
  EXPECT_EQ(sq.rows.size(), 12u); // degree-0 multipliers only
  const auto both = ott::span_matrix({&P, &Q}, 2, 97);
  EXPECT_EQ(both.rows.size(), 124u);

  // generators of degree above the slice contribute nothing
  const auto none = ott::span_matrix({&Q}, 1, 97);
  EXPECT_TRUE(none.rows.empty());
  EXPECT_EQ(none.ncols, 16u);
}

TEST(SpanMatrix, degree_two_ranks_at_ambient_two)
{
  const auto P = ott::gen_P(2);
  const auto Q = ott::gen_Q(2);
  const auto h2 = single_system(2, "h", ott::gen_h(2));
  for( std::uint64_t p : ott::default_primes )
  {
    EXPECT_EQ(ott::rank_mod_p(ott::span_matrix({&P, &Q}, 2, p)), 96u);
    EXPECT_EQ(ott::rank_mod_p(ott::span_matrix({&P, &Q, &h2}, 2, p)), 97u);
  }
}

TEST(MembershipTester, agrees_with_explicit_span_at_ambient_two)
{
  const auto P = ott::gen_P(2);
  const auto Q = ott::gen_Q(2);
  const std::vector<std::uint64_t> primes(ott::default_primes.begin(), ott::default_primes.end());
  const ott::MembershipTester tester({&P, &Q}, 2, primes);

  EXPECT_EQ(tester.ncols(), 136u);
  EXPECT_EQ(tester.nominal_rows(), 124u);
  for( std::size_t r : tester.base_ranks() )
    EXPECT_EQ(r, 96u);
  for( std::size_t r : tester.ranks_with(ott::gen_h(2)) )
    EXPECT_EQ(r, 97u);
}

TEST(MembershipTester, structured_path_matches_explicit_path_on_random_systems)
{
  // random small generator systems with a mix of difference and general
  // generators: both rank paths must agree, including with a target appended
  for( std::uint64_t trial = 1; trial <= 20; ++trial )
  {
    ott::Rng rng(trial, 55);
    const std::uint32_t nv = 4;
    const int d = 3;
    EquationSystem sys;
    sys.n = 0;
    sys.family = "random";
    sys.nvars = nv;

    const auto random_monomial = [&](int deg)
    {
      Monomial m;
      for( int k = 0; k < deg; ++k )
        m.push_back({std::uint32_t(rng.below(nv)), 1});
      return ott::mono_canonical(m);
    };

    const int ngens = 3 + int(rng.below(3));
    for( int gi = 0; gi < ngens; ++gi )
    {
      const int dg = 1 + int(rng.below(2));
      SparsePolynomial g(nv);
      if( rng.below(2) == 0 )
      {
        // difference pair with equal magnitude
        const bigint c = 1 + int(rng.below(3));
        const Monomial m1 = random_monomial(dg), m2 = random_monomial(dg);
        g.add_term(m1, c);
        g.add_term(m2, -c);
      }
      else
      {
        const int nt = 2 + int(rng.below(3));
        for( int t = 0; t < nt; ++t )
          g.add_term(random_monomial(dg), int(rng.below(7)) - 3);
      }
      if( !g.empty() )
        sys.generators.push_back({g, {gi + 1}});
    }
    if( sys.generators.empty() )
      continue;

    SparsePolynomial target(nv);
    for( int t = 0; t < 3; ++t )
      target.add_term(random_monomial(d), int(rng.below(9)) - 4);

    const std::vector<std::uint64_t> primes{97, 2147483647ull};
    const ott::MembershipTester tester({&sys}, d, primes);
    const auto with = tester.ranks_with(target);
    const auto tsys = single_system(0, "t", target);
    for( std::size_t k = 0; k < primes.size(); ++k )
    {
      EXPECT_EQ(tester.base_ranks()[k], ott::rank_mod_p(ott::span_matrix({&sys}, d, primes[k])));
      ott::PrimeFieldMatrix m = ott::span_matrix({&sys, &tsys}, d, primes[k]);
      EXPECT_EQ(with[k], ott::rank_mod_p(m));
    }
  }
}

TEST(Membership, h2_is_not_in_the_degree_two_slice)
{
  const auto P = ott::gen_P(2);
  const auto Q = ott::gen_Q(2);
  const auto v = ott::ideal_membership("h_2", ott::gen_h(2), {&P, &Q});
  EXPECT_EQ(v.verdict, "non-member");
  EXPECT_EQ(v.degree, 2);
  EXPECT_EQ(v.rows, 124u);
  EXPECT_EQ(v.cols, 136u);
  ASSERT_EQ(v.rank_without.size(), 3u);
  for( std::size_t k = 0; k < 3; ++k )
  {
    EXPECT_EQ(v.rank_without[k], 96u);
    EXPECT_EQ(v.rank_with[k], 97u);
  }
}

TEST(Membership, planted_combination_is_member)
{
  const auto P = ott::gen_P(2);
  const auto Q = ott::gen_Q(2);

  // an explicit element of the degree-2 slice of the ideal
  SparsePolynomial target(P.nvars);
  target += P.generators[0].poly.mul_monomial({{3, 1}}).scaled(3);
  target += P.generators[5].poly.mul_monomial({{11, 1}}).scaled(-2);
  target += Q.generators[4].poly.scaled(7);
  ASSERT_TRUE(target.homogeneous());
  ASSERT_EQ(target.degree(), 2);

  const auto v = ott::ideal_membership("planted", target, {&P, &Q});
  EXPECT_EQ(v.verdict, "member-mod-all-primes");
  for( std::size_t k = 0; k < v.primes.size(); ++k )
    EXPECT_EQ(v.rank_with[k], v.rank_without[k]);
}

TEST(Membership, target_validation)
{
  const auto P = ott::gen_P(2);
  const std::vector<std::uint64_t> primes{97};
  const ott::MembershipTester tester({&P}, 2, primes);

  SparsePolynomial inhom(16);
  inhom.add_term({{0, 2}}, 1);
  inhom.add_term({{0, 1}}, 1);
  EXPECT_THROW(tester.ranks_with(inhom), std::invalid_argument);

  SparsePolynomial wrong_d(16);
  wrong_d.add_term({{0, 3}}, 1);
  EXPECT_THROW(tester.ranks_with(wrong_d), std::invalid_argument);

  SparsePolynomial wrong_nv(7);
  wrong_nv.add_term({{0, 2}}, 1);
  EXPECT_THROW(tester.ranks_with(wrong_nv), std::invalid_argument);

  // the zero polynomial is trivially a member
  const auto with = tester.ranks_with(SparsePolynomial(16));
  EXPECT_EQ(with, tester.base_ranks());

  EXPECT_THROW(ott::MembershipTester({&P}, 2, {}), std::invalid_argument);
  EXPECT_THROW(ott::MembershipTester({&P}, 2, {91}), std::invalid_argument);
}

TEST(Membership, float_probe_separates_member_from_nonmember)
{
  const auto P = ott::gen_P(2);
  const auto Q = ott::gen_Q(2);

  const double rh = ott::membership_float_probe(ott::gen_h(2), {&P, &Q}, 400, 1);
  EXPECT_GT(rh, 0.1);

  SparsePolynomial member(16);
  member += P.generators[2].poly.mul_monomial({{5, 1}}).scaled(2);
  member += Q.generators[0].poly.scaled(-3);
  const double rm = ott::membership_float_probe(member, {&P, &Q}, 400, 1);
  EXPECT_LE(rm, 1e-10);

  EXPECT_THROW(ott::membership_float_probe(SparsePolynomial(16), {&P, &Q}, 400, 1),
               std::invalid_argument);
  EXPECT_THROW(ott::membership_float_probe(ott::gen_h(2), {&P, &Q}, 0, 1),
               std::invalid_argument);
}

TEST(Membership, ambient_three_ranks)
{
  // the full degree-3 instance, one prime (the acceptance suite runs all
  // three): structural rank from the P-edges, quotient rank from Q
  const auto P = ott::gen_P(3);
  const auto Q = ott::gen_Q(3);
  const ott::MembershipTester tester({&P, &Q}, 3, {2147483647ull});

  EXPECT_EQ(tester.ncols(), 91881u);
  EXPECT_EQ(tester.nominal_rows(), 166941u);
  EXPECT_EQ(tester.structural_rank(), 83445u);
  ASSERT_EQ(tester.base_ranks().size(), 1u);
  EXPECT_EQ(tester.base_ranks()[0], 85992u);

  const auto with = tester.ranks_with(ott::gen_h(3));
  EXPECT_EQ(with[0], 85993u);

  // a planted member of the degree-3 slice stays inside
  SparsePolynomial member(P.nvars);
  member += P.generators[7].poly.mul_monomial({{13, 2}}).scaled(5);
  member += Q.generators[100].poly.mul_monomial({{40, 1}}).scaled(-1);
  EXPECT_EQ(tester.ranks_with(member)[0], 85992u);
}
