#include "oracles.hpp"

#include "ott/jacobian.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace
{
  bool descending(const std::vector<double>& v)
  {
    for( std::size_t i = 1; i < v.size(); ++i )
      if( v[i] > v[i - 1] )
        return false;
    return true;
  }
}

TEST(Expm, matches_closed_forms_and_stays_orthogonal)
{
  const Eigen::MatrixXd z = ott::expm(Eigen::MatrixXd::Zero(3, 3));
  EXPECT_LE((z - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);

  const double th = 0.7;
  Eigen::MatrixXd rot(2, 2);
  rot << std::cos(th), std::sin(th), -std::sin(th), std::cos(th);
  EXPECT_LE((ott::expm(ott::skew_from_params(2, std::vector<double>{th})) - rot)
                .cwiseAbs()
                .maxCoeff(),
            1e-12);

  // large enough input to exercise the scaling-and-squaring path
  ott::Rng rng(9, 1);
  std::vector<double> params(6);
  for( auto& v : params )
    v = rng.uniform(-2.0, 2.0);
  const Eigen::MatrixXd e = ott::expm(ott::skew_from_params(4, params));
  EXPECT_LE((e * e.transpose() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_NEAR(e.determinant(), 1.0, 1e-10);

  EXPECT_THROW(ott::expm(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST(Expm, skew_layout_and_validation)
{
  const Eigen::MatrixXd a = ott::skew_from_params(3, std::vector<double>{1.0, 2.0, 3.0});
  Eigen::MatrixXd want(3, 3);
  want << 0, 1, 2, -1, 0, 3, -2, -3, 0;
  EXPECT_EQ(a, want);
  EXPECT_THROW(ott::skew_from_params(3, std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_THROW(ott::skew_from_params(0, std::vector<double>{}), std::invalid_argument);
}

TEST(FiniteDifference, linear_map_is_exact_and_quadratic_is_accurate)
{
  Eigen::MatrixXd a(3, 2);
  a << 1, -2, 0.5, 4, -1, 3;
  const auto lin = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(a * x); };
  Eigen::VectorXd x0(2);
  x0 << 0.3, -1.2;
  EXPECT_LE((ott::finite_difference_jacobian(lin, x0, 1e-5) - a).cwiseAbs().maxCoeff(),
            1e-10);

  const auto sq = [](const Eigen::VectorXd& x)
  {
    Eigen::VectorXd y(1);
    y(0) = x(0) * x(0);
    return y;
  };
  Eigen::VectorXd one(1);
  one << 1.0;
  EXPECT_NEAR(ott::finite_difference_jacobian(sq, one, 1e-5)(0, 0), 2.0, 1e-9);

  EXPECT_THROW(ott::finite_difference_jacobian(sq, one, 0.0), std::invalid_argument);
  const auto bad = [](const Eigen::VectorXd& x)
  { return Eigen::VectorXd::Zero(x(0) > 0.0 ? 2 : 1).eval(); };
  EXPECT_THROW(ott::finite_difference_jacobian(bad, Eigen::VectorXd::Zero(1), 1e-3),
               std::invalid_argument);
}

TEST(FiniteDifference, matches_analytic_gradients_of_quadratic_family)
{
  const auto q = ott::gen_Q(2);
  ott::Rng rng(42, 7);
  Eigen::VectorXd x0(16);
  for( int i = 0; i < 16; ++i )
    x0(i) = rng.uniform(-1.0, 1.0);

  const auto fn = [&](const Eigen::VectorXd& x)
  {
    const std::span<const double> sp(x.data(), std::size_t(x.size()));
    Eigen::VectorXd y(Eigen::Index(q.generators.size()));
    for( std::size_t g = 0; g < q.generators.size(); ++g )
      y(Eigen::Index(g)) = q.generators[g].poly.eval(sp);
    return y;
  };
  const Eigen::MatrixXd fd = ott::finite_difference_jacobian(fn, x0, ott::fd_step);

  const std::span<const double> sp(x0.data(), std::size_t(x0.size()));
  Eigen::MatrixXd an(fd.rows(), fd.cols());
  for( std::size_t g = 0; g < q.generators.size(); ++g )
    for( std::uint32_t v = 0; v < 16; ++v )
      an(Eigen::Index(g), Eigen::Index(v)) = q.generators[g].poly.derivative(v).eval(sp);

  EXPECT_LE((fd - an).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(ParamJacobian, generic_models_have_the_expected_rank)
{
  for( int n : {2, 3, 4} )
    for( std::uint64_t seed : {1ull, 2ull, 3ull} )
    {
      const auto rep = ott::param_jacobian_rank(n, seed);
      EXPECT_EQ(rep.mode, "parameters");
      EXPECT_EQ(rep.n, n);
      EXPECT_EQ(rep.seed, seed);
      EXPECT_EQ(rep.rows, Eigen::Index(n) * n * n * n);
      EXPECT_EQ(rep.cols, Eigen::Index(n) * (n + 1));
      EXPECT_EQ(rep.expected, Eigen::Index(n) * (n + 1) - 1);
      EXPECT_EQ(rep.rank, rep.expected) << "n=" << n << " seed=" << seed;
      EXPECT_EQ(rep.corank, 1);
      EXPECT_TRUE(rep.exact_expectation);
      EXPECT_TRUE(rep.pass);
      EXPECT_FALSE(rep.indeterminate);
      ASSERT_TRUE(rep.gap_ratio.has_value());
      EXPECT_GE(*rep.gap_ratio, ott::gap_confident) << "n=" << n << " seed=" << seed;
      EXPECT_EQ(rep.singular_values.size(), std::size_t(rep.cols));
      EXPECT_TRUE(descending(rep.singular_values));
    }
}

TEST(ParamJacobian, zero_weights_collapse_the_image)
{
  for( int n : {2, 3} )
  {
    ott::TrainModel base = ott::sample_train_model(n, 5);
    std::fill(base.left.lambdas.begin(), base.left.lambdas.end(), 0.0);
    const auto rep = ott::param_jacobian_rank(base, 5);
    EXPECT_EQ(rep.rank, n); // only the dead core's weight directions survive
    EXPECT_FALSE(rep.pass);
    EXPECT_FALSE(rep.indeterminate);
    EXPECT_EQ(rep.expected, Eigen::Index(n) * (n + 1) - 1);
  }

  EXPECT_THROW(ott::param_jacobian_rank(1, 1), std::invalid_argument);
  ott::TrainModel thin = ott::sample_train_model(2, 1);
  thin.left.lambdas = {1.0};
  thin.left.frame = thin.left.frame.topRows(1).eval();
  EXPECT_THROW(ott::param_jacobian_rank(thin, 1), std::invalid_argument);
}

TEST(VarietyJacobian, ambient_two_has_corank_five)
{
  for( std::uint64_t seed = 1; seed <= 5; ++seed )
  {
    const auto rep = ott::variety_jacobian_corank(2, seed);
    EXPECT_EQ(rep.mode, "variety");
    EXPECT_EQ(rep.rows, 20); // 7 + 12 + 1 generators
    EXPECT_EQ(rep.cols, 16);
    EXPECT_EQ(rep.corank, 5) << "seed=" << seed;
    EXPECT_EQ(rep.expected, 5);
    EXPECT_TRUE(rep.exact_expectation);
    EXPECT_TRUE(rep.pass);
    EXPECT_FALSE(rep.indeterminate);
    EXPECT_TRUE(descending(rep.singular_values));
  }
}

TEST(VarietyJacobian, zero_point_sees_only_the_linear_family)
{
  // at the origin every gradient of a degree >= 2 generator vanishes, so the
  // rank is that of the 7 independent linear generators
  const ott::DenseTensor<double> zero({2, 2, 2, 2});
  const auto rep = ott::variety_jacobian_at(2, zero, 0);
  EXPECT_EQ(rep.rank, 7);
  EXPECT_EQ(rep.corank, 9);
  EXPECT_FALSE(rep.pass);
}

TEST(VarietyJacobian, ambient_three_corank_meets_the_lower_bound)
{
  for( std::uint64_t seed : {1ull, 2ull} )
  {
    const auto rep = ott::variety_jacobian_corank(3, seed);
    EXPECT_EQ(rep.rows, 262); // 45 + 216 + 1 generators
    EXPECT_EQ(rep.cols, 81);
    EXPECT_FALSE(rep.exact_expectation);
    EXPECT_EQ(rep.expected, 11);
    EXPECT_GE(rep.corank, 11);
    EXPECT_EQ(rep.corank, 14) << "recorded generic value, seed=" << seed;
    EXPECT_TRUE(rep.pass);
  }
}

TEST(VarietyJacobian, input_validation)
{
  EXPECT_THROW(ott::variety_jacobian_corank(4, 1), std::invalid_argument);
  EXPECT_THROW(ott::variety_jacobian_corank(1, 1), std::invalid_argument);
  const ott::DenseTensor<double> wrong({3, 3, 3, 3});
  EXPECT_THROW(ott::variety_jacobian_at(2, wrong, 0), std::invalid_argument);
}
