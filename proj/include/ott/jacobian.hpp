#pragma once

#include "ott/generators.hpp"
#include "ott/models.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ott
{
  // numerical-rank policy: relative singular-value cutoff plus a reported
  // spectral gap; runs whose gap falls below the indeterminate bar are
  // flagged instead of being trusted either way
  inline constexpr double rank_rel_tol = 1e-6;
  inline constexpr double gap_confident = 1e3;
  inline constexpr double gap_indeterminate = 1e2;
  inline constexpr double fd_step = 1e-5;

  struct JacobianReport
  {
    int n = 0;
    std::string mode; // "parameters" or "variety"
    std::uint64_t seed = 0;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::vector<double> singular_values; // descending
    Eigen::Index rank = 0;
    Eigen::Index corank = 0; // cols - rank
    std::optional<double> gap_ratio; // empty when the trailing value vanishes
    Eigen::Index expected = 0; // rank in parameter mode, corank in variety mode
    bool exact_expectation = true; // false: expected is only a lower bound
    bool pass = false;
    bool indeterminate = false;
  };

  // dense matrix exponential by scaling and squaring of a short Taylor sum;
  // intended for the small skew-symmetric inputs of the orthogonal chart
  inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a)
  {
    if( a.rows() != a.cols() )
      throw std::invalid_argument("expm: matrix must be square");
    const Eigen::Index n = a.rows();
    int squarings = 0;
    double scale = 1.0;
    while( a.norm() * scale > 0.25 )
    {
      scale *= 0.5;
      ++squarings;
    }
    const Eigen::MatrixXd x = a * scale;
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd sum = term;
    for( int k = 1; k <= 40; ++k )
    {
      term = (term * x) / double(k);
      sum += term;
      if( term.norm() <= 1e-14 * sum.norm() )
        break;
    }
    for( int i = 0; i < squarings; ++i )
      sum = sum * sum;
    return sum;
  }

  // skew-symmetric matrix from its strict upper triangle, row-major
  inline Eigen::MatrixXd skew_from_params(int n, std::span<const double> params)
  {
    if( n < 1 )
      throw std::invalid_argument("skew_from_params: n must be positive");
    if( params.size() != std::size_t(n) * (n - 1) / 2 )
      throw std::invalid_argument("skew_from_params: wrong parameter count");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    std::size_t k = 0;
    for( int i = 0; i < n; ++i )
      for( int j = i + 1; j < n; ++j, ++k )
      {
        a(i, j) = params[k];
        a(j, i) = -params[k];
      }
    return a;
  }

  // central differences, one column per parameter
  template <typename F>
  Eigen::MatrixXd finite_difference_jacobian(F&& fn, const Eigen::VectorXd& point, double step)
  {
    if( !(step > 0.0) )
      throw std::invalid_argument("finite_difference_jacobian: step must be positive");
    const Eigen::Index nparams = point.size();
    const Eigen::VectorXd probe = fn(point);
    Eigen::MatrixXd jac(probe.size(), nparams);
    for( Eigen::Index i = 0; i < nparams; ++i )
    {
      Eigen::VectorXd hi = point, lo = point;
      hi(i) += step;
      lo(i) -= step;
      const Eigen::VectorXd fhi = fn(hi);
      const Eigen::VectorXd flo = fn(lo);
      if( fhi.size() != probe.size() || flo.size() != probe.size() )
        throw std::invalid_argument("finite_difference_jacobian: inconsistent output size");
      jac.col(i) = (fhi - flo) / (2.0 * step);
    }
    return jac;
  }

  namespace detail
  {
    inline void decide_rank(JacobianReport& rep, const Eigen::MatrixXd& jac)
    {
      rep.rows = jac.rows();
      rep.cols = jac.cols();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
      const auto& sv = svd.singularValues();
      rep.singular_values.assign(sv.data(), sv.data() + sv.size());
      const double smax = rep.singular_values.empty() ? 0.0 : rep.singular_values.front();
      const double cut = rank_rel_tol * smax;
      rep.rank = 0;
      while( rep.rank < Eigen::Index(rep.singular_values.size()) &&
             rep.singular_values[std::size_t(rep.rank)] > cut )
        ++rep.rank;
      rep.corank = rep.cols - rep.rank;
      rep.gap_ratio.reset();
      rep.indeterminate = false;
      if( rep.rank > 0 && rep.rank < Eigen::Index(rep.singular_values.size()) )
      {
        const double below = rep.singular_values[std::size_t(rep.rank)];
        if( below > 0.0 )
        {
          rep.gap_ratio = rep.singular_values[std::size_t(rep.rank) - 1] / below;
          rep.indeterminate = *rep.gap_ratio < gap_indeterminate;
        }
      }
    }

    inline Eigen::VectorXd flatten(const DenseTensor<double>& t)
    {
      return Eigen::Map<const Eigen::VectorXd>(t.data().data(),
                                               Eigen::Index(t.data().size()));
    }
  }

  // chart around a base model: theta = (lambda, mu, x, y) with the frames
  // rotated as V0*exp(skew(x)) and W0*exp(skew(y)); n(n+1) free parameters
  inline JacobianReport param_jacobian_rank(const TrainModel& base, std::uint64_t seed)
  {
    base.left.validate(1e-6);
    base.right.validate(1e-6);
    const int n = base.left.n;
    if( n < 2 || base.right.n != n || base.left.frame.rows() != n ||
        base.right.frame.rows() != n )
      throw std::invalid_argument("param_jacobian_rank: need full-rank cores with n >= 2");

    const int nskew = n * (n - 1) / 2;
    const Eigen::Index nparams = Eigen::Index(n) * (n + 1);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(nparams);
    for( int i = 0; i < n; ++i )
    {
      theta(i) = base.left.lambdas[std::size_t(i)];
      theta(n + i) = base.right.lambdas[std::size_t(i)];
    }

    const auto chart = [&](const Eigen::VectorXd& th)
    {
      TrainModel m = base;
      for( int i = 0; i < n; ++i )
      {
        m.left.lambdas[std::size_t(i)] = th(i);
        m.right.lambdas[std::size_t(i)] = th(n + i);
      }
      const std::span<const double> all(th.data(), std::size_t(th.size()));
      m.left.frame = base.left.frame * expm(skew_from_params(n, all.subspan(2 * n, nskew)));
      m.right.frame =
          base.right.frame * expm(skew_from_params(n, all.subspan(2 * n + nskew, nskew)));
      return detail::flatten(build_train_closed_form(m));
    };

    JacobianReport rep;
    rep.n = n;
    rep.mode = "parameters";
    rep.seed = seed;
    rep.expected = nparams - 1;
    rep.exact_expectation = true;
    detail::decide_rank(rep, finite_difference_jacobian(chart, theta, fd_step));
    rep.pass = !rep.indeterminate && rep.rank == rep.expected;
    return rep;
  }

  inline JacobianReport param_jacobian_rank(int n, std::uint64_t seed)
  {
    if( n < 2 )
      throw std::invalid_argument("param_jacobian_rank: n must be at least 2");
    return param_jacobian_rank(sample_train_model(n, seed), seed);
  }

  // analytic Jacobian of the generator families at an explicit point
  inline JacobianReport variety_jacobian_at(int n, const DenseTensor<double>& point,
                                            std::uint64_t seed)
  {
    if( n < 2 || n > 3 )
      throw std::invalid_argument("variety_jacobian_at: n must be 2 or 3");
    if( require_order4_cubical(point) != std::size_t(n) )
      throw std::invalid_argument("variety_jacobian_at: point has the wrong side length");

    std::vector<SparsePolynomial> gens;
    const EquationSystem sys_p = gen_P(n), sys_q = gen_Q(n);
    for( const auto* sys : {&sys_p, &sys_q} )
      for( const auto& g : sys->generators )
        gens.push_back(g.poly);
    gens.push_back(gen_h(n));

    const std::span<const double> x(point.data().data(), point.data().size());
    const std::uint32_t nvars = std::uint32_t(x.size());
    Eigen::MatrixXd jac(Eigen::Index(gens.size()), Eigen::Index(nvars));
    for( std::size_t g = 0; g < gens.size(); ++g )
      for( std::uint32_t v = 0; v < nvars; ++v )
        jac(Eigen::Index(g), Eigen::Index(v)) = gens[g].derivative(v).eval(x);

    JacobianReport rep;
    rep.n = n;
    rep.mode = "variety";
    rep.seed = seed;
    // the parametrized set gives corank >= n(n+1)-1 at its smooth points;
    // equality is only asserted where it is known to hold (n = 2)
    rep.expected = Eigen::Index(n) * (n + 1) - 1;
    rep.exact_expectation = (n == 2);
    detail::decide_rank(rep, jac);
    rep.pass = !rep.indeterminate && (rep.exact_expectation ? rep.corank == rep.expected
                                                            : rep.corank >= rep.expected);
    return rep;
  }

  inline JacobianReport variety_jacobian_corank(int n, std::uint64_t seed)
  {
    if( n < 2 || n > 3 )
      throw std::invalid_argument("variety_jacobian_corank: n must be 2 or 3");
    return variety_jacobian_at(n, build_train(sample_train_model(n, seed)), seed);
  }
}
