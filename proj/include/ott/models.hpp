#pragma once

// model structs for odeco cores and length-2 trains, deterministic samplers,
// tensor builders and the odeco certificate

#include "rng.hpp"
#include "tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ott
{
  // fixed stream ids so every sampled object depends only on (seed, purpose)
  namespace streams
  {
    inline constexpr std::uint64_t frame_left = 11;
    inline constexpr std::uint64_t frame_right = 12;
    inline constexpr std::uint64_t weights_left = 13;
    inline constexpr std::uint64_t weights_right = 14;
    inline constexpr std::uint64_t generic_dirs = 15;
    inline constexpr std::uint64_t generic_weights = 16;
    inline constexpr std::uint64_t plant = 17;
  }

  // orthogonally decomposable core: T = sum_i lambda_i v_i^x3, rows of
  // `frame` are the v_i
  struct OdecoModel
  {
    int n = 0;
    std::vector<double> lambdas;
    Eigen::MatrixXd frame; // r x n

    void validate(double tol = 1e-12) const
    {
      if( n < 1 )
        throw std::invalid_argument("OdecoModel: n must be positive");
      const auto r = frame.rows();
      if( frame.cols() != n || std::size_t(r) != lambdas.size() || r < 1 || r > n )
        throw std::invalid_argument("OdecoModel: inconsistent sizes");
      const Eigen::MatrixXd gram = frame * frame.transpose();
      const double dev = (gram - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff();
      if( dev > tol )
        throw std::invalid_argument("OdecoModel: frame rows not orthonormal");
    }
  };

  struct TrainModel
  {
    OdecoModel left, right;

    void validate(double tol = 1e-12) const
    {
      left.validate(tol);
      right.validate(tol);
      if( left.n != right.n )
        throw std::invalid_argument("TrainModel: cores have different ambient dimension");
    }
  };

  // rank-r core with unit but not necessarily orthogonal directions
  struct GenericRankModel
  {
    int n = 0;
    std::vector<double> weights;
    Eigen::MatrixXd directions; // r x n, unit rows

    void validate(double tol = 1e-12) const
    {
      if( n < 1 )
        throw std::invalid_argument("GenericRankModel: n must be positive");
      const auto r = directions.rows();
      if( directions.cols() != n || std::size_t(r) != weights.size() || r < 1 )
        throw std::invalid_argument("GenericRankModel: inconsistent sizes");
      for( Eigen::Index i = 0; i < r; ++i )
        if( std::fabs(directions.row(i).norm() - 1.0) > tol )
          throw std::invalid_argument("GenericRankModel: direction rows not unit length");
    }
  };

  // Haar-distributed orthonormal frame (rows): Gaussian fill, QR, then fix
  // the sign ambiguity by making the R diagonal positive
  inline Eigen::MatrixXd sample_orthonormal_frame(int n, std::uint64_t seed,
                                                  std::uint64_t stream = streams::frame_left)
  {
    if( n < 1 )
      throw std::invalid_argument("sample_orthonormal_frame: n must be positive");
    Rng rng(seed, stream);
    Eigen::MatrixXd a(n, n);
    for( int i = 0; i < n; ++i )
      for( int j = 0; j < n; ++j )
        a(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for( int j = 0; j < n; ++j )
      if( r(j, j) < 0 )
        q.col(j) = -q.col(j);
    return q.transpose();
  }

  // weight magnitude uniform in [0.5, 2], sign fair
  inline std::vector<double> sample_weights(int r, std::uint64_t seed, std::uint64_t stream)
  {
    Rng rng(seed, stream);
    std::vector<double> w(r);
    for( int i = 0; i < r; ++i )
    {
      const double mag = rng.uniform(0.5, 2.0);
      w[i] = (rng.below(2) == 0) ? mag : -mag;
    }
    return w;
  }

  inline OdecoModel sample_odeco_model(int n, std::uint64_t seed)
  {
    if( n < 2 )
      throw std::invalid_argument("sample_odeco_model: n must be at least 2");
    OdecoModel m;
    m.n = n;
    m.frame = sample_orthonormal_frame(n, seed, streams::frame_left);
    m.lambdas = sample_weights(n, seed, streams::weights_left);
    return m;
  }

  inline TrainModel sample_train_model(int n, std::uint64_t seed)
  {
    if( n < 2 )
      throw std::invalid_argument("sample_train_model: n must be at least 2");
    TrainModel m;
    m.left.n = n;
    m.left.frame = sample_orthonormal_frame(n, seed, streams::frame_left);
    m.left.lambdas = sample_weights(n, seed, streams::weights_left);
    m.right.n = n;
    m.right.frame = sample_orthonormal_frame(n, seed, streams::frame_right);
    m.right.lambdas = sample_weights(n, seed, streams::weights_right);
    return m;
  }

  // deliberately non-odeco: two frame rows are made to overlap, so the
  // certificate must reject the built tensor; the returned struct will not
  // pass validate()
  inline OdecoModel sample_planted_model(int n, std::uint64_t seed)
  {
    OdecoModel m = sample_odeco_model(n, seed);
    Rng rng(seed, streams::plant);
    const double c = rng.uniform(0.5, 0.9);
    m.frame.row(1) = c * m.frame.row(0) + std::sqrt(1.0 - c * c) * m.frame.row(1);
    return m;
  }

  inline GenericRankModel sample_generic_model(int n, int r, std::uint64_t seed,
                                               std::uint64_t side = 0)
  {
    if( n < 2 || r < 1 )
      throw std::invalid_argument("sample_generic_model: need n >= 2 and r >= 1");
    GenericRankModel m;
    m.n = n;
    Rng dirs(seed, streams::generic_dirs + 100 * side);
    m.directions.resize(r, n);
    for( int i = 0; i < r; ++i )
    {
      for( int j = 0; j < n; ++j )
        m.directions(i, j) = dirs.normal();
      m.directions.row(i).normalize();
    }
    m.weights = sample_weights(r, seed, streams::generic_weights + 100 * side);
    return m;
  }

  // T[a,b,s] = sum_i w_i u_ia u_ib u_is
  inline DenseTensor<double> build_symmetric_core(const std::vector<double>& weights,
                                                  const Eigen::MatrixXd& dirs)
  {
    const std::size_t n = std::size_t(dirs.cols());
    const std::size_t r = std::size_t(dirs.rows());
    DenseTensor<double> t({n, n, n});
    std::size_t flat = 0;
    for( std::size_t a = 0; a < n; ++a )
      for( std::size_t b = 0; b < n; ++b )
        for( std::size_t s = 0; s < n; ++s, ++flat )
        {
          double acc = 0;
          for( std::size_t i = 0; i < r; ++i )
            acc += weights[i] * dirs(i, a) * dirs(i, b) * dirs(i, s);
          t[flat] = acc;
        }
    return t;
  }

  inline DenseTensor<double> build_odeco(const OdecoModel& m)
  {
    return build_symmetric_core(m.lambdas, m.frame);
  }

  // p[a,b,c,d] = sum_s T[a,b,s] S[c,d,s]
  inline DenseTensor<double> build_train(const TrainModel& m)
  {
    return contract(build_odeco(m.left), build_odeco(m.right), 2, 2);
  }

  // p[a,b,c,d] = sum_{i,j} lambda_i mu_j <v_i, w_j> v_ia v_ib w_jc w_jd
  inline DenseTensor<double> build_train_closed_form(const TrainModel& m)
  {
    const std::size_t n = std::size_t(m.left.n);
    const std::size_t rl = m.left.lambdas.size();
    const std::size_t rr = m.right.lambdas.size();
    DenseTensor<double> p({n, n, n, n});
    for( std::size_t i = 0; i < rl; ++i )
      for( std::size_t j = 0; j < rr; ++j )
      {
        const double w = m.left.lambdas[i] * m.right.lambdas[j] *
                         m.left.frame.row(i).dot(m.right.frame.row(j));
        std::size_t flat = 0;
        for( std::size_t a = 0; a < n; ++a )
          for( std::size_t b = 0; b < n; ++b )
          {
            const double vab = w * m.left.frame(i, a) * m.left.frame(i, b);
            for( std::size_t c = 0; c < n; ++c )
              for( std::size_t d = 0; d < n; ++d, ++flat )
                p[flat] += vab * m.right.frame(j, c) * m.right.frame(j, d);
          }
      }
    return p;
  }

  inline DenseTensor<double> build_generic_train(const GenericRankModel& left,
                                                 const GenericRankModel& right)
  {
    if( left.n != right.n )
      throw std::invalid_argument("build_generic_train: ambient dimensions differ");
    return contract(build_symmetric_core(left.weights, left.directions),
                    build_symmetric_core(right.weights, right.directions), 2, 2);
  }

  struct CertifyResult
  {
    double residual = 0;
    bool pass = false;
  };

  // odeco certificate for an order-d tensor (d >= 3).  general mode: for each
  // mode q, contracting t with itself over q must be symmetric under swapping
  // the two copies of each surviving mode.  symmetric mode (for symmetric
  // input): a single self-contraction must be symmetric in all 2(d-1) modes.
  // residual is normalized by the squared Frobenius norm of t.
  inline CertifyResult certify_odeco(const DenseTensor<double>& t, double tol = 1e-10,
                                     bool symmetric = false)
  {
    const std::size_t d = t.order();
    if( d < 3 )
      throw std::invalid_argument("certify_odeco: tensor order must be at least 3");

    const double nrm = frobenius_norm(t);
    if( nrm == 0.0 )
      return {0.0, true};

    double worst = 0;
    if( symmetric )
    {
      const DenseTensor<double> c = self_contract(t, 0);
      std::vector<std::size_t> all(c.order());
      for( std::size_t k = 0; k < all.size(); ++k )
        all[k] = k;
      worst = symmetry_residual(c, {all});
    }
    else
    {
      for( std::size_t q = 0; q < d; ++q )
      {
        const DenseTensor<double> c = self_contract(t, q);
        std::vector<std::vector<std::size_t>> groups;
        for( std::size_t l = 0; l + 1 < d; ++l )
          groups.push_back({l, (d - 1) + l});
        worst = std::max(worst, symmetry_residual(c, groups));
      }
    }
    const double residual = worst / (nrm * nrm);
    return {residual, residual <= tol};
  }
}
