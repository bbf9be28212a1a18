#pragma once

// counter-based deterministic RNG: draw #i from (seed, stream) is a pure hash
// of (seed, stream, i), so independent streams never interact and a run is
// reproducible from the seed list alone regardless of evaluation order

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace ott
{
  class Rng
  {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream ^ 0x9e3779b97f4a7c15ull)))
    {
    }

    std::uint64_t next_u64()
    {
      ++counter_;
      return mix(key_ + counter_ * 0x9e3779b97f4a7c15ull);
    }

    // uniform in [0,1), 53 random bits
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n)
    {
      if( n == 0 )
        throw std::invalid_argument("Rng::below: empty range");
      const std::uint64_t thresh = (0 - n) % n; // 2^64 mod n
      std::uint64_t v;
      do
      {
        v = next_u64();
      } while( v < thresh );
      return v % n;
    }

    // standard normal via Box-Muller (second sample cached)
    double normal()
    {
      if( have_spare_ )
      {
        have_spare_ = false;
        return spare_;
      }
      double u1;
      do
      {
        u1 = uniform01();
      } while( u1 <= 0.0 );
      const double u2 = uniform01();
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double a = 2.0 * std::numbers::pi * u2;
      spare_ = r * std::sin(a);
      have_spare_ = true;
      return r * std::cos(a);
    }

  private:
    static constexpr std::uint64_t mix(std::uint64_t z)
    {
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0;
    bool have_spare_ = false;
  };
}
