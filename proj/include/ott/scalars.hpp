#pragma once

// scalar abstraction: the whole library is templated over T = double (numeric
// paths) or T = bigint (exact paths); these helpers paper over the differences

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <type_traits>

namespace ott
{
  using bigint = boost::multiprecision::cpp_int;

  inline double to_double(double x) { return x; }
  inline double to_double(const bigint& x) { return x.convert_to<double>(); }

  inline double abs_val(double x) { return std::fabs(x); }
  inline bigint abs_val(const bigint& x) { return boost::multiprecision::abs(x); }

  template <class T>
  inline constexpr bool is_exact_scalar_v = !std::is_floating_point_v<T>;
}
