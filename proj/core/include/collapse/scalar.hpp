#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <string>

namespace collapse {

// Wide binary float for collapse runs. Inter-particle gaps shrink like 1e-300
// after ~200 collisions, far below what double can resolve next to O(1)
// positions, so the event-driven flow is also instantiated on this type.
using HighReal = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<400>, boost::multiprecision::et_off>;

template <class Real>
inline double to_double(const Real& x) {
  return static_cast<double>(x);
}

template <class Real>
inline Real from_double(double x) {
  return Real(x);
}

// 17 significant digits for double, full precision otherwise.
std::string format_real(double x);
std::string format_real(const HighReal& x);

}  // namespace collapse
