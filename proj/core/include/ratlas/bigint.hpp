#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace ratlas {

// Region counts overflow 64-bit at modest widths, so every bound and count
// is carried in arbitrary precision; ratios stay exact rationals.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

}  // namespace ratlas
