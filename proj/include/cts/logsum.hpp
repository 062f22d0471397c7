// log2-domain accumulation helpers

#ifndef __CTS_LOGSUM_HPP__
#define __CTS_LOGSUM_HPP__

#include <cmath>
#include <limits>
#include <utility>

namespace cts {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInvLn2 = 1.4426950408889634074; // 1 / ln 2

// log2(2^x + 2^y), stable for widely separated magnitudes
inline double logsum2(double x, double y) {
    if (x < y) std::swap(x, y);
    if (y == kNegInf) return x; // covers x = y = -inf as well
    return x + std::log1p(std::exp2(y - x)) * kInvLn2;
}

} // namespace cts

#endif
