#ifndef CTAH_MATH_UTIL_HPP
#define CTAH_MATH_UTIL_HPP

#include <cmath>
#include <limits>
#include <span>

namespace ctah {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();
inline const double kLn2 = std::log(2.0);

// log(e^a + e^b), safe for -inf arguments.
inline double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double hi = a > b ? a : b;
    double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

// log sum of exponentials of a sequence; -inf for an empty or all -inf input.
inline double log_sum_exp(std::span<const double> xs) {
    double acc = kNegInf;
    for (double x : xs) acc = log_add(acc, x);
    return acc;
}

} // namespace ctah

#endif // CTAH_MATH_UTIL_HPP
