#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>

namespace trapmodes {

// Extended scalar for quantities that sit far below double epsilon
// (exponentially small eigenvalue deviations and splittings).
using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<130>,
                                           boost::multiprecision::et_off>;

template <class Real>
inline double to_double(const Real& x) {
    return static_cast<double>(x);
}

template <class Real>
inline Real abs_of(const Real& x) {
    using std::abs;
    return abs(x);
}

template <class Real>
inline Real sqrt_of(const Real& x) {
    using std::sqrt;
    return sqrt(x);
}

template <class Real>
inline Real epsilon_of() {
    return std::numeric_limits<Real>::epsilon();
}

template <class Real>
constexpr const char* scalar_name() {
    if constexpr (std::is_same_v<Real, double>) {
        return "double";
    } else {
        return "binary-float-130";
    }
}

// Full-precision decimal rendering, used for reports that must keep digits
// below double resolution.
template <class Real>
std::string to_decimal(const Real& x, int digits = 40) {
    std::ostringstream out;
    out.precision(digits);
    out << std::scientific << x;
    return out.str();
}

}  // namespace trapmodes
