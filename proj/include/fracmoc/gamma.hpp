#pragma once

#include <cmath>

#include "fracmoc/errors.hpp"

namespace fracmoc {

template <typename Scalar>
constexpr bool is_gamma_pole(Scalar z) {
    return z <= Scalar(0) && std::floor(z) == z;
}

// Gamma function; throws PoleError at non-positive integers.
template <typename Scalar>
Scalar gamma(Scalar z) {
    using std::tgamma;
    if (is_gamma_pole(z)) throw PoleError("gamma function pole at " + std::to_string(double(z)));
    return tgamma(z);
}

// 1/Gamma(z), with the entire-function convention 1/Gamma(pole) = 0.
template <typename Scalar>
Scalar rgamma(Scalar z) {
    using std::tgamma;
    if (is_gamma_pole(z)) return Scalar(0);
    return Scalar(1) / tgamma(z);
}

}  // namespace fracmoc
