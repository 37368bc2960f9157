#pragma once

#include <cmath>

namespace fairtrade::kernels::detail {

/// log(1 + e^z) without overflow.
inline double softplus(double z)
{
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double sigmoid(double z)
{
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

} // namespace fairtrade::kernels::detail
