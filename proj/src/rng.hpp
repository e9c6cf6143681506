#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace poisswave::detail {

// All draws go through these helpers; std::* distributions are
// implementation-defined and would break cross-library reproducibility.

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double exponential1(std::mt19937_64& rng) {
    return -std::log1p(-uniform01(rng));
}

// Exponential spacings: K = #arrivals of a unit Poisson process before
// lambda.  O(lambda) draws; exact for any lambda >= 0.
inline std::int64_t poisson_count(std::mt19937_64& rng, double lambda) {
    std::int64_t k = 0;
    double acc = exponential1(rng);
    while (acc <= lambda) {
        ++k;
        acc += exponential1(rng);
    }
    return k;
}

}  // namespace poisswave::detail
