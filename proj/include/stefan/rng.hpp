#pragma once

#include <array>
#include <cstdint>

namespace stefan::rng {

/// Counter-based generator (Philox4x32-10, Salmon et al., SC 2011).
///
/// Every random quantity in the particle module is a pure function of
/// (seed, stream id, step, slot), so runs are reproducible bit-for-bit
/// regardless of thread count or evaluation order.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::uint64_t key);

/// Two independent uniforms in the open interval (0, 1) from one block.
struct UniformPair {
    double u0;
    double u1;
};

UniformPair uniform_pair(std::uint64_t seed, std::uint64_t stream,
                         std::uint32_t step, std::uint32_t slot);

/// Maps a 64-bit word to (0, 1); never returns 0 or 1 exactly.
double to_open_unit(std::uint64_t bits);

/// Standard normal CDF via erfc (double precision).
double normal_cdf(double x);

/// Inverse standard normal CDF. Rational initial guess (Acklam) plus one
/// Halley refinement against normal_cdf; absolute error below 1e-14 on
/// (1e-300, 1 - 1e-16).
double normal_quantile(double u);

} // namespace stefan::rng
