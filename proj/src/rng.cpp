#include "stefan/rng.hpp"

#include <cmath>

namespace stefan::rng {

namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                      std::uint32_t& hi) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         const std::array<std::uint32_t, 2>& key) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kPhiloxM4x32A, ctr[0], lo0, hi0);
    mul_hi_lo(kPhiloxM4x32B, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::uint64_t key) {
    std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(key),
                                      static_cast<std::uint32_t>(key >> 32)};
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kPhiloxW32A;
            k[1] += kPhiloxW32B;
        }
        philox_round(counter, k);
    }
    return counter;
}

double to_open_unit(std::uint64_t bits) {
    // 52 significant bits, offset by half a step; both endpoints land on
    // representable doubles strictly inside (0, 1).
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

UniformPair uniform_pair(std::uint64_t seed, std::uint64_t stream,
                         std::uint32_t step, std::uint32_t slot) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(stream),
        static_cast<std::uint32_t>(stream >> 32), step, slot};
    const auto out = philox4x32(ctr, seed);
    const std::uint64_t w0 =
        (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const std::uint64_t w1 =
        (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    return {to_open_unit(w0), to_open_unit(w1)};
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

namespace {

// Acklam's rational approximation to the inverse normal CDF.
double acklam_guess(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
                c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
                 c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
            a[5]) *
           q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

double normal_quantile(double u) {
    if (u <= 0.0 || u >= 1.0) {
        // Callers feed open-interval uniforms; clamp defensively.
        u = u <= 0.0 ? 5e-324 : 1.0 - 1e-16;
    }
    double x = acklam_guess(u);
    // One Halley step: e = Phi(x) - u, phi = density at x.
    const double e = normal_cdf(x) - u;
    const double phi =
        0.3989422804014326779 * std::exp(-0.5 * x * x);
    if (phi > 0.0) {
        const double t = e / phi;
        x -= t / (1.0 + 0.5 * x * t);
    }
    return x;
}

} // namespace stefan::rng
