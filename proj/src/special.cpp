#include "ccch/special.hpp"

#include <array>
#include <cmath>

namespace ccch {

namespace {

using ld = long double;
using cld = std::complex<ld>;

bool is_pole(cld z) {
    ld re = z.real();
    return std::abs(z.imag()) < 1e-14L && re <= 0.5L && std::abs(re - std::round(re)) < 1e-14L;
}

// log Γ(z) for Re z >= 1/2: shift to Re z >= 20, then the Stirling series.
cld lgamma_right(cld z) {
    constexpr std::array<ld, 10> kB = {
        1.0L / 12, -1.0L / 360, 1.0L / 1260, -1.0L / 1680, 1.0L / 1188,
        -691.0L / 360360, 1.0L / 156, -3617.0L / 122400, 43867.0L / 244188, -174611.0L / 125400};
    cld shift = 0.0L;
    while (z.real() < 20.0L) {
        shift += std::log(z);
        z += 1.0L;
    }
    const ld half_log_2pi = 0.91893853320467274178032973640562L;
    cld inv = 1.0L / z, inv2 = inv * inv, sum = 0.0L, pw = inv;
    for (ld b : kB) {
        sum += b * pw;
        pw *= inv2;
    }
    return (z - 0.5L) * std::log(z) - z + half_log_2pi + sum - shift;
}

cld lgamma_ld(cld z) {
    const ld pi = 3.14159265358979323846264338327950288L;
    if (z.real() < 0.5L) {
        // Γ(z)Γ(1-z) = π / sin(πz)
        return std::log(cld(pi)) - std::log(std::sin(pi * z)) - lgamma_right(1.0L - z);
    }
    return lgamma_right(z);
}

cld rgamma_ld(cld z) {
    if (is_pole(z)) return 0.0L;
    return std::exp(-lgamma_ld(z));
}

// e^{-z^2/4}-weighted Kummer representation, accurate for |z| <= 7.
cld pcfd_series(cld a, cld z) {
    const ld pi = 3.14159265358979323846264338327950288L;
    cld x = z * z / 2.0L;
    auto kummer = [&](cld alpha, ld beta) {
        cld term = 1.0L, sum = 1.0L;
        for (int n = 0; n < 400; ++n) {
            term *= (alpha + ld(n)) / ((beta + ld(n)) * ld(n + 1)) * x;
            sum += term;
            if (std::abs(term) < 1e-22L * std::abs(sum) && n > 4) break;
        }
        return sum;
    };
    cld c1 = std::sqrt(pi) * rgamma_ld((1.0L - a) / 2.0L);
    cld c2 = std::sqrt(2.0L * pi) * rgamma_ld(-a / 2.0L);
    cld pre = std::exp(a / 2.0L * std::log(2.0L) - z * z / 4.0L);
    return pre * (c1 * kummer(-a / 2.0L, 0.5L) - c2 * z * kummer((1.0L - a) / 2.0L, 1.5L));
}

// Large-|z| expansion, valid for |arg z| < 3π/4; called with |arg z| <= π/2.
cld pcfd_asym(cld a, cld z) {
    cld inv = 1.0L / (2.0L * z * z);
    cld term = 1.0L, sum = 1.0L;
    ld prev = 1.0L;
    for (int s = 1; s < 200; ++s) {
        term *= -(-a + ld(2 * s - 2)) * (-a + ld(2 * s - 1)) / ld(s) * inv;
        ld mag = std::abs(term);
        if (mag > prev) break;  // optimal truncation
        sum += term;
        prev = mag;
        if (mag < 1e-21L * std::abs(sum)) break;
    }
    return std::exp(a * std::log(z) - z * z / 4.0L) * sum;
}

cld pcfd_ld(cld a, cld z) {
    const ld pi = 3.14159265358979323846264338327950288L;
    if (std::abs(z) < 7.0L) return pcfd_series(a, z);
    ld ph = std::arg(z);
    if (std::abs(ph) <= pi / 2.0L) return pcfd_asym(a, z);
    cld i(0.0L, 1.0L);
    cld k = std::sqrt(2.0L * pi) * rgamma_ld(-a);
    if (ph > 0) {
        // D_a(z) = e^{iπa} D_a(-z) + √(2π)/Γ(-a) e^{iπ(a+1)/2} D_{-a-1}(-iz)
        return std::exp(i * pi * a) * pcfd_asym(a, -z) +
               k * std::exp(i * pi * (a + 1.0L) / 2.0L) * pcfd_asym(-a - 1.0L, -i * z);
    }
    // D_a(z) = e^{-iπa} D_a(-z) + √(2π)/Γ(-a) e^{-iπ(a+1)/2} D_{-a-1}(iz)
    return std::exp(-i * pi * a) * pcfd_asym(a, -z) +
           k * std::exp(-i * pi * (a + 1.0L) / 2.0L) * pcfd_asym(-a - 1.0L, i * z);
}

cplx to_d(cld v) { return {double(v.real()), double(v.imag())}; }
cld to_ld(cplx v) { return {ld(v.real()), ld(v.imag())}; }

}  // namespace

cplx complex_lgamma(cplx z) {
    if (is_pole(to_ld(z))) throw NumericError("PoleOfGamma", "gamma evaluated at a non-positive integer");
    return to_d(lgamma_ld(to_ld(z)));
}

cplx complex_gamma(cplx z) { return std::exp(complex_lgamma(z)); }

cplx complex_rgamma(cplx z) { return to_d(rgamma_ld(to_ld(z))); }

cplx parabolic_cylinder_D(cplx a, cplx z) {
    if (std::abs(z) > 50.0) throw NumericError("EnvelopeExceeded", "|z| > 50 for parabolic cylinder D");
    return to_d(pcfd_ld(to_ld(a), to_ld(z)));
}

}  // namespace ccch
