#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "ccch/scattering.hpp"

using namespace ccch;

namespace {

const InitialDatum& sech_datum(int N) {
    static std::map<int, InitialDatum> cache;
    auto it = cache.find(N);
    if (it == cache.end()) it = cache.emplace(N, precompute_geometry(sech_profile(30.0, N, 0.6, 0.8), 30.0, N)).first;
    return it->second;
}

double max_sym(const SpectralTable& T) {
    const std::size_t n = T.z.size();
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) e = std::max(e, std::abs(T.r[j] + T.r[(j + n / 2) % n]));
    return e;
}

}  // namespace

TEST_CASE("zero datum scatters trivially") {
    std::vector<cplx> u(512, 0.0);
    auto D = precompute_geometry(u, 20.0, 512);
    CHECK(D.K == 0.0);
    for (cplx z : {cplx(0.3, 0.0), cplx(2.0, 0.0), cplx(0.5, 0.7), kI}) {
        auto s = scatter_at(D, z);
        CHECK(std::abs(s.a - 1.0) < 1e-14);
        CHECK(std::abs(s.b) < 1e-14);
    }
}

TEST_CASE("geometric integrals match quadrature oracle") {
    // mpmath quadrature of the analytic sech profile, amplitude 0.6, phase velocity 0.8
    const double g_im = 0.67270693283634642, K = 1.4339925807413106;
    const auto& D = sech_datum(1024);
    CHECK(std::abs(D.g.real()) < 1e-14);
    CHECK(std::abs(D.g.imag() - g_im) < 1e-9);
    CHECK(std::abs(D.K - K) < 1e-9);

    auto R = precompute_geometry(sech_profile(30.0, 512, 0.5, 0.0), 30.0, 512);
    CHECK(std::abs(R.g) < 1e-12);
}

TEST_CASE("a(i) equals exp(-K/2 - g)") {
    double prev = 0.0;
    for (int N : {512, 1024}) {
        const auto& D = sech_datum(N);
        cplx ai = scatter_at(D, kI).a;
        double err = std::abs(ai - std::exp(-0.5 * D.K - D.g));
        if (N == 1024) {
            CHECK(err < 1e-6);
            CHECK(prev / err > 8.0);
        }
        prev = err;
    }
}

TEST_CASE("unitarity and reflection symmetry on the real line") {
    auto T512 = scattering_coeffs(sech_datum(512), 128, 4);
    auto T1024 = scattering_coeffs(sech_datum(1024), 128, 4);
    double dev = 0.0, moddiff = 0.0;
    const std::size_t n = T1024.z.size();
    for (std::size_t j = 0; j < n; ++j) {
        dev = std::max(dev, std::abs(std::norm(T1024.a[j]) + std::norm(T1024.b[j]) - 1.0));
        moddiff = std::max(moddiff, std::abs(std::abs(T1024.a[j]) - std::abs(T1024.a[(j + n / 2) % n])));
    }
    CHECK(dev < 1e-12);
    CHECK(moddiff < 1e-5);
    double s1 = max_sym(T512), s2 = max_sym(T1024);
    CHECK(s2 < 1e-5);
    CHECK(s1 / s2 > 8.0);
}

TEST_CASE("stride halving converges at fourth order") {
    const auto& D = sech_datum(1024);
    for (double z : {0.5, 1.0, 3.0}) {
        cplx a1 = scatter_at(D, z, 1).a, a2 = scatter_at(D, z, 2).a, a4 = scatter_at(D, z, 4).a;
        double ratio = std::abs(a4 - a2) / std::abs(a2 - a1);
        CHECK(ratio > 12.0);
        CHECK(ratio < 20.0);
    }
}

TEST_CASE("Jost columns are analytic in the upper half plane") {
    const auto& D = sech_datum(512);
    cplx z0(0.4, 0.6);
    cplx s = 0.0;
    for (int k = 0; k < 32; ++k) s += scatter_at(D, z0 + 0.05 * std::polar(1.0, 2.0 * kPi * k / 32)).a;
    CHECK(std::abs(s / 32.0 - scatter_at(D, z0).a) < 1e-10);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(precompute_geometry(sech_profile(30.0, 128, 0.6, 0.0), 30.0, 128), ConfigError);
    try {
        precompute_geometry(sech_profile(5.0, 512, 0.6, 0.0), 5.0, 512);
        FAIL("expected DecayViolation");
    } catch (const NumericError& e) {
        CHECK(e.kind() == "DecayViolation");
    }
    CHECK_THROWS_AS(scatter_at(sech_datum(512), 0.0), NumericError);
    CHECK_THROWS_AS(spectral_phi_grid(30), ConfigError);
}

TEST_CASE("discrete spectrum") {
    SearchBox box{-4.0, 4.0, 0.02, 4.0};
    auto small = precompute_geometry(sech_profile(30.0, 512, 0.3, 0.5), 30.0, 512);
    CHECK(winding_number(small, box) == 0);

    auto D = precompute_geometry(sech_profile(30.0, 512, 1.0, 0.5), 30.0, 512);
    auto S = find_discrete_spectrum(D, box);
    REQUIRE(S.poles.size() == 2);
    cplx p = S.poles[0], q = S.poles[1];
    CHECK(std::abs(q + 1.0 / p) < 1e-4);
    CHECK(std::abs(S.norming[1] + S.norming[0] / (p * p)) < 1e-4 * std::abs(S.norming[1]));
    for (cplx z : S.poles) CHECK(std::abs(scatter_at(D, z).a) < 1e-10);
}
