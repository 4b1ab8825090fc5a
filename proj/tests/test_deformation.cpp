#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ccch/deformation.hpp"

using namespace ccch;

namespace {

// Odd under z -> -1/z, decaying at 0 and ∞.
cplx r_sym(double z) {
    double w = z - 1.0 / z, lam = 0.5 * (z + 1.0 / z);
    return cplx(0.5, 0.4) * std::exp(-0.25 * w * w) / lam;
}

cplx r_bump(double z) { return 0.6 * std::exp(-10.0 * (z - 1.0) * (z - 1.0)); }

ScalarFactor factor_for(const std::function<cplx(double)>& r, double xi, int nz = 512,
                        const DiscreteSpectrum& spec = {}, double delta0 = 0.01) {
    auto nu = NuProfile::from_table(table_from_function(r, nz, 40.0));
    auto P = partition_spectrum(spec, xi, delta0);
    return build_scalar_factor(nu, spec, P, stationary_points(xi));
}

double fitted_slope(double e1, double e2, double eps1, double eps2) { return std::log(e1 / e2) / std::log(eps1 / eps2); }

}  // namespace

TEST_CASE("partition by the sign of Im theta") {
    auto P0 = partition_spectrum({}, -0.5, 0.1);
    CHECK(P0.nabla.empty());
    CHECK(P0.delta.empty());
    CHECK(P0.lambda.empty());
    CHECK(std::isinf(P0.rho0));

    // On iℝ, Im θ(iy) = -(1/4)(y + 1/y)[ξ - 4/(y - 1/y)²]; y = 2 gives -0.5 at ξ = 0.8 + 16/9.
    DiscreteSpectrum S;
    S.poles = {cplx(0.0, 2.0)};
    const double xi = 0.8 + 16.0 / 9.0;
    CHECK(std::abs(im_theta(S.poles[0], xi) + 0.5) < 1e-14);
    auto P = partition_spectrum(S, xi, 0.1);
    CHECK(P.nabla == std::vector<int>{0});
    CHECK(P.delta.empty());
    CHECK(P.lambda.empty());
    CHECK(std::abs(P.rho0 - 0.5) < 1e-14);
    CHECK_THROWS_AS(partition_spectrum(S, xi, 0.5), NumericError);

    auto all = partition_spectrum(S, xi, std::numeric_limits<double>::infinity());
    CHECK(all.lambda == std::vector<int>{0});
    CHECK(all.n_lambda == 1);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-2.0, 2.0), V(0.1, 2.0);
    for (int k = 0; k < 50; ++k) {
        DiscreteSpectrum D;
        D.poles = {cplx(U(rng), V(rng)), cplx(U(rng), V(rng))};
        double x = U(rng);
        auto Q = partition_spectrum(D, x, 0.3);
        for (int n = 0; n < 2; ++n) {
            double im = theta(D.poles[std::size_t(n)], x).imag();
            CHECK((std::count(Q.nabla.begin(), Q.nabla.end(), n) == 1) == (im < 0));
            CHECK((std::count(Q.delta.begin(), Q.delta.end(), n) == 1) == (im > 0));
            CHECK((std::count(Q.lambda.begin(), Q.lambda.end(), n) == 1) == (std::abs(im) <= 0.3));
        }
    }
}

TEST_CASE("reflectionless scalar factor") {
    auto F = factor_for([](double) { return cplx(0.0); }, -0.5);
    CHECK(F.nu.is_zero());
    CHECK(std::abs(F.T(cplx(0.3, 0.7)) - 1.0) < 1e-15);
    CHECK(F.Sigma0 == cplx(0.0));

    DiscreteSpectrum S;
    S.poles = {cplx(0.0, 2.0)};
    REQUIRE(im_theta(S.poles[0], -2.0) > 0.0);
    auto B = factor_for([](double) { return cplx(0.0); }, -2.0, 512, S);
    CHECK(std::abs(B.T_at_i - (-1.0 / 3.0)) < 1e-15);
    cplx z(0.4, -1.3);
    CHECK(std::abs(B.T(z) - (z - 2.0 * kI) / (z + 2.0 * kI)) < 1e-15);

    auto C = factor_for([](double) { return cplx(0.0); }, -0.5, 512, S);
    for (std::size_t j = 0; j < C.points.size(); ++j) {
        CHECK(C.beta_j[j] == 0.0);
        double x = C.points[j];
        CHECK(std::abs(C.T_j[j] - (x - 2.0 * kI) / (x + 2.0 * kI)) < 1e-15);
    }
}

TEST_CASE("T symmetries and normalisation") {
    for (double xi : {-2.0, -0.5, 0.05}) {
        auto F = factor_for(r_sym, xi);
        CHECK(std::abs(F.T(0.0) - 1.0) < 1e-8);
        CHECK(std::abs(F.T(1e13) - 1.0) < 1e-8);
        CHECK(std::abs(F.T(cplx(0.0, 1e6)) - 1.0) < 1e-5);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(-3.0, 3.0);
        double e1 = 0.0, e2 = 0.0;
        for (int k = 0; k < 100; ++k) {
            cplx z(U(rng), U(rng));
            if (std::abs(z.imag()) < 0.05 || std::abs(z) < 0.05) continue;
            cplx t = F.T(z);
            e1 = std::max(e1, std::abs(t - F.T(-1.0 / z)));
            e2 = std::max(e2, std::abs(t - 1.0 / std::conj(F.T(std::conj(z)))));
        }
        CHECK(e1 < 1e-8);
        CHECK(e2 < 1e-12);
        for (cplx t : F.T_j) CHECK(std::abs(std::abs(t) - 1.0) < 1e-12);
    }
}

TEST_CASE("boundary jump of T across Sigma(xi)") {
    auto F = factor_for(r_sym, -0.5);
    int probes = 0;
    double worst = 0.0, worst_raw = 0.0;
    for (double s = -6.0; s < 6.0; s += 0.29) {
        bool inside = false;
        for (auto [a, b] : F.sigma_xi) inside = inside || (s > a + 0.05 && s < b - 0.05);
        if (!inside || std::abs(s) < 0.2) continue;
        ++probes;
        double expect = 1.0 + std::norm(r_sym(s));
        cplx ratio = F.T(cplx(s, -1e-6)) / F.T(cplx(s, 1e-6));
        worst = std::max(worst, std::abs(ratio - expect));
        cplx raw = F.T(cplx(s, -1e-3)) / F.T(cplx(s, 1e-3));
        worst_raw = std::max(worst_raw, std::abs(raw - expect));
    }
    CHECK(probes >= 20);
    CHECK(worst < 1e-6);
    CHECK(worst_raw < 1e-2);

    // T is continuous across ℝ∖Σ(ξ).
    double gap = 0.5 * (F.points[1] + F.points[0]);
    CHECK(std::abs(F.T(cplx(gap, 1e-6)) - F.T(cplx(gap, -1e-6))) < 1e-5);
}

TEST_CASE("Blaschke zeros and poles") {
    DiscreteSpectrum S;
    S.poles = {cplx(0.0, 2.0), cplx(0.0, 0.5)};
    auto F = factor_for(r_sym, -2.0, 512, S);
    REQUIRE(F.blaschke.size() == 2);
    for (cplx p : S.poles) {
        CHECK(std::abs(F.T(p + 1e-4)) < 1e-3);
        CHECK(std::abs(F.T(std::conj(p) + 1e-4)) > 1e3);
    }
    // Product form of T(i) over the pair ϱ, -1/ϱ.
    cplx rho = S.poles[0];
    cplx prod = (kI - rho) / (kI - std::conj(rho)) * (kI + 1.0 / rho) / (kI + 1.0 / std::conj(rho));
    CHECK(std::abs(F.T_at_i - prod * F.delta(kI)) < 1e-14);
}

TEST_CASE("expansion of T at i") {
    auto F = factor_for(r_sym, -0.5);
    CHECK(std::abs(F.Sigma0) < 1e-10);  // symmetric data has T'(i) = 0

    auto G = factor_for(r_bump, -0.5, 1024);
    CHECK(std::abs(G.Sigma0) > 1e-5);
    const double h = 1e-4;
    cplx dlog = (G.T(kI + h) - G.T(kI - h)) / (2.0 * h) / G.T_at_i;
    CHECK(std::abs(dlog + G.Sigma0) < 1e-7);
    for (double ang : {0.3, 1.9, -2.5}) {
        cplx e = std::polar(1.0, ang);
        auto err = [&](double eps) {
            return std::abs(G.T(kI + eps * e) - G.T_at_i * (1.0 - G.Sigma0 * eps * e));
        };
        CHECK(fitted_slope(err(1e-2), err(1e-3), 1e-2, 1e-3) >= 1.9);
    }

    auto nu512 = NuProfile::from_table(table_from_function(r_bump, 512, 40.0));
    auto nu1024 = NuProfile::from_table(table_from_function(r_bump, 1024, 40.0));
    auto pp = stationary_points(-0.5);
    CHECK(std::abs(sigma0(nu512, pp) - sigma0(nu1024, pp)) < 1e-8);
}

TEST_CASE("local behaviour at stationary points") {
    for (double xi : {-0.5, 0.05}) {
        auto F = factor_for(r_sym, xi, 1024);
        for (std::size_t j = 0; j < F.points.size(); ++j) {
            if (std::abs(F.nu_j[j]) < 1e-6) continue;
            for (double w : {0.7, 1.6, 2.4, -0.7, -1.6, -2.4}) {
                cplx e = std::polar(1.0, w);
                auto err = [&](double eps) {
                    cplx z = F.points[j] + eps * e;
                    return std::abs(F.T(z) - F.T_local(j, z));
                };
                double e1 = err(1e-2), e2 = err(1e-3);
                CHECK(fitted_slope(e1, e2, 1e-2, 1e-3) >= 0.45);
                CHECK(e2 < 1e-2);
            }
        }
    }
}
