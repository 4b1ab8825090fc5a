#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ccch/fft.hpp"
#include "ccch/pde_sim.hpp"
#include "ccch/scattering.hpp"
#include "ccch/soliton.hpp"

using namespace ccch;

namespace {

// Random trigonometric polynomial with modes |j| <= jmax on [-L, L).
std::vector<cplx> band_limited(double L, int N, int jmax, double amp, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> G(0.0, 1.0);
    auto x = periodic_grid(L, N);
    std::vector<cplx> f(x.size(), 0.0);
    for (int j = -jmax; j <= jmax; ++j) {
        cplx c(G(rng), G(rng));
        c *= amp / (1.0 + j * j);
        for (std::size_t n = 0; n < x.size(); ++n) f[n] += c * std::exp(kI * (kPi * j / L) * x[n]);
    }
    return f;
}

double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        num += std::norm(a[j] - b[j]);
        den += std::norm(b[j]);
    }
    return std::sqrt(num / den);
}

double sup_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s = std::max(s, std::abs(a[j] - b[j]));
    return s;
}

SolitonData validation_soliton() {
    SolitonData h;
    h.poles = {cplx(1.2, 0.8)};
    h.norming_mod = {cplx(0.3, 0.1)};
    return with_partners(h);
}

}  // namespace

TEST_CASE("Helmholtz inversion") {
    Simulator S(kPi, 64);
    auto x = periodic_grid(kPi, 64);
    std::vector<cplx> m(x.size()), c(x.size(), cplx(0.3, -0.7));
    for (std::size_t j = 0; j < x.size(); ++j) m[j] = std::exp(kI * x[j]);
    auto u = S.invert_helmholtz(m);
    for (std::size_t j = 0; j < x.size(); ++j) CHECK(std::abs(u[j] - 0.5 * m[j]) < 1e-14);
    auto uc = S.invert_helmholtz(c);
    CHECK(sup_diff(uc, c) < 1e-14);

    Simulator T(20.0, 512);
    auto r = band_limited(20.0, 512, 60, 1.0, 5);
    CHECK(sup_diff(T.apply_helmholtz(T.invert_helmholtz(r)), r) <= 1e-10);

    CHECK_THROWS_AS(Simulator(20.0, 500), ConfigError);
}

TEST_CASE("right-hand side") {
    const double L = 15.0;
    const int N = 256;
    Simulator S(L, N);
    std::vector<cplx> zero(std::size_t(N), 0.0);
    CHECK(sup_diff(S.rhs(zero), zero) == 0.0);

    // Modes below N/12 keep every cubic product inside the retained band, so the
    // filtered right-hand side equals the plain formula.
    auto u = band_limited(L, N, N / 12 - 1, 0.4, 9);
    auto m = S.apply_helmholtz(u);
    auto ux = spectral_derivative(u, 2 * L);
    std::vector<cplx> P(u.size()), Q(u.size()), expect(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        P[j] = m[j] * (std::norm(u[j]) - std::norm(ux[j]));
        Q[j] = m[j] * (u[j] * std::conj(ux[j]) - ux[j] * std::conj(u[j]));
    }
    auto Px = spectral_derivative(P, 2 * L);
    for (std::size_t j = 0; j < u.size(); ++j) expect[j] = ux[j] + 0.5 * Px[j] - 0.5 * Q[j];
    CHECK(sup_diff(S.rhs(m), expect) <= 1e-11);

    // Real data: the last bracket vanishes and the flow stays real.
    std::vector<cplx> ur(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) ur[j] = u[j].real();
    auto fr = S.rhs(S.apply_helmholtz(ur));
    double im = 0.0;
    for (const cplx& v : fr) im = std::max(im, std::abs(v.imag()));
    CHECK(im <= 1e-12);

    // Small amplitude: rhs - u_x is cubic in the amplitude.
    auto wave = [&](double eps) {
        std::vector<cplx> w(u.size());
        auto x = periodic_grid(L, N);
        for (std::size_t j = 0; j < w.size(); ++j) w[j] = eps * std::exp(kI * (3.0 * kPi / L) * x[j]);
        return w;
    };
    auto resid = [&](double eps) {
        auto w = wave(eps);
        return sup_diff(S.rhs(S.apply_helmholtz(w)), spectral_derivative(w, 2 * L));
    };
    double ratio = resid(1e-2) / resid(5e-3);
    CHECK(ratio == doctest::Approx(8.0).epsilon(0.01));
}

TEST_CASE("zero data and argument checks") {
    Simulator S(10.0, 128);
    auto init = S.snapshot_from_u(std::vector<cplx>(128, 0.0));
    auto tr = S.evolve(init, 0.25 * S.dx(), {1.0});
    CHECK(sup_diff(tr.snapshots.back().u, init.u) == 0.0);
    CHECK_THROWS_AS(S.evolve(init, 0.3 * S.dx(), {1.0}), ConfigError);
    CHECK_THROWS_AS(S.evolve(init, 0.1 * S.dx(), {0.0}), ConfigError);

    // A datum that fills the box trips the edge monitor.
    auto x = periodic_grid(10.0, 128);
    std::vector<cplx> wide(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) wide[j] = 0.3 / std::cosh(0.3 * x[j]);
    CHECK_THROWS_AS(S.evolve(S.snapshot_from_u(wide), 0.25 * S.dx(), {1.0}), NumericError);
}

TEST_CASE("one-soliton translates without change of shape") {
    const double L = 40.0;
    const int N = 1024;
    auto d = validation_soliton();
    auto P0 = soliton_on_grid(d, 0.0, L, N);
    Simulator S(L, N);
    auto tr = S.evolve(S.snapshot_from_u(P0.u), 0.25 * S.dx(), {1.0, 5.0});
    CHECK(rel_l2(tr.snapshots[1].u, soliton_on_grid(d, 1.0, L, N).u) <= 1e-4);
    CHECK(rel_l2(tr.snapshots[2].u, soliton_on_grid(d, 5.0, L, N).u) <= 1e-3);
    for (const cplx& g : tr.g) {
        CHECK(std::abs(g - tr.g[0]) <= 1e-6);
        CHECK(std::abs(g.real()) <= 1e-12);
    }
    CHECK(std::abs(tr.g[0] - P0.g_tilde) <= 1e-6);
}

TEST_CASE("fourth order in time and reality preservation") {
    const double L = 40.0;
    const int N = 256;
    Simulator S(L, N);
    auto m0 = S.snapshot_from_u(soliton_on_grid(validation_soliton(), 0.0, L, N).u).m;
    auto run = [&](double dt) {
        auto m = m0;
        for (int s = 0, n = int(std::lround(1.6 / dt)); s < n; ++s) m = S.step(m, dt);
        return m;
    };
    auto ref = run(0.0125);
    double e1 = sup_diff(run(0.4), ref), e2 = sup_diff(run(0.2), ref), e3 = sup_diff(run(0.1), ref);
    double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
    CHECK(std::abs(p1 - 4.0) <= 0.2);
    CHECK(std::abs(p2 - 4.0) <= 0.2);

    auto x = periodic_grid(30.0, 512);
    std::vector<cplx> u(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) u[j] = 0.5 / std::cosh(x[j]);
    Simulator R(30.0, 512);
    auto tr = R.evolve(R.snapshot_from_u(u), 0.25 * R.dx(), {2.0});
    double im = 0.0;
    for (const cplx& v : tr.snapshots.back().u) im = std::max(im, std::abs(v.imag()));
    CHECK(im <= 1e-12);
    CHECK(std::abs(tr.g.back()) <= 1e-12);
}
