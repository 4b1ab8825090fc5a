#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ccch/asymptotics.hpp"
#include "ccch/special.hpp"

using namespace ccch;

namespace {

struct Profile {
    cplx amp;
    double centre, width;
    cplx operator()(double s) const { return amp * std::exp(-(s - centre) * (s - centre) / (width * width)); }
};

ScalarFactor factor_for(const std::function<cplx(double)>& r, double xi, const DiscreteSpectrum& spec = {},
                        double delta0 = 0.1) {
    auto nu = NuProfile::from_table(table_from_function(r, 256, 40.0));
    return build_scalar_factor(nu, spec, partition_spectrum(spec, xi, delta0), stationary_points(xi));
}

double wrap(double a) { return std::remainder(a, 2.0 * kPi); }

Mat2 random_mat(std::mt19937_64& g, double s = 1.0) {
    std::normal_distribution<double> N(0.0, s);
    return mat2(cplx(N(g), N(g)), cplx(N(g), N(g)), cplx(N(g), N(g)), cplx(N(g), N(g)));
}

// Odd under s -> -1/s like genuine reflection data, so Σ0 = 0.
cplx r_sym(double z) {
    double w = z - 1.0 / z, lam = 0.5 * (z + 1.0 / z);
    return cplx(0.5, 0.4) * std::exp(-0.25 * w * w) / lam;
}

}  // namespace

TEST_CASE("local model identities over random profiles") {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double prod_err = 0.0, mod_err = 0.0, arg_err = 0.0, rs_err = 0.0, der_mod = 0.0, der_prod = 0.0, sq_err = 0.0;
    int points = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Profile p{std::polar(0.05 + 1.5 * U(g), 2.0 * kPi * U(g)), -3.0 + 6.0 * U(g), 0.3 + 2.0 * U(g)};
        double xi = trial % 2 ? -0.95 + 0.9 * U(g) : 0.01 + 0.11 * U(g);
        auto P = stationary_points(xi);
        auto F = factor_for(p, xi);
        double t = 10.0 + 200.0 * U(g);
        auto L = local_model_data(p, F, P, t);
        for (const auto& q : L.points) {
            ++points;
            if (std::abs(q.r_at_k) < 1e-6) continue;  // Γ(±iν) sits at its pole
            const double nu = q.nu, r2 = std::norm(q.r_at_k);
            prod_err = std::max(prod_err, std::abs(q.beta12 * q.beta21 + nu));
            mod_err = std::max(mod_err, std::abs(std::norm(q.beta12) + nu / (1.0 + r2)));
            rs_err = std::max(rs_err, std::abs(std::abs(q.r_scaled) - std::abs(q.r_at_k)));
            rs_err = std::max(rs_err, std::abs(std::abs(q.r_scaled_derived) - std::abs(q.r_at_k)));
            // arg β12 = ±π/4 - arg r_ξ - arg Γ(±iν), compared modulo 2π in the region's branch window.
            const double s = q.parity_a ? 1.0 : -1.0;
            const double want = s * kPi / 4.0 - branch_arg(q.r_scaled, xi) - std::arg(complex_gamma(cplx(0.0, s * nu)));
            arg_err = std::max(arg_err, std::abs(wrap(branch_arg(q.beta12, xi) - want)));
            der_mod = std::max(der_mod, std::abs(std::norm(q.beta12_derived) + nu));
            der_prod = std::max(der_prod, std::abs(q.beta12_derived * q.beta21_derived - nu));
            Mat2 H2 = q.H * q.H;
            cplx c = q.beta12 * q.beta21 / (-4.0 * q.eta * q.theta2);
            sq_err = std::max(sq_err, max_abs(H2 - c * Mat2::Identity()));
            CHECK(q.H(0, 0) == cplx(0.0));
            CHECK(q.H(1, 1) == cplx(0.0));
            CHECK(q.eta * q.theta2 < 0.0);
        }
    }
    CHECK(points >= 500);
    CHECK(prod_err <= 1e-10);
    CHECK(mod_err <= 1e-10);
    CHECK(arg_err <= 1e-10);
    CHECK(rs_err <= 1e-12);
    CHECK(der_mod <= 1e-10);
    CHECK(der_prod <= 1e-10);
    CHECK(sq_err <= 1e-10);
}

TEST_CASE("local model special inputs") {
    auto zero = [](double) { return cplx(0.0); };
    auto P = stationary_points(-0.5);
    auto L = local_model_data(zero, factor_for(zero, -0.5), P, 50.0);
    REQUIRE(L.points.size() == 4);
    for (const auto& q : L.points) {
        CHECK(q.nu == 0.0);
        CHECK(q.beta12 == cplx(0.0));
        CHECK(q.beta21 == cplx(0.0));
        CHECK(max_abs(q.H) == 0.0);
        CHECK(max_abs(q.H_derived) == 0.0);
    }

    // |r| = 1: ν = -log 2/(2π) and |β12| = √(-ν/2).
    auto unit = [](double) { return std::polar(1.0, 0.7); };
    auto Q = stationary_points(0.05);
    auto M = local_model_data(unit, factor_for(unit, 0.05), Q, 30.0);
    const double nu = -std::log(2.0) / (2.0 * kPi);
    for (const auto& q : M.points) {
        CHECK(std::abs(q.nu - nu) <= 1e-15);
        CHECK(std::abs(std::abs(q.beta12) - std::sqrt(-nu / 2.0)) <= 1e-12);
    }

    // Parity lists: θ″ < 0 exactly on the first list in both regions.
    for (double xi : {-0.5, 0.05})
        for (const auto& q : local_model_data(unit, factor_for(unit, xi), stationary_points(xi), 30.0).points)
            CHECK(q.parity_a == (q.theta2 < 0.0));
}

TEST_CASE("parabolic-cylinder model") {
    std::vector<double> rhos;
    for (int k = 0; k < 20; ++k) rhos.push_back(-4.5 + 9.0 * k / 19.0 + 0.0137);
    for (cplx r : {cplx(0.3, 0.4), cplx(-1.2, 0.5), cplx(0.05, -0.02)}) {
        auto c = check_psi_jump(r, rhos);
        CHECK(c.derived_plus <= 1e-12);
        CHECK(c.derived_minus <= 1e-12);
        // The published displays solve a different jump.
        CHECK(c.literal_positive > 1e-3);
        CHECK(c.literal_negative > 1e-3);

        // ζ⁻¹ coefficient from the large-ζ behaviour in the upper half plane.
        const double nu = -std::log1p(std::norm(r)) / (2.0 * kPi);
        for (int sg : {1, -1}) {
            const cplx b = derived_b(r, sg);
            const cplx z = std::polar(40.0, 1.1);
            const cplx p1 = sg > 0 ? std::exp(-kI * nu * std::log(-z) + kI * z * z / 4.0)
                                   : std::exp(kI * nu * std::log(z) - kI * z * z / 4.0);
            Mat2 Mz = psi_derived(z, nu, b, sg, true) * mat2(1.0 / p1, 0.0, 0.0, p1);
            Mat2 M1 = double(sg) * mat2(0.0, kI * b, kI * std::conj(b), 0.0);
            CHECK(std::abs(Mz(0, 1) * z - M1(0, 1)) <= 3e-3 * std::max(1.0, std::abs(b)));
            CHECK(std::abs(Mz(1, 0) * z - M1(1, 0)) <= 3e-3 * std::max(1.0, std::abs(b)));
            CHECK(std::abs(Mz(0, 0) - 1.0) <= 1e-3);
        }
    }
}

TEST_CASE("error coefficients: residues against contour quadrature") {
    SolitonData h;
    h.poles = {cplx(1.2, 0.8)};
    h.norming_mod = {cplx(0.3, 0.1)};
    auto d = with_partners(h);
    for (double xi : {-0.5, -0.2, 0.03, 0.1}) {
        auto P = stationary_points(xi);
        auto L = local_model_data(r_sym, factor_for(r_sym, xi), P, 40.0);
        auto st = solve_soliton_system(d, xi * 40.0, 40.0);
        std::vector<Mat2> Mk;
        for (double p : P.points) Mk.push_back(eval_M(st, p));
        for (auto conv : {Convention::Literal, Convention::Derived}) {
            auto E = error_coefficients(L, Mk, conv);
            auto Q = error_coefficients_quadrature(L, [&](cplx s) { return eval_M(st, s); }, 0.1, 256, conv);
            CHECK(max_abs(E.E0 - Q.E0) <= 1e-8);
            CHECK(max_abs(E.E1 - Q.E1) <= 1e-8);
        }
        // M = I: E0 = Σ H/(ξ_k - i).
        std::vector<Mat2> Id(P.points.size(), Mat2::Identity());
        auto E = error_coefficients(L, Id);
        Mat2 want = Mat2::Zero();
        for (const auto& q : L.points) want += q.H / (q.xi_k - kI);
        CHECK(max_abs(E.E0 - want) <= 1e-14);
    }

    auto zero = [](double) { return cplx(0.0); };
    auto P = stationary_points(-0.5);
    auto L = local_model_data(zero, factor_for(zero, -0.5), P, 40.0);
    auto E = error_coefficients(L, std::vector<Mat2>(4, Mat2::Identity()));
    CHECK(max_abs(E.E0) == 0.0);
    CHECK(max_abs(E.E1) == 0.0);
    CHECK_THROWS_AS(error_coefficients(L, std::vector<Mat2>(4, Mat2::Zero())), NumericError);
    CHECK_THROWS_AS(error_coefficients(L, std::vector<Mat2>(3, Mat2::Identity())), ConfigError);
}

TEST_CASE("k coefficients") {
    std::mt19937_64 g(5);
    ErrorCoefficients zero;
    auto k0 = k_coefficients(zero, 0.0, Mat2::Identity(), Mat2::Zero());
    CHECK(k0.k11 == cplx(0.0));
    CHECK(k0.k12 == cplx(0.0));

    // M = I, Σ0 = 0: k11 = -E1_12 - conj(E1_21).
    ErrorCoefficients E{random_mat(g), random_mat(g)};
    auto k = k_coefficients(E, 0.0, Mat2::Identity(), Mat2::Zero());
    CHECK(std::abs(k.k11 + E.E1(0, 1) + std::conj(E.E1(1, 0))) <= 1e-14);
    CHECK(std::abs(k.k12 - (E.E0(1, 1) - std::conj(E.E0(0, 0)))) <= 1e-14);

    // The display against the linearised reconstruction, for general complex inputs.
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Mat2 M = Mat2::Identity() + random_mat(g, 0.3);
        M /= std::sqrt(M.determinant());
        ErrorCoefficients F{random_mat(g), random_mat(g)};
        Mat2 M1 = random_mat(g);
        cplx S = random_mat(g)(0, 0);
        worst = std::max(worst, std::abs(k_coefficients(F, S, M, M1).k11 - linearized_k11(F, S, M, M1)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("u_leading: trivial and soliton-only inputs") {
    AsymptoticInputs none;
    none.r = [](double) { return cplx(0.0); };
    for (double xi : {-2.0, -0.5, 0.05, 0.5}) {
        auto L = u_leading(xi * 20.0, 20.0, none);
        CHECK(L.u == cplx(0.0));
        CHECK(std::abs(L.x - xi * 20.0) <= 1e-14);
        CHECK(L.order == (xi > -1.0 && xi < 0.125 ? -0.75 : -0.5));
    }
    CHECK_THROWS_AS(u_leading(-20.0, 20.0, none), NumericError);

    // One soliton kept in Λ: the leading term is exactly the soliton module's value.
    SolitonData h;
    h.poles = {cplx(1.2, 0.8)};
    h.norming_mod = {cplx(0.3, 0.1)};
    auto d = with_partners(h);
    AsymptoticInputs in = none;
    in.spectrum.poles = d.poles;
    in.spectrum.norming = d.norming_mod;
    in.delta0 = std::numeric_limits<double>::infinity();
    in.g = cplx(0.0, 0.37);
    for (double y : {-3.0, 0.4, 2.5}) {
        const double t = 2.0;
        auto st = solve_soliton_system(d, y, t);
        auto R = reconstruct(st);
        auto L = u_leading(y, t, in);
        CHECK(std::abs(L.x - R.x) <= 1e-12);
        CHECK(std::abs(L.u - R.u_times_phase * std::exp(2.0 * in.g)) <= 1e-12);
        auto Lit = u_leading(y, t, in, Convention::Literal);
        auto R1 = reconstruct(st, +1);
        CHECK(std::abs(Lit.x - R1.x) <= 1e-12);
        CHECK(std::abs(Lit.u - R1.u_times_phase * std::exp(-2.0 * in.g)) <= 1e-12);
        CHECK(std::abs(std::abs(L.term.T_at_i / std::conj(L.term.T_at_i)) - 1.0) <= 1e-10);
    }
}

TEST_CASE("u_leading: radiation term decays like t^{-1/2}") {
    AsymptoticInputs in;
    in.r = r_sym;
    in.nu = NuProfile::from_table(table_from_function(r_sym, 512, 40.0));
    std::vector<double> ts{50.0, 100.0, 200.0, 400.0}, amp;
    for (double t : ts) {
        auto L = u_leading(-0.5 * t, t, in);
        CHECK(std::abs(std::abs(L.term.T_at_i / std::conj(L.term.T_at_i)) - 1.0) <= 1e-10);
        CHECK(std::abs(L.term.Sigma0) <= 1e-6);
        // |H_k| does not depend on t; the amplitude of the t^{-1/2} term is Σ|H_k|/|ξ_k - i|² / √t.
        double a = 0.0;
        for (const auto& q : L.term.local.points) a += max_abs(q.H_derived) / std::norm(q.xi_k - kI);
        amp.push_back(a / std::sqrt(t));
    }
    double slope = std::log(amp.back() / amp.front()) / std::log(ts.back() / ts.front());
    CHECK(std::abs(slope + 0.5) <= 0.05);
}

TEST_CASE("x-map in the left region matches the total stretch") {
    auto u0 = sech_profile(30.0, 1024, 0.2, 0.5);
    auto G = precompute_geometry(u0, 30.0, 1024);
    auto tab = scattering_coeffs(G, 512, 4);
    AsymptoticInputs in;
    ReflectionInterpolant r(tab);
    in.r = [&](double s) { return r(s); };
    in.nu = NuProfile::from_table(tab);
    in.g = G.g;
    auto L = u_leading(-60.0, 30.0, in);
    // No stationary points and no solitons: x = y - 2 ln|T(i)| = y + ∫(d - 1), the x -> -∞ limit of
    // x = y + k₊, and T(i) = a(i) = e^{-K/2 - g}.
    CHECK(L.u == cplx(0.0));
    CHECK(std::abs(L.x - (-60.0 + G.K)) <= 1e-6);
    CHECK(std::abs(L.term.T_at_i - std::exp(-0.5 * G.K - G.g)) <= 1e-6);
}
