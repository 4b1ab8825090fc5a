#include "ccch/acceptance.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "ccch/asymptotics.hpp"
#include "ccch/fft.hpp"
#include "ccch/pde_sim.hpp"
#include "ccch/special.hpp"

namespace ccch {
namespace {

struct Drift {
    std::string label;
    double per10 = 0.0;  // max_k |g_k - g_0| / max(1, t_k/10)
};

struct Context {
    AcceptanceOptions opt;
    std::vector<Drift> drifts;
};

void record_drift(Context& ctx, const std::string& label, const Trajectory& tr) {
    double d = 0.0;
    const double t0 = tr.snapshots.front().t;
    for (std::size_t k = 1; k < tr.g.size(); ++k)
        d = std::max(d, std::abs(tr.g[k] - tr.g[0]) / std::max(1.0, (tr.snapshots[k].t - t0) / 10.0));
    ctx.drifts.push_back({label, d});
}

std::string sci(double v) { return fmt::format("{:.3e}", v); }

double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        num += std::norm(a[j] - b[j]);
        den += std::norm(b[j]);
    }
    return std::sqrt(num / den);
}

double slope_fit(const std::vector<double>& t, const std::vector<double>& e) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = double(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        double lx = std::log(t[k]), ly = std::log(e[k]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SolitonData validation_soliton() {
    SolitonData h;
    h.poles = {cplx(1.2, 0.8)};
    h.norming_mod = {cplx(0.3, 0.1)};
    return with_partners(h);
}

SolitonData two_soliton() {
    SolitonData h;
    h.poles = {cplx(0.6, 0.5), cplx(-0.4, 1.4)};
    h.norming_mod = {cplx(0.3, 0.1), cplx(-0.2, 0.5)};
    return with_partners(h);
}

// Trigonometric interpolant of periodic samples on [-L, L).
struct SpectralInterp {
    std::vector<cplx> c;
    std::vector<double> k;
    SpectralInterp(const std::vector<cplx>& u, double L) {
        const int n = int(u.size());
        Fft f(n);
        f.forward(u, c);
        k = wavenumbers(n, 2.0 * L);
        for (int j = 0; j < n; ++j) c[std::size_t(j)] *= std::exp(kI * k[std::size_t(j)] * L) / double(n);
    }
    cplx operator()(double x) const {
        cplx s = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * std::exp(kI * k[j] * x);
        return s;
    }
};

CriterionResult c1_stationary(Context& ctx) {
    CriterionResult R{1, "stationary-point structure", false, "", "counts {0,4,8,0}; chains <= 1e-10; <= 5 s", 0, {}};
    std::mt19937_64 g(ctx.opt.seed + 1);
    struct Band {
        double lo, hi;
    };
    const Band bands[] = {{-6.0, -1.0}, {-1.0, 0.0}, {0.0, 0.125}, {0.125, 6.0}};
    const std::size_t want[] = {0, 4, 8, 0};
    bool counts = true;
    double chain = 0.0;
    for (int b = 0; b < 4; ++b) {
        std::uniform_real_distribution<double> U(bands[b].lo, bands[b].hi);
        for (int k = 0; k < 50; ++k) {
            double xi = U(g);
            if (std::min({std::abs(xi + 1.0), std::abs(xi), std::abs(xi - 0.125)}) < 1e-3) xi = 0.5 * (bands[b].lo + bands[b].hi);
            auto P = stationary_points(xi);
            counts = counts && P.points.size() == want[b];
            for (double p : P.points) {
                double dn = std::numeric_limits<double>::infinity(), dr = dn;
                for (double q : P.points) {
                    dn = std::min(dn, std::abs(q + p));
                    dr = std::min(dr, std::abs(q - 1.0 / p));
                }
                chain = std::max({chain, dn, dr});
            }
        }
    }
    R.values = {{"chain_error", chain}, {"counts_ok", counts ? 1.0 : 0.0}};
    R.measured = fmt::format("counts {}; chain error {}", counts ? "ok" : "WRONG", sci(chain));
    R.pass = counts && chain <= 1e-10;
    return R;
}

CriterionResult c2_scattering(Context& ctx) {
    CriterionResult R{2, "scattering identities", false, "",
                      "unitarity <= 1e-6; r(z)+r(-1/z) <= 1e-6; a(i) rel <= 1e-6; <= 120 s", 0, {}};
    const double L = 30.0;
    const int N = 2048, nz = 256;
    const double data[3][2] = {{0.3, 0.5}, {0.5, -0.7}, {0.6, 0.8}};
    double unit = 0.0, sym = 0.0, ai_lit = 0.0, ai_phase = 0.0;
    for (const auto& d : data) {
        auto G = precompute_geometry(sech_profile(L, N, d[0], d[1]), L, N);
        auto T = scattering_coeffs(G, nz, ctx.opt.threads);
        const std::size_t n = T.z.size();
        for (std::size_t j = 0; j < n; ++j) {
            unit = std::max(unit, std::abs(std::norm(T.a[j]) + std::norm(T.b[j]) - 1.0));
            sym = std::max(sym, std::abs(T.r[j] + T.r[(j + n / 2) % n]));
        }
        const cplx ai = scatter_at(G, kI).a;
        const double ref = std::exp(-0.5 * G.K);
        ai_lit = std::max(ai_lit, std::abs(ai - ref) / ref);
        ai_phase = std::max(ai_phase, std::abs(ai * std::exp(G.g) - ref) / ref);
    }
    R.values = {{"unitarity", unit}, {"reflection_symmetry", sym}, {"a_i_literal", ai_lit}, {"a_i_phase_corrected", ai_phase}};
    R.measured = fmt::format("unitarity {}; symmetry {}; a(i) literal {} (times e^g: {})", sci(unit), sci(sym),
                             sci(ai_lit), sci(ai_phase));
    R.pass = unit <= 1e-6 && sym <= 1e-6 && ai_lit <= 1e-6;
    return R;
}

CriterionResult c3_tfunction(Context& ctx) {
    CriterionResult R{3, "T-function suite", false, "",
                      "normalisation, symmetries, boundary ratio <= 1e-6; exponent at i >= 1.9; <= 60 s", 0, {}};
    const double L = 30.0;
    const int N = 1024;
    auto G = precompute_geometry(sech_profile(L, N, 0.6, 0.8), L, N);
    auto tab = scattering_coeffs(G, 1024, ctx.opt.threads);
    auto nu = NuProfile::from_table(tab);
    auto r = [&](double s) {
        auto p = scatter_at(G, s);
        return p.b / p.a;
    };
    auto spec = validation_soliton();
    DiscreteSpectrum S{spec.poles, spec.norming_mod};

    double norm_err = 0.0, sym_err = 0.0, conj_err = 0.0, ratio_err = 0.0, exponent = 1e9;
    int probes = 0;
    std::mt19937_64 g(ctx.opt.seed + 3);
    for (double xi : {-2.0, -0.5, 0.05}) {
        auto P = stationary_points(xi);
        auto F = build_scalar_factor(nu, S, partition_spectrum(S, xi, 0.05), P);
        norm_err = std::max({norm_err, std::abs(F.T(0.0) - 1.0), std::abs(F.T(1e13) - 1.0)});
        std::uniform_real_distribution<double> U(-3.0, 3.0);
        int n = 0;
        while (n < 100) {
            cplx z(U(g), U(g));
            if (std::abs(z.imag()) < 0.05 || std::abs(z) < 0.05) continue;
            bool near = false;
            for (cplx p : S.poles)
                near = near || std::abs(z - p) < 0.05 || std::abs(z - std::conj(p)) < 0.05 ||
                       std::abs(-1.0 / z - p) < 0.05 || std::abs(-1.0 / z - std::conj(p)) < 0.05;
            if (near) continue;
            ++n;
            const cplx t = F.T(z);
            const double s = std::max(1.0, std::abs(t));
            sym_err = std::max(sym_err, std::abs(t - F.T(-1.0 / z)) / s);
            conj_err = std::max(conj_err, std::abs(t - 1.0 / std::conj(F.T(std::conj(z)))) / s);
        }
        if (xi == -0.5) {
            for (double s = -6.0; s < 6.0 && probes < 20; s += 0.29) {
                bool inside = false;
                for (auto [a, b] : F.sigma_xi) inside = inside || (s > a + 0.05 && s < b - 0.05);
                if (!inside || std::abs(s) < 0.2) continue;
                ++probes;
                cplx ratio = F.T(s, -1) / F.T(s, +1);
                ratio_err = std::max(ratio_err, std::abs(ratio - (1.0 + std::norm(r(s)))));
            }
            for (double ang : {0.3, 1.9, -2.5}) {
                const cplx e = std::polar(1.0, ang);
                auto err = [&](double eps) { return std::abs(F.T(kI + eps * e) - F.T_at_i * (1.0 - F.Sigma0 * eps * e)); };
                exponent = std::min(exponent, std::log(err(0.1) / err(0.01)) / std::log(10.0));
            }
        }
    }
    R.values = {{"normalisation", norm_err}, {"reciprocal_symmetry", sym_err}, {"conjugate_symmetry", conj_err},
                {"boundary_ratio", ratio_err}, {"probes", double(probes)}, {"exponent_at_i", exponent}};
    R.measured = fmt::format("T(0),T(inf) {}; T(-1/z) {}; conj {}; ratio {} at {} probes; exponent {:.3f}",
                             sci(norm_err), sci(sym_err), sci(conj_err), sci(ratio_err), probes, exponent);
    R.pass = norm_err <= 1e-6 && sym_err <= 1e-6 && conj_err <= 1e-6 && ratio_err <= 1e-6 && probes >= 20 &&
             exponent >= 1.9;
    return R;
}

CriterionResult c4_soliton(Context& ctx) {
    CriterionResult R{4, "soliton oracle", false, "", "system residual <= 1e-10; PDE rel L2 <= 1e-3 over 5 units; <= 300 s",
                      0, {}};
    double res = 0.0;
    for (const auto& d : {validation_soliton(), two_soliton()})
        for (double t : {0.0, 1.0, 5.0})
            for (int k = 0; k <= 40; ++k) res = std::max(res, solve_soliton_system(d, -10.0 + 0.5 * k, t).residual);

    const double L = 40.0;
    const int N = 1024;
    auto d = validation_soliton();
    Simulator S(L, N);
    std::vector<double> ts{1.0, 2.0, 3.0, 4.0, 5.0};
    auto tr = S.evolve(S.snapshot_from_u(soliton_on_grid(d, 0.0, L, N).u), 0.25 * S.dx(), ts);
    record_drift(ctx, "one-soliton N=1024", tr);
    double pde = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k)
        pde = std::max(pde, rel_l2(tr.snapshots[k + 1].u, soliton_on_grid(d, ts[k], L, N).u));
    R.values = {{"system_residual", res}, {"pde_rel_l2", pde}};
    R.measured = fmt::format("system residual {}; PDE rel L2 {}", sci(res), sci(pde));
    R.pass = res <= 1e-10 && pde <= 1e-3;
    return R;
}

ScalarFactor factor_for(const std::function<cplx(double)>& r, double xi) {
    auto nu = NuProfile::from_table(table_from_function(r, 256, 40.0));
    return build_scalar_factor(nu, {}, partition_spectrum({}, xi, 0.1), stationary_points(xi));
}

CriterionResult c5_local(Context& ctx) {
    CriterionResult R{5, "local-model identities", false, "",
                      "beta identities <= 1e-10; residue vs quadrature <= 1e-8; Psi jump <= 1e-6; <= 120 s", 0, {}};
    std::mt19937_64 g(ctx.opt.seed + 5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double prod = 0.0, mod = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const cplx amp = std::polar(0.05 + 1.5 * U(g), 2.0 * kPi * U(g));
        const double c = -3.0 + 6.0 * U(g), w = 0.3 + 2.0 * U(g);
        auto r = [=](double s) { return amp * std::exp(-(s - c) * (s - c) / (w * w)); };
        const double xi = trial % 2 ? -0.95 + 0.9 * U(g) : 0.01 + 0.11 * U(g);
        auto P = stationary_points(xi);
        auto Lm = local_model_data(r, factor_for(r, xi), P, 10.0 + 200.0 * U(g));
        for (const auto& q : Lm.points) {
            if (std::abs(q.r_at_k) < 1e-6) continue;
            prod = std::max(prod, std::abs(q.beta12 * q.beta21 + q.nu));
            mod = std::max(mod, std::abs(std::norm(q.beta12) + q.nu / (1.0 + std::norm(q.r_at_k))));
        }
    }

    auto rsym = [](double z) {
        double w = z - 1.0 / z, lam = 0.5 * (z + 1.0 / z);
        return cplx(0.5, 0.4) * std::exp(-0.25 * w * w) / lam;
    };
    auto d = validation_soliton();
    double quad = 0.0;
    for (double xi : {-0.5, -0.2, 0.03, 0.1}) {
        auto P = stationary_points(xi);
        auto Lm = local_model_data(rsym, factor_for(rsym, xi), P, 40.0);
        auto st = solve_soliton_system(d, xi * 40.0, 40.0);
        std::vector<Mat2> Mk;
        for (double p : P.points) Mk.push_back(eval_M(st, p));
        for (auto conv : {Convention::Literal, Convention::Derived}) {
            auto E = error_coefficients(Lm, Mk, conv);
            auto Q = error_coefficients_quadrature(Lm, [&](cplx s) { return eval_M(st, s); }, 0.1, 256, conv);
            quad = std::max({quad, max_abs(E.E0 - Q.E0), max_abs(E.E1 - Q.E1)});
        }
    }

    std::vector<double> rhos;
    for (int k = 0; k < 20; ++k) rhos.push_back(-4.5 + 9.0 * k / 19.0 + 0.0137);
    double lit = 0.0, der = 0.0;
    for (cplx r : {cplx(0.3, 0.4), cplx(-1.2, 0.5), cplx(0.05, -0.02)}) {
        auto c = check_psi_jump(r, rhos);
        lit = std::max({lit, c.literal_positive, c.literal_negative});
        der = std::max({der, c.derived_plus, c.derived_minus});
    }
    R.values = {{"beta_product", prod}, {"beta_modulus", mod}, {"residue_vs_quadrature", quad},
                {"psi_jump_literal", lit}, {"psi_jump_derived", der}};
    R.measured = fmt::format("beta product {}; modulus {}; quadrature {}; Psi jump literal {} (derived model {})",
                             sci(prod), sci(mod), sci(quad), sci(lit), sci(der));
    R.pass = prod <= 1e-10 && mod <= 1e-10 && quad <= 1e-8 && lit <= 1e-6;
    return R;
}

CriterionResult c6_degeneration(Context& ctx) {
    CriterionResult R{6, "k11 degeneration", false, "", "|k11 - f11| <= 1e-10 on real inputs", 0, {}};
    std::mt19937_64 g(ctx.opt.seed + 6);
    std::normal_distribution<double> Nd(0.0, 1.0);
    auto real_mat = [&](double s) { return mat2(s * Nd(g), s * Nd(g), s * Nd(g), s * Nd(g)); };
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        Mat2 M = Mat2::Identity() + real_mat(0.3);
        if (M.determinant().real() <= 0.1) continue;
        M /= std::sqrt(M.determinant().real());
        ErrorCoefficients E{real_mat(1.0), real_mat(1.0)};
        Mat2 M1 = real_mat(1.0);
        cplx S = Nd(g);
        worst = std::max(worst, std::abs(k_coefficients(E, S, M, M1).k11 - linearized_k11(E, S, M, M1)));
    }
    R.values = {{"k11_minus_f11", worst}};
    R.measured = fmt::format("max |k11 - f11| {}", sci(worst));
    R.pass = worst <= 1e-10;
    return R;
}

CriterionResult c7_order(Context& ctx) {
    CriterionResult R{7, "asymptotic order", false, "", "slope of sup|u_sim - u_lead| over t in {40,80,160} <= -0.6; <= 1800 s",
                      0, {}};
    const double amp = 0.2, v = 0.5;
    auto f = [&](double x) { return amp / std::cosh(x) * std::exp(kI * v * x); };

    const double Ls = 30.0;
    const int Ns = 2048;
    auto xs = periodic_grid(Ls, Ns);
    std::vector<cplx> u0(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) u0[j] = f(xs[j]);
    auto G = precompute_geometry(u0, Ls, Ns);
    const int winding = winding_number(G, SearchBox{-4.0, 4.0, 0.02, 4.0});
    auto tab = scattering_coeffs(G, 1024, ctx.opt.threads);
    AsymptoticInputs in;
    in.nu = NuProfile::from_table(tab);
    in.g = G.g;
    const double cap = tab.alpha_cap;
    in.r = [&](double s) {
        if (std::abs(alpha_of(s)) > cap) return cplx(0.0);
        auto p = scatter_at(G, s);
        return p.b / p.a;
    };

    const double L = 256.0;
    const int N = 8192;
    Simulator S(L, N);
    auto x = periodic_grid(L, N);
    std::vector<cplx> w(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) w[j] = f(x[j]);
    std::vector<double> ts{40.0, 80.0, 160.0}, err, lit;
    auto tr = S.evolve(S.snapshot_from_u(w), 0.25 * S.dx(), ts);
    record_drift(ctx, "radiation datum N=8192", tr);
    for (std::size_t q = 0; q < ts.size(); ++q) {
        const double t = ts[q];
        SpectralInterp I(tr.snapshots[q + 1].u, L);
        double sd = 0.0, sl = 0.0;
        for (int k = 0; k <= 20; ++k) {
            const double xi = -0.55 + 0.1 * k / 20.0;
            auto D = u_leading(xi * t, t, in, Convention::Derived);
            sd = std::max(sd, std::abs(I(D.x) - D.u));
            auto Lt = u_leading(xi * t, t, in, Convention::Literal);
            sl = std::max(sl, std::abs(I(Lt.x) - Lt.u));
        }
        err.push_back(sd);
        lit.push_back(sl);
    }
    const double s = slope_fit(ts, err), sl = slope_fit(ts, lit);
    R.values = {{"winding_number", double(winding)}, {"slope", s}, {"slope_literal", sl},
                {"err_t40", err[0]},  {"err_t80", err[1]},  {"err_t160", err[2]}};
    R.measured = fmt::format("slope {:.3f} (errors {}, {}, {}); literal-convention slope {:.3f}; winding {}", s,
                             sci(err[0]), sci(err[1]), sci(err[2]), sl, winding);
    R.pass = winding == 0 && s <= -0.6;
    return R;
}

CriterionResult c8_conservation(Context& ctx) {
    CriterionResult R{8, "conservation of g", false, "", "drift <= 1e-6 per 10 time units on every run", 0, {}};
    double worst = 0.0;
    std::string parts;
    for (const auto& d : ctx.drifts) {
        worst = std::max(worst, d.per10);
        parts += fmt::format("{}{}: {}", parts.empty() ? "" : "; ", d.label, sci(d.per10));
        R.values.push_back({d.label, d.per10});
    }
    if (ctx.drifts.empty()) {
        R.measured = "no simulator runs selected";
        return R;
    }
    R.measured = parts;
    R.pass = worst <= 1e-6;
    return R;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    Context ctx{opt, {}};
    using Fn = CriterionResult (*)(Context&);
    const Fn all[] = {c1_stationary, c2_scattering, c3_tfunction, c4_soliton, c5_local, c6_degeneration, c7_order,
                      c8_conservation};
    const double inf = std::numeric_limits<double>::infinity();
    const double budget[] = {5.0, 120.0, 60.0, 300.0, 120.0, inf, 1800.0, inf};
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 8; ++id) {
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = all[id - 1](ctx);
        } catch (const std::exception& e) {
            r.id = id;
            r.name = "criterion " + std::to_string(id);
            r.measured = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (r.seconds > budget[id - 1]) {
            r.pass = false;
            r.measured += fmt::format("; over the {:.0f} s budget", budget[id - 1]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    return fmt::format("[{}] {} {}: {} | bound: {} ({:.1f} s)", r.pass ? "PASS" : "FAIL", r.id, r.name, r.measured,
                       r.bound, r.seconds);
}

}  // namespace ccch
