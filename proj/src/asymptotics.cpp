#include "ccch/asymptotics.hpp"

#include <gsl/gsl_spline.h>

#include <cmath>

#include "ccch/special.hpp"

namespace ccch {

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * kPi);

double nu_of(cplx r) { return -std::log1p(std::norm(r)) / (2.0 * kPi); }

Mat2 offdiag(cplx a12, cplx a21) { return mat2(0.0, a12, a21, 0.0); }

}  // namespace

struct ReflectionInterpolant::Splines {
    gsl_spline *re = nullptr, *im = nullptr;
    double phi0 = 0.0;
    ~Splines() {
        if (re) gsl_spline_free(re);
        if (im) gsl_spline_free(im);
    }
};

ReflectionInterpolant::ReflectionInterpolant(const SpectralTable& T) {
    const std::size_t n = T.phi.size();
    if (n < 4 || T.r.size() != n) throw ConfigError("reflection table needs at least 4 samples");
    std::vector<double> x(n + 1), a(n + 1), b(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = T.phi[k];
        a[k] = T.r[k].real();
        b[k] = T.r[k].imag();
    }
    x[n] = T.phi[0] + 2.0 * kPi;
    a[n] = a[0];
    b[n] = b[0];
    auto S = std::make_shared<Splines>();
    S->phi0 = x[0];
    S->re = gsl_spline_alloc(gsl_interp_cspline_periodic, n + 1);
    S->im = gsl_spline_alloc(gsl_interp_cspline_periodic, n + 1);
    gsl_spline_init(S->re, x.data(), a.data(), n + 1);
    gsl_spline_init(S->im, x.data(), b.data(), n + 1);
    sp_ = S;
}

cplx ReflectionInterpolant::operator()(double s) const {
    double phi = 2.0 * std::atan(s);
    if (phi < sp_->phi0) phi += 2.0 * kPi;
    return {gsl_spline_eval(sp_->re, phi, nullptr), gsl_spline_eval(sp_->im, phi, nullptr)};
}

double branch_arg(cplx z, double xi) {
    double a = std::arg(z);
    if (xi < 0.0 && a < 0.0) a += 2.0 * kPi;
    return a;
}

cplx derived_b(cplx r, int theta2_sign) {
    if (r == cplx(0.0)) return 0.0;
    const double nu = nu_of(r);
    // νΓ(∓iν) written as ±iΓ(1∓iν) so that r -> 0 is regular.
    if (theta2_sign > 0)
        return kI * std::conj(r) * complex_gamma(cplx(1.0, -nu)) * std::exp(cplx(0.5 * kPi * nu, -0.25 * kPi)) /
               kSqrt2Pi;
    return kI * std::conj(r) * complex_gamma(cplx(1.0, nu)) * std::exp(cplx(0.5 * kPi * nu, 0.25 * kPi)) / kSqrt2Pi;
}

LocalModelData local_model_data(const std::function<cplx(double)>& r, const ScalarFactor& F,
                                const PhasePortrait& portrait, double t) {
    if (!(t > 0.0)) throw ConfigError("local model needs t > 0");
    if (portrait.points.empty()) throw ConfigError("local model needs stationary points");
    if (F.points.size() != portrait.points.size()) throw ConfigError("scalar factor and portrait disagree");
    LocalModelData L;
    L.xi = portrait.xi;
    L.t = t;
    const double y = portrait.xi * t;
    for (std::size_t k = 0; k < portrait.points.size(); ++k) {
        LocalPoint p;
        p.xi_k = portrait.points[k];
        p.theta2 = portrait.theta_second[k];
        p.eta = portrait.eta_signs[k];
        const bool odd = (k % 2) == 0;  // k is 0-based
        p.parity_a = (portrait.xi > 0.0 && odd) || (portrait.xi < 0.0 && !odd);
        p.r_at_k = r(p.xi_k);
        p.nu = nu_of(p.r_at_k);
        p.T_k = F.T_j[k];
        const double nu = p.nu;
        const cplx base = p.r_at_k * p.T_k * p.T_k * std::exp(-two_i_t_theta(p.xi_k, y, t));

        // Published closed forms; Γ(±iν) is rewritten through Γ(1±iν) so that r = 0 gives 0.
        if (p.parity_a) {
            p.r_scaled = base * std::exp(-kI * nu * std::log(cplx(-4.0 * t * p.theta2)));
            if (p.r_at_k != cplx(0.0)) {
                p.beta12 = kSqrt2Pi * std::exp(cplx(0.5 * kPi * nu, 0.25 * kPi)) * kI * nu /
                           (p.r_scaled * complex_gamma(cplx(1.0, nu)));
                p.beta21 = kI * p.r_scaled * complex_gamma(cplx(1.0, nu)) *
                           std::exp(cplx(-0.5 * kPi * nu, -0.25 * kPi)) / kSqrt2Pi;
            }
        } else {
            p.r_scaled = base * std::exp(kI * nu * std::log(cplx(4.0 * t * p.theta2)));
            if (p.r_at_k != cplx(0.0)) {
                p.beta12 = kSqrt2Pi * std::exp(cplx(0.5 * kPi * nu, -0.25 * kPi)) * (-kI * nu) /
                           (p.r_scaled * complex_gamma(cplx(1.0, -nu)));
                p.beta21 = -kI * p.r_scaled * complex_gamma(cplx(1.0, -nu)) *
                           std::exp(cplx(-0.5 * kPi * nu, 0.25 * kPi)) / kSqrt2Pi;
            }
        }
        const cplx pre = 1.0 / (2.0 * kI * std::sqrt(cplx(p.eta * p.theta2)));
        p.H = pre * offdiag(-kI * p.beta12, kI * p.beta21);

        const int sg = p.theta2 > 0.0 ? 1 : -1;
        const double scale2 = 2.0 * std::abs(p.theta2) * t;
        p.r_scaled_derived = base * std::exp(kI * double(-sg) * nu * std::log(scale2));
        const cplx b = derived_b(p.r_scaled_derived, sg);
        p.M1_derived = double(sg) * offdiag(kI * b, kI * std::conj(b));
        p.beta12_derived = kI * p.M1_derived(0, 1);
        p.beta21_derived = -kI * p.M1_derived(1, 0);
        p.H_derived = p.M1_derived / std::sqrt(2.0 * std::abs(p.theta2));
        L.points.push_back(p);
    }
    return L;
}

LocalModelData local_model_data(const SpectralTable& table, const ScalarFactor& F, const PhasePortrait& portrait,
                                double t) {
    ReflectionInterpolant r(table);
    return local_model_data([&](double s) { return r(s); }, F, portrait, t);
}

Mat2 psi_literal(cplx rho, double nu, cplx b12, cplx b21, bool xi_positive, bool upper) {
    auto D = parabolic_cylinder_D;
    const cplx in = kI * nu;
    auto e = [](double re, double im) { return std::exp(cplx(re, im)); };
    const double q = kPi / 4.0;
    if (xi_positive) {
        if (upper)
            return mat2(e(3 * q * nu, 0) * D(-in, e(0, -3 * q) * rho),
                        in / b21 * e(-q * nu, -q) * D(in - 1.0, e(0, -q) * rho),
                        -in / b12 * e(3 * q * nu, -3 * q) * D(-in - 1.0, e(0, -3 * q) * rho),
                        e(-q * nu, 0) * D(in, e(0, -q) * rho));
        return mat2(e(-q * nu, 0) * D(-in, e(0, q) * rho), in / b21 * e(3 * q * nu, 3 * q) * D(in - 1.0, e(0, 3 * q) * rho),
                    -in / b12 * e(-q * nu, q) * D(-in - 1.0, e(0, -q) * rho), e(3 * q * nu, 0) * D(in, e(0, 3 * q) * rho));
    }
    if (upper)
        return mat2(e(-q * nu, 0) * D(in, e(0, -q) * rho),
                    in / b21 * e(3 * q * nu, -3 * q) * D(-in - 1.0, e(0, -3 * q) * rho),
                    -in / b12 * e(-q * nu, -q) * D(in - 1.0, e(0, -q) * rho), e(3 * q * nu, 0) * D(-in, e(0, -3 * q) * rho));
    return mat2(e(3 * q * nu, 0) * D(in, e(0, 3 * q) * rho), in / b21 * e(-q * nu, q) * D(-in - 1.0, e(0, q) * rho),
                -in / b12 * e(3 * q * nu, 3 * q) * D(in - 1.0, e(0, 3 * q) * rho), e(-q * nu, 0) * D(-in, e(0, q) * rho));
}

Mat2 psi_derived(cplx z, double nu, cplx b, int theta2_sign, bool upper) {
    auto D = parabolic_cylinder_D;
    const double q = kPi / 4.0;
    auto e = [](double re, double im) { return std::exp(cplx(re, im)); };
    cplx c1, c2;
    double k1, k2;
    cplx a1, a2;
    if (theta2_sign > 0) {
        a1 = -kI * nu;
        a2 = kI * nu;
        c1 = upper ? e(0, -q) : e(0, 3 * q);
        c2 = upper ? e(0, -3 * q) : e(0, q);
    } else {
        a1 = kI * nu;
        a2 = -kI * nu;
        c1 = upper ? e(0, -3 * q) : e(0, q);
        c2 = upper ? e(0, -q) : e(0, 3 * q);
    }
    k1 = upper ? std::exp(-3 * q * nu) : std::exp(q * nu);
    k2 = upper ? std::exp(q * nu) : std::exp(-3 * q * nu);
    // a2/b21 = a2 b/ν
    const cplx P11 = k1 * D(a1, c1 * z), P22 = k2 * D(a2, c2 * z);
    const cplx P21 = k1 * a1 * c1 * D(a1 - 1.0, c1 * z) / b;
    const cplx P12 = k2 * a2 * c2 * D(a2 - 1.0, c2 * z) * b / nu;
    return mat2(P11, P12, P21, P22);
}

PsiJumpCheck check_psi_jump(cplx r, const std::vector<double>& rhos) {
    if (r == cplx(0.0)) throw ConfigError("the jump check needs r != 0");
    const double nu = nu_of(r);
    const Mat2 V = mat2(1.0 + std::norm(r), std::conj(r), r, 1.0);
    PsiJumpCheck out;
    // Literal β for ξ > 0 (k = 1, first parity list) and ξ < 0 (k = 1, second list), r_ξ = r.
    const cplx bp = kSqrt2Pi * std::exp(cplx(0.5 * kPi * nu, 0.25 * kPi)) / (r * complex_gamma(cplx(0.0, nu)));
    const cplx bn = kSqrt2Pi * std::exp(cplx(0.5 * kPi * nu, -0.25 * kPi)) / (r * complex_gamma(cplx(0.0, -nu)));
    const cplx dp = derived_b(r, 1), dm = derived_b(r, -1);
    for (double rho : rhos) {
        auto res = [&](const Mat2& up, const Mat2& lo) { return max_abs(up - lo * V); };
        out.literal_positive = std::max(out.literal_positive, res(psi_literal(rho, nu, bp, -nu / bp, true, true),
                                                                  psi_literal(rho, nu, bp, -nu / bp, true, false)));
        out.literal_negative = std::max(out.literal_negative, res(psi_literal(rho, nu, bn, -nu / bn, false, true),
                                                                  psi_literal(rho, nu, bn, -nu / bn, false, false)));
        out.derived_plus = std::max(out.derived_plus, res(psi_derived(rho, nu, dp, 1, true), psi_derived(rho, nu, dp, 1, false)));
        out.derived_minus =
            std::max(out.derived_minus, res(psi_derived(rho, nu, dm, -1, true), psi_derived(rho, nu, dm, -1, false)));
    }
    return out;
}

ErrorCoefficients error_coefficients(const LocalModelData& local, const std::vector<Mat2>& M, Convention conv) {
    if (M.size() != local.points.size()) throw ConfigError("one M(ξ_k) per stationary point is required");
    ErrorCoefficients E;
    for (std::size_t k = 0; k < M.size(); ++k) {
        if (std::abs(M[k].determinant()) < 1e-12) throw NumericError("SingularM", "M(ξ_k) is numerically singular");
        const LocalPoint& p = local.points[k];
        if (conv == Convention::Literal) {
            const Mat2 C = M[k].inverse() * p.H * M[k];
            const cplx w = 1.0 / (p.xi_k - kI);
            E.E0 += w * C;
            E.E1 -= w * w * C;
        } else {
            const Mat2 C = M[k] * p.H_derived * M[k].inverse();
            const cplx w = 1.0 / (kI - p.xi_k);
            E.E0 += w * C;
            E.E1 -= w * w * C;
        }
    }
    return E;
}

ErrorCoefficients error_coefficients_quadrature(const LocalModelData& local, const std::function<Mat2(cplx)>& M,
                                                double radius, int nodes, Convention conv) {
    ErrorCoefficients E;
    for (const LocalPoint& p : local.points) {
        for (int j = 0; j < nodes; ++j) {
            const cplx e = std::polar(1.0, 2.0 * kPi * j / nodes);
            const cplx s = p.xi_k + radius * e;
            const Mat2 Ms = M(s);
            // (1/2πi)∮ f ds = mean of f(s)(s - ξ_k) over the nodes.
            const cplx wgt = radius * e / double(nodes) / (s - p.xi_k);
            if (conv == Convention::Literal) {
                const Mat2 C = Ms.inverse() * p.H * Ms;
                E.E0 += wgt / (s - kI) * C;
                E.E1 -= wgt / ((s - kI) * (s - kI)) * C;
            } else {
                const Mat2 C = Ms * p.H_derived * Ms.inverse();
                E.E0 += wgt / (kI - s) * C;
                E.E1 -= wgt / ((kI - s) * (kI - s)) * C;
            }
        }
    }
    return E;
}

KCoefficients k_coefficients(const ErrorCoefficients& E, cplx S, const Mat2& M, const Mat2& M1) {
    using std::conj;
    const Mat2 A = E.E0 * M;
    const Mat2 B = -E.E0 * M * S + E.E0 * M1 + E.E1 * M;
    const Mat2 C = E.E0 * M * S + E.E0 * M1 + E.E1 * M;
    const cplx m11 = M(0, 0), m12 = M(0, 1), m21 = M(1, 0), m22 = M(1, 1);
    KCoefficients k;
    k.k11 = -(M1(0, 1) - S * m12) * (m11 * conj(A(0, 0)) - conj(m11) * A(0, 0)) / (m22 * m11 * m11) -
            conj(M1(1, 0) + S * m21) * (conj(m22) * A(1, 1) - m22 * conj(A(1, 1))) / conj(m11 * m22 * m22) -
            conj(m11) / m11 * (B(0, 1) / m22) + conj(m11) / m11 * (-m12 * S + M1(0, 1)) * A(1, 1) / (m22 * m22) -
            m22 / conj(m22) * conj(C(1, 0) / m11) + m22 / conj(m22) * conj((m21 * S + M1(1, 0)) * A(0, 0) / (m11 * m11));
    k.k12 = E.E0(1, 1) - conj(E.E0(0, 0)) + E.E0(1, 0) * m12 / m22 - conj(E.E0(0, 1) * m21 / m11);
    return k;
}

cplx linearized_k11(const ErrorCoefficients& E, cplx S, const Mat2& M, const Mat2& M1) {
    using std::conj;
    const Mat2 A = M1 + M * S * sigma3();
    const Mat2 dM = E.E0 * M;
    const Mat2 dA = E.E1 * M + E.E0 * A;
    const cplx c = conj(M(0, 0)) / M(0, 0), p = M(1, 1) / conj(M(1, 1));
    const cplx q12 = A(0, 1) / M(1, 1), q21 = A(1, 0) / M(0, 0);
    const cplx dq12 = dA(0, 1) / M(1, 1) - A(0, 1) * dM(1, 1) / (M(1, 1) * M(1, 1));
    const cplx dc = conj(dM(0, 0)) / M(0, 0) - conj(M(0, 0)) * dM(0, 0) / (M(0, 0) * M(0, 0));
    const cplx dq21 = dA(1, 0) / M(0, 0) - A(1, 0) * dM(0, 0) / (M(0, 0) * M(0, 0));
    const cplx dp = dM(1, 1) / conj(M(1, 1)) - M(1, 1) * conj(dM(1, 1)) / (conj(M(1, 1)) * conj(M(1, 1)));
    return -(dq12 * c + q12 * dc + conj(dq21) * p + conj(q21) * dp);
}

namespace {

cplx residue_functional(const Mat2& M, const Mat2& A) {
    return -(A(0, 1) / M(1, 1) * std::conj(M(0, 0)) / M(0, 0) + std::conj(A(1, 0) / M(0, 0)) * M(1, 1) / std::conj(M(1, 1)));
}

}  // namespace

LeadingTerm u_leading(double y, double t, const AsymptoticInputs& in, Convention conv) {
    if (!(t > 0.0)) throw ConfigError("u_leading needs t > 0");
    const double xi = y / t;
    const PhasePortrait P = stationary_points(xi);
    const Partition part = partition_spectrum(in.spectrum, xi, in.delta0);
    const ScalarFactor F = build_scalar_factor(in.nu, in.spectrum, part, P);

    LeadingTerm L;
    AsymptoticTerm& term = L.term;
    term.xi = xi;
    term.region = P.region;
    term.T_at_i = F.T_at_i;
    term.Sigma0 = F.Sigma0;
    for (int n : part.lambda) {
        const cplx rho = in.spectrum.poles[std::size_t(n)];
        const cplx T = F.T(rho);
        term.solitons.poles.push_back(rho);
        term.solitons.norming_mod.push_back(in.spectrum.norming[std::size_t(n)] * T * T);
    }
    const SolitonState st = solve_soliton_system(term.solitons, y, t);

    const bool radiating = !P.points.empty();
    if (radiating) {
        term.local = local_model_data(in.r, F, P, t);
        std::vector<Mat2> Mk;
        for (double p : P.points) Mk.push_back(eval_M(st, p));
        term.E = error_coefficients(term.local, Mk, conv);
    }
    term.k = k_coefficients(term.E, term.Sigma0, st.M_at_i, st.M1_at_i);
    L.order = radiating ? -0.75 : -0.5;

    const double s = 1.0 / std::sqrt(t);
    const cplx T = F.T_at_i, phase = T / std::conj(T);
    if (conv == Convention::Literal) {
        const Reconstruction R = reconstruct(st, +1);
        const cplx ue2g = R.u_times_phase * phase + (radiating ? term.k.k11 * phase * s : cplx(0.0));
        L.x = y + 2.0 * std::log(std::abs(T)) + R.k_plus.real() + (radiating ? term.k.k12.real() * s : 0.0);
        L.u = std::exp(-2.0 * in.g) * ue2g;
        return L;
    }
    const Mat2 Tm = mat2(1.0 / T, 0.0, 0.0, T);
    const Mat2 I = Mat2::Identity();
    const Mat2 Mi = (I + s * term.E.E0) * st.M_at_i * Tm;
    const Mat2 Ai = (s * term.E.E1 * st.M_at_i + (I + s * term.E.E0) * (st.M1_at_i + st.M_at_i * term.Sigma0 * sigma3())) * Tm;
    L.x = y - std::log(Mi(1, 1) / std::conj(Mi(0, 0))).real();
    L.u = residue_functional(Mi, Ai) * std::exp(2.0 * in.g);
    return L;
}

}  // namespace ccch
