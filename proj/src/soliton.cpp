#include "ccch/soliton.hpp"

#include <gsl/gsl_interp.h>

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "ccch/phase.hpp"
#include "ccch/scattering.hpp"

namespace ccch {

void SolitonData::validate() const {
    if (poles.size() != norming_mod.size()) throw ConfigError("soliton poles and norming constants differ in length");
    for (std::size_t k = 0; k < poles.size(); ++k) {
        if (!(poles[k].imag() > 0.0)) throw ConfigError("soliton poles must lie in the upper half plane");
        if (std::abs(poles[k] - kI) < 0.05) throw NumericError("PoleTooCloseToI", "pole within 0.05 of i");
        if (norming_mod[k] == cplx(0.0)) throw ConfigError("norming constants must be nonzero");
        for (std::size_t h = 0; h < k; ++h)
            if (std::abs(poles[k] - poles[h]) < 1e-8) throw ConfigError("soliton poles must be distinct");
    }
}

SolitonState solve_soliton_system(const SolitonData& data, double y, double t) {
    data.validate();
    SolitonState S;
    S.y = y;
    S.t = t;
    S.poles = data.poles;
    const int n = int(data.poles.size());
    if (n == 0) return S;

    // Unknowns v = (β_1..β_n, τ_1..τ_n); equations A v + B v̄ = c.
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * n, 2 * n), B = A;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * n);
    std::vector<cplx> E(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        cplx rho = data.poles[std::size_t(k)];
        E[std::size_t(k)] = std::exp(two_i_t_theta(rho, y, t)) / data.norming_mod[std::size_t(k)];
        A(k, k) = E[std::size_t(k)];
        A(n + k, n + k) = E[std::size_t(k)];
        for (int h = 0; h < n; ++h) {
            cplx w = 1.0 / (rho - std::conj(data.poles[std::size_t(h)]));
            B(k, n + h) = w;   // + τ̄_h/(ϱ_k - ϱ̄_h)
            B(n + k, h) = -w;  // - β̄_h/(ϱ_k - ϱ̄_h)
        }
        c(n + k) = 1.0;
    }
    const int m = 4 * n;
    Eigen::MatrixXd R(m, m);
    R << A.real() + B.real(), -A.imag() + B.imag(), A.imag() + B.imag(), A.real() - B.real();
    Eigen::VectorXd rhs(m);
    rhs << c.real(), c.imag();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
    if (lu.rcond() < 1e-14) throw NumericError("SingularSystem", "soliton linear system is numerically singular");
    Eigen::VectorXd X = lu.solve(rhs);
    Eigen::VectorXcd v(2 * n);
    for (int k = 0; k < 2 * n; ++k) v(k) = cplx(X(k), X(2 * n + k));
    S.beta.assign(v.data(), v.data() + n);
    S.tau.assign(v.data() + n, v.data() + 2 * n);
    S.residual = (A * v + B * v.conjugate() - c).cwiseAbs().maxCoeff();
    S.M_at_i = eval_M(S, kI);
    S.M1_at_i = eval_dM(S, kI);
    return S;
}

Mat2 eval_M(const SolitonState& s, cplx z) {
    Mat2 M = Mat2::Identity();
    for (std::size_t k = 0; k < s.poles.size(); ++k) {
        cplx p = s.poles[k];
        if (std::abs(z - p) < 1e-14 || std::abs(z - std::conj(p)) < 1e-14)
            throw NumericError("PoleEvaluation", "M evaluated at a pole");
        cplx a = 1.0 / (z - p), b = 1.0 / (z - std::conj(p));
        M += mat2(s.beta[k] * a, -std::conj(s.tau[k]) * b, s.tau[k] * a, std::conj(s.beta[k]) * b);
    }
    return M;
}

Mat2 eval_dM(const SolitonState& s, cplx z) {
    Mat2 D = Mat2::Zero();
    for (std::size_t k = 0; k < s.poles.size(); ++k) {
        cplx p = s.poles[k];
        cplx a = -1.0 / ((z - p) * (z - p)), b = -1.0 / ((z - std::conj(p)) * (z - std::conj(p)));
        D += mat2(s.beta[k] * a, -std::conj(s.tau[k]) * b, s.tau[k] * a, std::conj(s.beta[k]) * b);
    }
    return D;
}

Reconstruction reconstruct(const SolitonState& s, int map_sign) {
    const Mat2& M = s.M_at_i;
    const Mat2& M1 = s.M1_at_i;
    Reconstruction R;
    R.k_plus = double(map_sign) * std::log(M(1, 1) / std::conj(M(0, 0)));
    R.x = s.y + R.k_plus.real();
    R.u_times_phase = -(M1(0, 1) / M(1, 1) * std::conj(M(0, 0)) / M(0, 0) +
                        std::conj(M1(1, 0) / M(0, 0)) * M(1, 1) / std::conj(M(1, 1)));
    return R;
}

SolitonData with_partners(const SolitonData& half) {
    SolitonData out = half;
    for (std::size_t k = 0; k < half.poles.size(); ++k) {
        cplx p = half.poles[k];
        out.poles.push_back(-1.0 / p);
        out.norming_mod.push_back(-half.norming_mod[k] / (p * p));
    }
    return out;
}

SolitonProfile soliton_on_grid(const SolitonData& data, double t, double L, int N, int map_sign) {
    SolitonProfile P;
    P.x = periodic_grid(L, N);
    auto at = [&](double y) { return reconstruct(solve_soliton_system(data, y, t), map_sign); };

    // Bracket [-L, L] in y; x - y = ±k₊ is bounded by the total ∫(d-1).
    double ylo = -L, yhi = L;
    while (at(ylo).x > -L) ylo -= 0.5 * L;
    while (at(yhi).x < L) yhi += 0.5 * L;

    const int ny = 8 * N;
    std::vector<double> ys(static_cast<std::size_t>(ny)), xs(static_cast<std::size_t>(ny));
    for (int k = 0; k < ny; ++k) {
        ys[std::size_t(k)] = ylo + (yhi - ylo) * k / (ny - 1);
        xs[std::size_t(k)] = at(ys[std::size_t(k)]).x;
        if (k > 0 && !(xs[std::size_t(k)] > xs[std::size_t(k - 1)]))
            throw NumericError("NonMonotoneMap", "x(y) is not strictly increasing");
    }
    gsl_interp* ip = gsl_interp_alloc(gsl_interp_steffen, std::size_t(ny));
    gsl_interp_init(ip, xs.data(), ys.data(), std::size_t(ny));

    P.u.resize(P.x.size());
    std::vector<cplx> w(P.x.size());
    for (std::size_t j = 0; j < P.x.size(); ++j) {
        double xt = P.x[j];
        double y = gsl_interp_eval(ip, xs.data(), ys.data(), xt, nullptr);
        // Secant refinement of x(y) = xt.
        double y0 = y, f0 = at(y0).x - xt;
        double y1 = y + 1e-6, f1 = at(y1).x - xt;
        for (int it = 0; it < 30 && std::abs(f1) > 1e-14 * (1.0 + std::abs(xt)); ++it) {
            if (f1 == f0) break;
            double y2 = y1 - f1 * (y1 - y0) / (f1 - f0);
            y0 = y1;
            f0 = f1;
            y1 = y2;
            f1 = at(y1).x - xt;
        }
        w[j] = at(y1).u_times_phase;
    }
    gsl_interp_free(ip);

    // g̃ is invariant under a constant phase of u, so it can be read off w.
    InitialDatum D = precompute_geometry(w, L, N);
    P.g_tilde = D.g;
    const cplx ph = std::exp(-2.0 * map_sign * D.g);
    for (std::size_t j = 0; j < w.size(); ++j) P.u[j] = w[j] * ph;
    return P;
}

}  // namespace ccch
