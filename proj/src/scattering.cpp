#include "ccch/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ccch/fft.hpp"

namespace ccch {

namespace {

// Cumulative ∫_{x_0}^{x_k} f on a periodic grid, 4th order per interval
// using the cubic through f_{k-1}, f_k, f_{k+1}, f_{k+2}.
template <class T>
std::vector<T> cumulative(const std::vector<T>& f, double dx) {
    const std::size_t n = f.size();
    std::vector<T> c(n + 1, T(0));
    auto at = [&](long k) { return f[std::size_t((k % long(n) + long(n)) % long(n))]; };
    for (std::size_t k = 0; k < n; ++k) {
        long kk = long(k);
        c[k + 1] = c[k] + dx / 24.0 * (-at(kk - 1) + 13.0 * at(kk) + 13.0 * at(kk + 1) - at(kk + 2));
    }
    return c;
}

// Composite Simpson over one period (closed endpoint equal to the first sample).
template <class T>
T simpson_periodic(const std::vector<T>& f, double dx) {
    const std::size_t n = f.size();
    T s = f[0] + f[0];
    for (std::size_t k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f[k];
    return s * dx / 3.0;
}

}  // namespace

std::vector<double> periodic_grid(double L, int N) {
    std::vector<double> x(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) x[std::size_t(j)] = -L + 2.0 * L * j / N;
    return x;
}

std::vector<cplx> sech_profile(double L, int N, double amplitude, double phase_velocity) {
    auto x = periodic_grid(L, N);
    std::vector<cplx> u(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        u[j] = amplitude / std::cosh(x[j]) * std::exp(kI * (phase_velocity * x[j]));
    return u;
}

cplx alpha_of(cplx z) { return 0.5 * kI * (z - 1.0 / z); }

InitialDatum precompute_geometry(const std::vector<cplx>& u0, double L, int N) {
    if (N < 256 || N % 2 != 0 || int(u0.size()) != N)
        throw ConfigError("precompute_geometry: N must be even, >= 256 and match the sample count");
    double umax = 0.0;
    for (auto v : u0) umax = std::max(umax, std::abs(v));
    double edge = std::max(std::abs(u0.front()), std::abs(u0.back()));
    if (umax > 0.0 && edge > 1e-8 * umax)
        throw NumericError("DecayViolation", "|u0(±L)| exceeds 1e-8 max|u0|");

    InitialDatum D;
    D.L = L;
    D.N = N;
    D.dx = 2.0 * L / N;
    D.x = periodic_grid(L, N);
    D.u0 = u0;

    const double P = 2.0 * L;
    auto& F = D.fine;
    const int M = 2 * N;
    F.dx = D.dx / 2.0;
    auto uf = spectral_refine(u0, 2);
    auto uxx = spectral_derivative(uf, P, 2);
    std::vector<cplx> m(static_cast<std::size_t>(M)), mx;
    for (int k = 0; k < M; ++k) m[std::size_t(k)] = uf[std::size_t(k)] - uxx[std::size_t(k)];
    mx = spectral_derivative(m, P, 1);

    std::vector<double> d(static_cast<std::size_t>(M)), dm1(static_cast<std::size_t>(M));
    std::vector<cplx> G(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k) {
        std::size_t s = std::size_t(k);
        d[s] = std::sqrt(std::norm(m[s]) + 1.0);
        dm1[s] = std::norm(m[s]) / (d[s] + 1.0);  // d - 1 without cancellation
        G[s] = (mx[s] * std::conj(m[s]) - m[s] * std::conj(mx[s])) / (4.0 * d[s] * (d[s] + 1.0));
    }
    auto Kc = cumulative(dm1, F.dx);
    auto gc = cumulative(G, F.dx);
    D.K = simpson_periodic(dm1, F.dx);
    D.g = cplx(0.0, simpson_periodic(G, F.dx).imag());

    F.x.resize(std::size_t(M + 1));
    F.d.resize(std::size_t(M + 1));
    F.h.resize(std::size_t(M + 1));
    for (auto* v : {&F.c0_12, &F.c0_21, &F.c1_12, &F.c1_21, &F.c1_11}) v->resize(std::size_t(M + 1));
    for (int k = 0; k <= M; ++k) {
        std::size_t s = std::size_t(k), w = std::size_t(k % M);
        F.x[s] = -L + k * F.dx;
        F.d[s] = d[w];
        F.h[s] = F.x[s] - (Kc[std::size_t(M)] - Kc[s]);
        cplx gm = k == M ? gc[std::size_t(M)] : gc[s];
        cplx mm = m[w], mmx = mx[w];
        double dd = d[w];
        cplx em = std::exp(-2.0 * gm), ep = std::exp(2.0 * gm);
        F.c0_12[s] = em * (kI * (dd + 1.0) * mmx / (4.0 * dd * dd) -
                           kI * mm * mm * std::conj(mmx) / (4.0 * dd * dd * (dd + 1.0)));
        F.c0_21[s] = ep * (kI * (dd + 1.0) * std::conj(mmx) / (4.0 * dd * dd) -
                           kI * std::conj(mm) * std::conj(mm) * mmx / (4.0 * dd * dd * (dd + 1.0)));
        F.c1_12[s] = em * mm / (2.0 * dd);
        F.c1_21[s] = -ep * std::conj(mm) / (2.0 * dd);
        F.c1_11[s] = -kI * std::norm(mm) / (2.0 * dd);
    }

    D.m0.resize(std::size_t(N));
    D.mx.resize(std::size_t(N));
    D.d.resize(std::size_t(N));
    D.h.resize(std::size_t(N));
    D.y.resize(std::size_t(N));
    D.g_minus.resize(std::size_t(N));
    for (int j = 0; j < N; ++j) {
        std::size_t s = std::size_t(j), k = std::size_t(2 * j);
        D.m0[s] = m[k];
        D.mx[s] = mx[k];
        D.d[s] = d[k];
        D.h[s] = F.h[k];
        D.y[s] = F.h[k];
        D.g_minus[s] = gc[k];
    }
    return D;
}

Mat2 lax_U(const InitialDatum& D, std::size_t k, cplx z) {
    const auto& F = D.fine;
    cplx iz = 1.0 / z;
    cplx u11 = F.c1_11[k] * iz;
    return mat2(u11, F.c0_12[k] + F.c1_12[k] * iz, F.c0_21[k] + F.c1_21[k] * iz, -u11);
}

Mat2 expm_traceless(const Mat2& W) {
    // W^2 = -det(W) I for traceless W
    cplx s2 = -(W(0, 0) * W(1, 1) - W(0, 1) * W(1, 0));
    cplx s = std::sqrt(s2);
    cplx c, sh;
    if (std::abs(s) < 1e-4) {
        c = 1.0 + s2 / 2.0 + s2 * s2 / 24.0;
        sh = 1.0 + s2 / 6.0 + s2 * s2 / 120.0;
    } else {
        c = std::cosh(s);
        sh = std::sinh(s) / s;
    }
    return c * Mat2::Identity() + sh * W;
}

std::vector<Col> jost_column(const InitialDatum& D, cplx z, int side, int col, int stride) {
    // The transformed Lax matrix is regular at ±i; only z = 0 is excluded.
    if (std::abs(z) < 1e-12) throw NumericError("DomainError", "Jost solutions undefined at z = 0");
    const auto& F = D.fine;
    const long M = 2L * D.N;
    const cplx al = alpha_of(z);
    const double sc = col == 0 ? 1.0 : -1.0;

    std::vector<Col> out(std::size_t(D.N + 1), Col::Constant(cplx(NAN, NAN)));
    Col v = Col::Zero();
    v[col] = 1.0;
    long k = side < 0 ? 0 : M;
    const long step = side < 0 ? 2L * stride : -2L * stride;
    const double H = (side < 0 ? 1.0 : -1.0) * stride * D.dx;
    out[std::size_t(k / 2)] = v;

    // Ψ = μ e^{-(α/2) h σ3} solves Ψ_x = A Ψ with A = -(α/2) d σ3 + U.
    auto A = [&](long kk) {
        Mat2 a = lax_U(D, std::size_t(kk), z);
        cplx dg = 0.5 * al * F.d[std::size_t(kk)];
        a(0, 0) -= dg;
        a(1, 1) += dg;
        return a;
    };
    Mat2 A0 = A(k);
    while ((side < 0 && k < M) || (side > 0 && k > 0)) {
        long k1 = k + step / 2, k2 = k + step;
        Mat2 Am = A(k1), A1 = A(k2);
        // Fourth-order Magnus step from endpoint and midpoint samples.
        Mat2 W = H / 6.0 * (A0 + 4.0 * Am + A1) + H * H / 12.0 * (A1 * A0 - A0 * A1);
        v = expm_traceless(W) * v;
        v *= std::exp(0.5 * al * sc * (F.h[std::size_t(k2)] - F.h[std::size_t(k)]));
        A0 = A1;
        k = k2;
        out[std::size_t(k / 2)] = v;
    }
    return out;
}

JostPair jost_columns(const InitialDatum& D, cplx z, int stride) {
    return {jost_column(D, z, -1, 0, stride), jost_column(D, z, +1, 1, stride)};
}

ScatterPoint scatter_at(const InitialDatum& D, cplx z, int stride) {
    auto c = jost_column(D, z, -1, 0, stride);
    const Col& v = c.back();
    return {v[0], std::exp(-alpha_of(z) * D.fine.h.back()) * v[1]};
}

std::vector<double> spectral_phi_grid(int nz) {
    if (nz % 4 != 0 || nz < 8) throw ConfigError("spectral grid size must be a positive multiple of 4");
    std::vector<double> phi(static_cast<std::size_t>(nz));
    for (int j = 0; j < nz; ++j) phi[std::size_t(j)] = -kPi + (j + 0.5) * 2.0 * kPi / nz;
    return phi;
}

double resolvable_alpha(const InitialDatum& D) {
    double dmax = *std::max_element(D.d.begin(), D.d.end());
    return 1.0 / (dmax * D.dx);
}

SpectralTable scattering_coeffs(const InitialDatum& D, int nz, int threads) {
    SpectralTable T;
    T.phi = spectral_phi_grid(nz);
    T.alpha_cap = resolvable_alpha(D);
    const std::size_t n = T.phi.size();
    T.z.resize(n);
    T.a.assign(n, 1.0);
    T.b.assign(n, 0.0);
    T.r.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) T.z[j] = std::tan(T.phi[j] / 2.0);
    parallel_for(int(n), threads, [&](int j) {
        std::size_t s = std::size_t(j);
        if (std::abs(alpha_of(T.z[s])) > T.alpha_cap) return;
        auto sp = scatter_at(D, T.z[s]);
        T.a[s] = sp.a;
        T.b[s] = sp.b;
        T.r[s] = sp.b / sp.a;
    });
    return T;
}

namespace {

double arg_increment(cplx from, cplx to) { return std::arg(to / from); }

// Change of arg a along the segment p -> q, subdividing until each step turns by < π/4.
double arg_change(const std::function<cplx(cplx)>& a, cplx p, cplx q, cplx ap, cplx aq, int depth) {
    double inc = arg_increment(ap, aq);
    if (std::abs(inc) < kPi / 4 || depth > 20) return inc;
    cplx mid = 0.5 * (p + q);
    cplx am = a(mid);
    return arg_change(a, p, mid, ap, am, depth + 1) + arg_change(a, mid, q, am, aq, depth + 1);
}

}  // namespace

int winding_number(const InitialDatum& D, const SearchBox& b) {
    auto a = [&](cplx z) { return scatter_at(D, z).a; };
    cplx c[4] = {{b.re0, b.im0}, {b.re1, b.im0}, {b.re1, b.im1}, {b.re0, b.im1}};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        cplx p = c[e], q = c[(e + 1) % 4];
        const int n = 16;
        cplx prev = p, aprev = a(p);
        for (int k = 1; k <= n; ++k) {
            cplx z = p + (q - p) * (double(k) / n);
            cplx az = a(z);
            total += arg_change(a, prev, z, aprev, az, 0);
            prev = z;
            aprev = az;
        }
    }
    return int(std::lround(total / (2.0 * kPi)));
}

cplx a_derivative(const InitialDatum& D, cplx z, double radius, int nodes) {
    cplx s = 0.0;
    for (int k = 0; k < nodes; ++k) {
        cplx e = std::polar(1.0, 2.0 * kPi * k / nodes);
        s += scatter_at(D, z + radius * e).a / e;
    }
    return s / (double(nodes) * radius);
}

cplx norming_constant(const InitialDatum& D, cplx rho) {
    auto jp = jost_columns(D, rho);
    const std::size_t mid = std::size_t(D.N / 2);
    const Col& m1 = jp.mu_minus_col1[mid];
    const Col& p2 = jp.mu_plus_col2[mid];
    int c = std::abs(p2[0]) > std::abs(p2[1]) ? 0 : 1;
    cplx btilde = m1[c] / p2[c] * std::exp(-alpha_of(rho) * D.fine.h[2 * mid]);
    return btilde / a_derivative(D, rho);
}

DiscreteSpectrum find_discrete_spectrum(const InitialDatum& D, const SearchBox& box) {
    DiscreteSpectrum S;
    std::vector<SearchBox> work{box};
    std::vector<cplx> seeds;
    while (!work.empty()) {
        SearchBox b = work.back();
        work.pop_back();
        int w = winding_number(D, b);
        if (w <= 0) continue;
        double wr = b.re1 - b.re0, wi = b.im1 - b.im0;
        if (std::max(wr, wi) <= 0.05) {
            seeds.push_back({0.5 * (b.re0 + b.re1), 0.5 * (b.im0 + b.im1)});
            continue;
        }
        if (wr >= wi) {
            double m = 0.5 * (b.re0 + b.re1);
            work.push_back({b.re0, m, b.im0, b.im1});
            work.push_back({m, b.re1, b.im0, b.im1});
        } else {
            double m = 0.5 * (b.im0 + b.im1);
            work.push_back({b.re0, b.re1, b.im0, m});
            work.push_back({b.re0, b.re1, m, b.im1});
        }
    }
    for (cplx z : seeds) {
        for (int it = 0; it < 50; ++it) {
            const double h = 1e-6;
            cplx az = scatter_at(D, z).a;
            cplx da = (scatter_at(D, z + h).a - scatter_at(D, z - h).a) / (2.0 * h);
            cplx dz = az / da;
            z -= dz;
            if (std::abs(dz) < 1e-13) break;
        }
        bool dup = false;
        for (cplx p : S.poles) dup = dup || std::abs(p - z) < 1e-8;
        if (dup || z.imag() <= 0.0) continue;
        S.poles.push_back(z);
        S.norming.push_back(norming_constant(D, z));
    }
    return S;
}

}  // namespace ccch
