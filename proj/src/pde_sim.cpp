#include "ccch/pde_sim.hpp"

#include <algorithm>
#include <cmath>

#include "ccch/fft.hpp"
#include "ccch/scattering.hpp"

namespace ccch {

struct Simulator::Impl {
    Impl(double L, int N) : fft(N), k(wavenumbers(N, 2.0 * L)), keep(std::size_t(N)) {
        // 2/3 rule: keep |j| <= N/3.
        for (int j = 0; j < N; ++j) {
            int jj = j <= N / 2 ? j : N - j;
            keep[std::size_t(j)] = 3 * jj <= N ? 1.0 : 0.0;
        }
    }
    Fft fft;  // not shared across threads: one Simulator per trajectory
    std::vector<double> k, keep;

    std::vector<cplx> fwd(const std::vector<cplx>& v) {
        std::vector<cplx> out;
        fft.forward(v, out);
        return out;
    }
    std::vector<cplx> bwd(const std::vector<cplx>& v) {
        std::vector<cplx> out;
        fft.backward(v, out);
        return out;
    }
};

Simulator::Simulator(double L, int N) : L_(L), N_(N) {
    if (!(L > 0.0)) throw ConfigError("simulator half-length must be positive");
    if (N < 16 || (N & (N - 1)) != 0) throw ConfigError("simulator N must be a power of two >= 16");
    impl_ = std::make_unique<Impl>(L, N);
}

Simulator::~Simulator() = default;

std::vector<cplx> Simulator::invert_helmholtz(const std::vector<cplx>& m) const {
    auto M = impl_->fwd(m);
    for (std::size_t j = 0; j < M.size(); ++j) M[j] /= 1.0 + impl_->k[j] * impl_->k[j];
    return impl_->bwd(M);
}

std::vector<cplx> Simulator::apply_helmholtz(const std::vector<cplx>& u) const {
    auto U = impl_->fwd(u);
    for (std::size_t j = 0; j < U.size(); ++j) U[j] *= 1.0 + impl_->k[j] * impl_->k[j];
    return impl_->bwd(U);
}

std::vector<cplx> Simulator::rhs(const std::vector<cplx>& m) const {
    Impl& S = *impl_;
    const std::size_t n = m.size();
    auto Mh = S.fwd(m);
    std::vector<cplx> Uh(n), Uxh(n), Mf(n), lin(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx uh = Mh[j] / (1.0 + S.k[j] * S.k[j]);
        lin[j] = kI * S.k[j] * uh;
        Uh[j] = uh * S.keep[j];
        Uxh[j] = lin[j] * S.keep[j];
        Mf[j] = Mh[j] * S.keep[j];
    }
    auto u = S.bwd(Uh), ux = S.bwd(Uxh), mf = S.bwd(Mf);
    std::vector<cplx> P(n), Q(n);
    for (std::size_t j = 0; j < n; ++j) {
        P[j] = mf[j] * (std::norm(u[j]) - std::norm(ux[j]));
        Q[j] = mf[j] * (u[j] * std::conj(ux[j]) - ux[j] * std::conj(u[j]));
    }
    auto Ph = S.fwd(P), Qh = S.fwd(Q);
    for (std::size_t j = 0; j < n; ++j)
        lin[j] += S.keep[j] * (0.5 * kI * S.k[j] * Ph[j] - 0.5 * Qh[j]);
    return S.bwd(lin);
}

std::vector<cplx> Simulator::step(const std::vector<cplx>& m, double dt) const {
    const std::size_t n = m.size();
    std::vector<cplx> tmp(n), out = m;
    auto k1 = rhs(m);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = m[j] + 0.5 * dt * k1[j];
    auto k2 = rhs(tmp);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = m[j] + 0.5 * dt * k2[j];
    auto k3 = rhs(tmp);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = m[j] + dt * k3[j];
    auto k4 = rhs(tmp);
    for (std::size_t j = 0; j < n; ++j) out[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    return out;
}

FieldSnapshot Simulator::snapshot_from_u(const std::vector<cplx>& u, double t) const {
    if (int(u.size()) != N_) throw ConfigError("snapshot size does not match the simulator grid");
    FieldSnapshot s;
    s.t = t;
    s.L = L_;
    s.x = periodic_grid(L_, N_);
    s.u = u;
    s.m = apply_helmholtz(u);
    return s;
}

namespace {

double sup_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& c : v) s = std::max(s, std::abs(c));
    return s;
}

}  // namespace

Trajectory Simulator::evolve(const FieldSnapshot& init, double dt, const std::vector<double>& save_times) const {
    if (!(dt > 0.0) || dt > 0.25 * dx() * (1.0 + 1e-12)) throw ConfigError("dt must lie in (0, 0.25 dx]");
    if (int(init.m.size()) != N_) throw ConfigError("initial snapshot does not match the simulator grid");
    Trajectory tr;
    tr.dt = dt;
    tr.snapshots.push_back(init);
    tr.g.push_back(phase_functional(init.m, L_));

    const double u0 = sup_norm(init.u);
    std::vector<cplx> m = init.m;
    double t = init.t;
    for (double target : save_times) {
        if (!(target > t)) throw ConfigError("save times must increase past the initial time");
        const int n = int(std::ceil((target - t) / dt - 1e-9));
        const double h = (target - t) / n;
        for (int s = 0; s < n; ++s) {
            m = step(m, h);
            ++tr.steps;
            auto u = invert_helmholtz(m);
            double top = sup_norm(u);
            if (u0 > 0.0 && top > 10.0 * u0) throw NumericError("BlowupDetected", "max|u| exceeded 10x its initial value");
            if (top > 0.0) {
                double edge = std::max(std::abs(u.front()), std::abs(u.back()));
                tr.max_edge_ratio = std::max(tr.max_edge_ratio, edge / top);
                if (tr.max_edge_ratio > edge_tolerance)
                    throw NumericError("BoundaryContamination", "solution reached the edge of the periodic box");
            }
        }
        t = target;
        FieldSnapshot s;
        s.t = t;
        s.L = L_;
        s.x = init.x;
        s.m = m;
        s.u = invert_helmholtz(m);
        tr.snapshots.push_back(std::move(s));
        tr.g.push_back(phase_functional(m, L_));
    }
    return tr;
}

cplx phase_functional(const std::vector<cplx>& m, double L) {
    auto mx = spectral_derivative(m, 2.0 * L, 1);
    const double dx = 2.0 * L / double(m.size());
    cplx acc = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        double d = std::sqrt(1.0 + std::norm(m[j]));
        acc += (mx[j] * std::conj(m[j]) - m[j] * std::conj(mx[j])) / (4.0 * d * (d + 1.0));
    }
    return acc * dx;
}

}  // namespace ccch
