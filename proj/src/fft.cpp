#include "ccch/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace ccch {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(int n) : n_(n), buf_(std::size_t(n)) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
    fwd_ = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft::forward(const std::vector<cplx>& in, std::vector<cplx>& out) {
    buf_ = in;
    fftw_execute(static_cast<fftw_plan>(fwd_));
    out = buf_;
}

void Fft::backward(const std::vector<cplx>& in, std::vector<cplx>& out) {
    buf_ = in;
    fftw_execute(static_cast<fftw_plan>(bwd_));
    const double s = 1.0 / n_;
    out.resize(buf_.size());
    for (std::size_t k = 0; k < buf_.size(); ++k) out[k] = buf_[k] * s;
}

std::vector<double> wavenumbers(int n, double period) {
    std::vector<double> k(static_cast<std::size_t>(n));
    const double base = 2.0 * kPi / period;
    for (int j = 0; j < n; ++j) k[std::size_t(j)] = base * (j <= n / 2 ? j : j - n);
    if (n % 2 == 0) k[std::size_t(n / 2)] = 0.0;
    return k;
}

std::vector<cplx> spectral_derivative(const std::vector<cplx>& f, double period, int order) {
    const int n = int(f.size());
    Fft fft(n);
    std::vector<cplx> F;
    fft.forward(f, F);
    auto k = wavenumbers(n, period);
    for (int j = 0; j < n; ++j) F[std::size_t(j)] *= std::pow(kI * k[std::size_t(j)], order);
    std::vector<cplx> out;
    fft.backward(F, out);
    return out;
}

std::vector<cplx> spectral_refine(const std::vector<cplx>& f, int factor) {
    const int n = int(f.size()), m = n * factor;
    Fft a(n), b(m);
    std::vector<cplx> F, G(std::size_t(m), 0.0);
    a.forward(f, F);
    for (int j = 0; j < n; ++j) {
        int kk = j <= n / 2 ? j : j - n;
        cplx v = F[std::size_t(j)];
        if (n % 2 == 0 && j == n / 2) {
            // split the Nyquist mode symmetrically
            G[std::size_t(n / 2)] += 0.5 * v;
            G[std::size_t(m - n / 2)] += 0.5 * v;
            continue;
        }
        G[std::size_t(kk >= 0 ? kk : m + kk)] = v;
    }
    for (auto& g : G) g *= double(factor);
    std::vector<cplx> out;
    b.backward(G, out);
    return out;
}

}  // namespace ccch
