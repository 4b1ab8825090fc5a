#pragma once
#include "ccch/common.hpp"
#include <vector>

namespace ccch {

// Thin RAII wrapper over a pair of FFTW plans for complex length-n transforms.
class Fft {
public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }
    void forward(const std::vector<cplx>& in, std::vector<cplx>& out);
    // Normalised inverse: backward(forward(v)) == v.
    void backward(const std::vector<cplx>& in, std::vector<cplx>& out);

private:
    int n_;
    std::vector<cplx> buf_;
    void* fwd_ = nullptr;
    void* bwd_ = nullptr;
};

// Angular wavenumbers for a periodic grid of n points and period P.
std::vector<double> wavenumbers(int n, double period);

// Spectral derivative of periodic samples; the Nyquist mode is dropped.
std::vector<cplx> spectral_derivative(const std::vector<cplx>& f, double period, int order = 1);

// Band-limited interpolation from n to n*factor points by zero padding.
std::vector<cplx> spectral_refine(const std::vector<cplx>& f, int factor);

}  // namespace ccch
