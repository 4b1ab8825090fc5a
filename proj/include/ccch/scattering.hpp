#pragma once
#include "ccch/common.hpp"
#include <vector>

namespace ccch {

struct InitialDatum {
    double L = 0.0;
    int N = 0;
    double dx = 0.0;
    std::vector<double> x;
    std::vector<cplx> u0, m0, mx;
    std::vector<double> d, h, y;
    std::vector<cplx> g_minus;  // g_-(x) = ∫_{-L}^x (m_x m̄ - m m̄_x) / (4d(d+1))
    cplx g = 0.0;               // g_- + g_+, purely imaginary
    double K = 0.0;             // ∫ (d - 1) dx

    cplx g_plus(std::size_t j) const { return g - g_minus[j]; }

    // Fields on the doubled grid used as Magnus midpoint samples; index 2j is x_j, last entry is x = L.
    struct Fine {
        double dx = 0.0;
        std::vector<double> x, d, h;
        std::vector<cplx> c0_12, c0_21, c1_12, c1_21, c1_11;
    } fine;
};

std::vector<cplx> sech_profile(double L, int N, double amplitude, double phase_velocity);
std::vector<double> periodic_grid(double L, int N);

InitialDatum precompute_geometry(const std::vector<cplx>& u0, double L, int N);

// Coefficient matrix of μ_x = -(α/2) d [σ3, μ] + U μ at fine-grid index k.
Mat2 lax_U(const InitialDatum& D, std::size_t k, cplx z);
cplx alpha_of(cplx z);

using Col = Eigen::Vector2cd;

// side = -1: μ_- normalised at x = -L; side = +1: μ_+ normalised at x = +L.
// Returns the column at every coarse grid point plus x = L (N + 1 entries).
std::vector<Col> jost_column(const InitialDatum& D, cplx z, int side, int col, int stride = 1);

struct JostPair {
    std::vector<Col> mu_minus_col1, mu_plus_col2;
};
JostPair jost_columns(const InitialDatum& D, cplx z, int stride = 1);

struct ScatterPoint {
    cplx a, b;
};
// a = μ_-,11(L), b = e^{-α h(L)} μ_-,21(L).
ScatterPoint scatter_at(const InitialDatum& D, cplx z, int stride = 1);

struct SpectralTable {
    std::vector<double> phi;  // z = tan(φ/2), uniform in φ
    std::vector<double> z;
    std::vector<cplx> a, b, r;
    double alpha_cap = 0.0;  // |α| beyond which r is below resolution and set to 0
};

// Uniform φ grid, φ_j = -π + (j + 1/2) 2π / nz, nz divisible by 4; closed under z -> -z and z -> -1/z.
std::vector<double> spectral_phi_grid(int nz);
SpectralTable scattering_coeffs(const InitialDatum& D, int nz, int threads = 1);
// Largest |α| the grid resolves: |α| d_max dx <= 1.
double resolvable_alpha(const InitialDatum& D);

struct DiscreteSpectrum {
    std::vector<cplx> poles;
    std::vector<cplx> norming;
};

struct SearchBox {
    double re0 = -3.0, re1 = 3.0, im0 = 0.05, im1 = 3.0;
};

// Winding number of a(z) around the rectangle [re0,re1] x [im0,im1].
int winding_number(const InitialDatum& D, const SearchBox& box);
DiscreteSpectrum find_discrete_spectrum(const InitialDatum& D, const SearchBox& box);
cplx a_derivative(const InitialDatum& D, cplx z, double radius = 0.01, int nodes = 64);
cplx norming_constant(const InitialDatum& D, cplx rho);

// Wrapper for std::thread parallel loops over [0, n).
template <class F>
void parallel_for(int n, int threads, F&& f);

}  // namespace ccch

#include <thread>

template <class F>
void ccch::parallel_for(int n, int threads, F&& f) {
    if (threads <= 1 || n < 2) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads) f(i);
        });
    for (auto& th : pool) th.join();
}
