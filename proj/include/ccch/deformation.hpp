#pragma once
#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "ccch/common.hpp"
#include "ccch/phase.hpp"
#include "ccch/scattering.hpp"

namespace ccch {

struct Partition {
    std::vector<int> nabla, delta, lambda;
    double rho0 = std::numeric_limits<double>::infinity();
    int n_lambda = 0;
    double delta0 = 0.0;

    // Indices in Δ∖Λ: the poles T removes by a Blaschke factor.
    std::vector<int> delta_minus_lambda() const;
};

// δ0 = +inf puts every pole into Λ.
Partition partition_spectrum(const DiscreteSpectrum& spec, double xi, double delta0);

// ν(s) = -log(1 + |r(s)|²)/(2π), periodic cubic spline in φ = 2 atan s.
// Outside the resolved band 1/S <= |s| <= S the reflection coefficient is treated as zero.
class NuProfile {
public:
    static NuProfile zero();
    static NuProfile from_table(const SpectralTable& table);

    double operator()(double s) const;
    double s_max() const { return s_max_; }
    bool is_zero() const { return !spline_; }

private:
    struct Spline;
    std::shared_ptr<const Spline> spline_;
    double s_max_ = std::numeric_limits<double>::infinity();
};

// Samples r on the standard φ grid, marking |α| > alpha_cap as unresolved.
SpectralTable table_from_function(const std::function<cplx(double)>& r, int nz, double alpha_cap);

struct ScalarFactor {
    double xi = 0.0;
    Region region = Region::LeftNoPoint;
    std::vector<std::pair<double, double>> sigma_xi;  // Σ(ξ), ±inf allowed
    std::vector<std::pair<double, double>> support;   // Σ(ξ) clipped to the resolved band
    NuProfile nu;
    std::vector<cplx> blaschke;  // poles ϱ_n, n ∈ Δ∖Λ
    cplx T_at_i = 1.0;
    cplx Sigma0 = 0.0;
    std::vector<double> points, nu_j, beta_j;
    std::vector<int> eta;
    std::vector<cplx> T_j;

    // ∫_Σ ν(s)/(s - z) ds. For real z inside Σ, side = ±1 picks the boundary value from ℂ±.
    cplx cauchy(cplx z, int side = 0) const;
    cplx delta(cplx z, int side = 0) const;
    cplx blaschke_product(cplx z) const;
    cplx T(cplx z, int side = 0) const;
    // T_j (η(z - ξ_j))^{-iην(ξ_j)}
    cplx T_local(std::size_t j, cplx z) const;
};

ScalarFactor build_scalar_factor(const NuProfile& nu, const DiscreteSpectrum& spec, const Partition& part,
                                 const PhasePortrait& portrait);

cplx sigma0(const NuProfile& nu, const PhasePortrait& portrait);

}  // namespace ccch
