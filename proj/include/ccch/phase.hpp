#pragma once
#include "ccch/common.hpp"
#include <utility>
#include <vector>

namespace ccch {

enum class Region { LeftNoPoint, FourPoints, EightPoints, RightNoPoint };

const char* region_name(Region r);
Region classify_region(double xi);

struct PhasePortrait {
    double xi = 0.0;
    Region region = Region::LeftNoPoint;
    std::vector<double> points;        // descending
    std::vector<double> theta_second;  // θ''(ξ_k)
    std::vector<int> eta_signs;        // η(ξ, ξ_k)
};

// θ(z; ξ) = -(1/4)(z - 1/z)[ξ + 4/(z + 1/z)^2]
cplx theta(cplx z, double xi);
// Im θ from the explicit real/imaginary decomposition.
double im_theta(cplx z, double xi);
cplx theta_prime(cplx z, double xi);
double theta_prime(double z, double xi);
double theta_second(double z, double xi);

// 2itθ written in (y, t) form; valid for t = 0 as well.
cplx two_i_t_theta(cplx z, double y, double t);

PhasePortrait stationary_points(double xi);

// Σ(ξ) = {s ∈ ℝ : θ'(s) > 0} as sorted open intervals; infinities encoded as ±inf.
std::vector<std::pair<double, double>> sigma_intervals(const PhasePortrait& p);

// Exact stationary-point oracle: ξ = 4(p-4)/(p+4)^2 with p = (z - 1/z)^2.
std::vector<double> stationary_points_closed_form(double xi);

}  // namespace ccch
