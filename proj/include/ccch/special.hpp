#pragma once
#include "ccch/common.hpp"

namespace ccch {

// Shifted Stirling series in long double, reflection for Re z < 1/2.
cplx complex_gamma(cplx z);
cplx complex_lgamma(cplx z);  // principal-branch-free log: exp() of it equals Γ
cplx complex_rgamma(cplx z);  // 1/Γ(z), zero at the poles

// Parabolic cylinder function D_a(z), |z| <= 50.
cplx parabolic_cylinder_D(cplx a, cplx z);

}  // namespace ccch
