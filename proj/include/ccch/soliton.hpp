#pragma once
#include <vector>

#include "ccch/common.hpp"

namespace ccch {

struct SolitonData {
    std::vector<cplx> poles;        // ϱ in ℂ⁺
    std::vector<cplx> norming_mod;  // c T²(ϱ)

    void validate() const;
};

struct SolitonState {
    double y = 0.0, t = 0.0;
    std::vector<cplx> poles;
    std::vector<cplx> beta, tau;
    Mat2 M_at_i = Mat2::Identity();
    Mat2 M1_at_i = Mat2::Zero();
    double residual = 0.0;  // max residual of the linear system
};

SolitonState solve_soliton_system(const SolitonData& data, double y, double t);

// I + Σ [[β/(z-ϱ), -τ̄/(z-ϱ̄)], [τ/(z-ϱ), β̄/(z-ϱ̄)]]
Mat2 eval_M(const SolitonState& s, cplx z);
// z-derivative of eval_M
Mat2 eval_dM(const SolitonState& s, cplx z);

struct Reconstruction {
    double x = 0.0;
    cplx u_times_phase = 0.0;  // u e^{2 map_sign g̃}
    cplx k_plus = 0.0;         // map_sign·ln(M22(i)/conj M11(i)); imaginary part is a diagnostic
};

// x = y + k_plus in both conventions.
// map_sign = -1: k_plus = -ln(M22(i)/conj M11(i)), and the residue formula yields u e^{-2g̃}.
// map_sign = +1 is the literal reading: k_plus = +ln(...), u e^{2g̃}.
Reconstruction reconstruct(const SolitonState& s, int map_sign = -1);

struct SolitonProfile {
    std::vector<double> x;
    std::vector<cplx> u;  // u^r with the g̃ phase removed
    cplx g_tilde = 0.0;
};

// Samples u^r(·, t) on the periodic grid of [-L, L) with N points.
SolitonProfile soliton_on_grid(const SolitonData& data, double t, double L, int N, int map_sign = -1);

// Adds the -1/ϱ partner of each pole with c(-1/ϱ) = -c/ϱ².
SolitonData with_partners(const SolitonData& half);

}  // namespace ccch
