#pragma once
#include <functional>
#include <memory>
#include <vector>

#include "ccch/common.hpp"
#include "ccch/deformation.hpp"
#include "ccch/phase.hpp"
#include "ccch/scattering.hpp"
#include "ccch/soliton.hpp"

namespace ccch {

// r(s) for real s by periodic cubic splines of Re r and Im r in φ = 2 atan s.
class ReflectionInterpolant {
public:
    explicit ReflectionInterpolant(const SpectralTable& table);
    cplx operator()(double s) const;

private:
    struct Splines;
    std::shared_ptr<const Splines> sp_;
};

// Which H_k / E feeds the leading term. Literal: the published closed forms and residue
// displays. Derived: the local model re-derived for these conventions (see README).
enum class Convention { Derived, Literal };

struct LocalPoint {
    double xi_k = 0.0;
    double theta2 = 0.0;
    int eta = 0;
    bool parity_a = false;  // (ξ > 0, k odd) or (ξ < 0, k even)
    double nu = 0.0;
    cplx r_at_k = 0.0, T_k = 1.0;

    // Literal closed forms.
    cplx r_scaled = 0.0, beta12 = 0.0, beta21 = 0.0;
    Mat2 H = Mat2::Zero();

    // Local model solved in the scale ζ = √(2|θ″|t)(z - ξ_k).
    cplx r_scaled_derived = 0.0, beta12_derived = 0.0, beta21_derived = 0.0;
    Mat2 M1_derived = Mat2::Zero();  // ζ⁻¹ coefficient of Ψ
    Mat2 H_derived = Mat2::Zero();
};

struct LocalModelData {
    double xi = 0.0, t = 0.0;
    std::vector<LocalPoint> points;
};

LocalModelData local_model_data(const std::function<cplx(double)>& r, const ScalarFactor& F,
                                const PhasePortrait& portrait, double t);
LocalModelData local_model_data(const SpectralTable& table, const ScalarFactor& F, const PhasePortrait& portrait,
                                double t);

// Angle reduced into the branch window of the region: (-π, π] for ξ >= 0, [0, 2π) for ξ < 0.
double branch_arg(cplx z, double xi);

// Model matrices of the parabolic-cylinder problem on either side of the real ρ axis.
// Literal: the published four displays, with xi_positive selecting the ξ ∈ (0,1/8) pair.
Mat2 psi_literal(cplx rho, double nu, cplx beta12, cplx beta21, bool xi_positive, bool upper);
// Derived: jump [[1+|r|², r̄], [r, 1]] and asymptotics (I + M1/ζ)(-ζ)^{-iνσ3}e^{iζ²σ3/4} for θ″ > 0,
// (I + M1/ζ) ζ^{iνσ3}e^{-iζ²σ3/4} for θ″ < 0. b is the derived coefficient:
// M1 = sign(θ″)·[[0, i b], [i b̄, 0]].
Mat2 psi_derived(cplx zeta, double nu, cplx b, int theta2_sign, bool upper);
// Closed form of b for given r and sign θ″.
cplx derived_b(cplx r, int theta2_sign);

struct PsiJumpCheck {
    double literal_positive = 0.0, literal_negative = 0.0;  // max |Ψ₊ - Ψ₋V| over the probes
    double derived_plus = 0.0, derived_minus = 0.0;
};
PsiJumpCheck check_psi_jump(cplx r, const std::vector<double>& rhos);

struct ErrorCoefficients {
    Mat2 E0 = Mat2::Zero(), E1 = Mat2::Zero();
};

// Literal: E0 = Σ (ξ_k - i)⁻¹ M⁻¹H_k M, E1 = -Σ (ξ_k - i)⁻² M⁻¹H_k M with M = M(ξ_k).
// Derived: E0 = Σ M H M⁻¹/(i - ξ_k), E1 = -Σ M H M⁻¹/(i - ξ_k)².
// Throws SingularM when |det M(ξ_k)| < 1e-12.
ErrorCoefficients error_coefficients(const LocalModelData& local, const std::vector<Mat2>& M_at_points,
                                     Convention conv = Convention::Literal);
// The same sums by trapezoid quadrature on circles |s - ξ_k| = radius, for M analytic there.
ErrorCoefficients error_coefficients_quadrature(const LocalModelData& local,
                                                const std::function<Mat2(cplx)>& M, double radius = 0.1,
                                                int nodes = 256, Convention conv = Convention::Literal);

struct KCoefficients {
    cplx k11 = 0.0, k12 = 0.0;
};
// Term-by-term assembly of the published k11 and k12 displays.
KCoefficients k_coefficients(const ErrorCoefficients& E, cplx Sigma0, const Mat2& M_at_i, const Mat2& M1_at_i);

// Independent assembly: first-order change in t^{-1/2} of the reconstruction functional
// -[M'12/M22·conj(M11)/M11 + conj(M'21/M11)·M22/conj(M22)] under
// M(i) -> (I + sE0)M, M'(i) -> sE1 M + (I + sE0)(M' + MΣ0σ3), with the T(i) phase removed.
cplx linearized_k11(const ErrorCoefficients& E, cplx Sigma0, const Mat2& M_at_i, const Mat2& M1_at_i);

struct AsymptoticInputs {
    std::function<cplx(double)> r;  // reflection coefficient on ℝ
    NuProfile nu;
    DiscreteSpectrum spectrum;
    cplx g = 0.0;  // phase constant of the datum
    double delta0 = 0.1;
};

struct AsymptoticTerm {
    double xi = 0.0;
    Region region = Region::LeftNoPoint;
    cplx T_at_i = 1.0, Sigma0 = 0.0;
    LocalModelData local;
    ErrorCoefficients E;  // in the requested convention
    KCoefficients k;      // literal displays fed with E
    SolitonData solitons;  // Λ-poles with c T²(ϱ)
};

struct LeadingTerm {
    double x = 0.0;
    cplx u = 0.0;
    double order = 0.0;  // -3/4 with stationary points, -1 + 2ε (ε = 1/4) without
    AsymptoticTerm term;
};

// Leading-order u at (y, t). Throws BoundaryXi near ξ ∈ {-1, 0, 1/8}.
LeadingTerm u_leading(double y, double t, const AsymptoticInputs& in, Convention conv = Convention::Derived);

}  // namespace ccch
