#include "ccch/deformation.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace ccch {

std::vector<int> Partition::delta_minus_lambda() const {
    std::vector<int> out;
    for (int n : delta)
        if (std::find(lambda.begin(), lambda.end(), n) == lambda.end()) out.push_back(n);
    return out;
}

Partition partition_spectrum(const DiscreteSpectrum& spec, double xi, double delta0) {
    if (!(delta0 > 0.0)) throw ConfigError("delta0 must be positive");
    Partition P;
    P.delta0 = delta0;
    for (std::size_t n = 0; n < spec.poles.size(); ++n) {
        double im = im_theta(spec.poles[n], xi);
        if (std::isfinite(delta0) && std::abs(std::abs(im) - delta0) <= 1e-12)
            throw NumericError("ThresholdCollision", "pole sits on the delta0 boundary");
        if (im < 0) P.nabla.push_back(int(n));
        if (im > 0) P.delta.push_back(int(n));
        if (std::abs(im) <= delta0)
            P.lambda.push_back(int(n));
        else
            P.rho0 = std::min(P.rho0, std::abs(im));
    }
    P.n_lambda = int(P.lambda.size());
    return P;
}

struct NuProfile::Spline {
    gsl_spline* sp = nullptr;
    double phi0 = 0.0;
    ~Spline() {
        if (sp) gsl_spline_free(sp);
    }
};

NuProfile NuProfile::zero() { return NuProfile(); }

NuProfile NuProfile::from_table(const SpectralTable& T) {
    const std::size_t n = T.phi.size();
    bool any = false;
    for (const cplx& r : T.r) any = any || std::abs(r) > 0.0;
    if (!any) return zero();

    std::vector<double> x(n + 1), y(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = T.phi[k];
        y[k] = std::log1p(std::norm(T.r[k]));
    }
    x[n] = T.phi[0] + 2.0 * kPi;
    y[n] = y[0];
    auto S = std::make_shared<Spline>();
    S->phi0 = x[0];
    S->sp = gsl_spline_alloc(gsl_interp_cspline_periodic, n + 1);
    gsl_spline_init(S->sp, x.data(), y.data(), n + 1);

    NuProfile P;
    P.spline_ = S;
    const double cap = T.alpha_cap > 0.0 ? T.alpha_cap : std::numeric_limits<double>::infinity();
    P.s_max_ = std::isfinite(cap) ? cap + std::hypot(cap, 1.0) : cap;
    return P;
}

double NuProfile::operator()(double s) const {
    if (!spline_) return 0.0;
    double as = std::abs(s);
    if (as > s_max_ || as * s_max_ < 1.0) return 0.0;
    double phi = 2.0 * std::atan(s);
    if (phi < spline_->phi0) phi += 2.0 * kPi;
    return -gsl_spline_eval(spline_->sp, phi, nullptr) / (2.0 * kPi);
}

SpectralTable table_from_function(const std::function<cplx(double)>& r, int nz, double alpha_cap) {
    SpectralTable T;
    T.phi = spectral_phi_grid(nz);
    T.alpha_cap = alpha_cap;
    for (double p : T.phi) {
        double z = std::tan(p / 2.0);
        cplx rz = std::abs(alpha_of(z)) > alpha_cap ? cplx(0.0) : r(z);
        double a = 1.0 / std::sqrt(1.0 + std::norm(rz));
        T.z.push_back(z);
        T.r.push_back(rz);
        T.a.push_back(a);
        T.b.push_back(rz * a);
    }
    return T;
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

// ∫_a^b f(s) ds in φ = 2 atan s, split at s_split when it is interior.
template <class F>
auto phi_integral(F&& f, double a, double b, double s_split) {
    auto g = [&](double phi) {
        double s = std::tan(0.5 * phi);
        return f(s) * (0.5 * (1.0 + s * s));
    };
    double pa = 2.0 * std::atan(a), pb = 2.0 * std::atan(b);
    double err = 0.0;
    if (s_split > a && s_split < b) {
        double ps = 2.0 * std::atan(s_split);
        return GK::integrate(g, pa, ps, 14, 1e-11, &err) + GK::integrate(g, ps, pb, 14, 1e-11, &err);
    }
    return GK::integrate(g, pa, pb, 14, 1e-11, &err);
}

// +1 when Σ(ξ) continues to the right of x, -1 when to the left, 0 if x is no endpoint.
int orientation(const std::vector<std::pair<double, double>>& sig, double x, double tol) {
    for (std::size_t k = 0; k < sig.size(); ++k) {
        if (std::abs(sig[k].first - x) <= tol) return 1;
        if (std::abs(sig[k].second - x) <= tol) return -1;
    }
    return 0;
}

std::vector<std::pair<double, double>> clip(const std::vector<std::pair<double, double>>& sig, double S) {
    std::vector<std::pair<double, double>> out;
    if (!std::isfinite(S)) return sig;
    const std::pair<double, double> band[2] = {{-S, -1.0 / S}, {1.0 / S, S}};
    for (auto [a, b] : sig)
        for (auto [lo, hi] : band) {
            double l = std::max(a, lo), h = std::min(b, hi);
            if (l < h) out.emplace_back(l, h);
        }
    return out;
}

}  // namespace

cplx ScalarFactor::cauchy(cplx z, int side) const {
    if (nu.is_zero()) return 0.0;
    const double zr = z.real();
    // Signed zero selects the boundary value of Log on the real axis.
    const double zi = z.imag() != 0.0 ? z.imag() : (side < 0 ? -0.0 : 0.0);
    cplx sum = 0.0;
    for (auto [a, b] : support) {
        if (zi == 0.0 && (zr == a || zr == b))
            throw NumericError("DomainError", "Cauchy integral evaluated at an endpoint of Sigma(xi)");
        double s0 = std::clamp(zr, a, b);
        double c = nu(s0);
        sum += c * (std::log(cplx(b - zr, -zi)) - std::log(cplx(a - zr, -zi)));
        sum += phi_integral([&](double s) { return (nu(s) - c) / (cplx(s) - z); }, a, b, s0);
    }
    return sum;
}

cplx ScalarFactor::delta(cplx z, int side) const {
    if (std::abs(z.imag()) < 1e-4) {
        // Near the axis use the one-sided limit from the half-plane of z.
        int sd = z.imag() > 0 ? 1 : z.imag() < 0 ? -1 : side;
        return std::exp(-kI * cauchy(cplx(z.real(), 0.0), sd));
    }
    return std::exp(-kI * cauchy(z));
}

cplx ScalarFactor::blaschke_product(cplx z) const {
    cplx p = 1.0;
    for (cplx r : blaschke) p *= (z - r) / (z - std::conj(r));
    return p;
}

cplx ScalarFactor::T(cplx z, int side) const {
    if (std::abs(z) > 1e12) return 1.0;
    return blaschke_product(z) * delta(z, side);
}

cplx ScalarFactor::T_local(std::size_t j, cplx z) const {
    const double e = eta[j];
    return T_j[j] * std::exp(-kI * e * nu_j[j] * std::log(e * (z - points[j])));
}

cplx sigma0(const NuProfile& nu, const PhasePortrait& portrait) {
    if (nu.is_zero()) return 0.0;
    cplx sum = 0.0;
    for (auto [a, b] : clip(sigma_intervals(portrait), nu.s_max()))
        sum += phi_integral([&](double s) { return nu(s) / ((s - kI) * (s - kI)); }, a, b, NAN);
    // (1/2πi) ∫ log(1+|r|²)/(s-i)² = i ∫ ν/(s-i)²
    return kI * sum;
}

ScalarFactor build_scalar_factor(const NuProfile& nu, const DiscreteSpectrum& spec, const Partition& part,
                                 const PhasePortrait& portrait) {
    ScalarFactor F;
    F.xi = portrait.xi;
    F.region = portrait.region;
    F.sigma_xi = sigma_intervals(portrait);
    F.nu = nu;
    F.support = clip(F.sigma_xi, nu.s_max());
    for (int n : part.delta_minus_lambda()) F.blaschke.push_back(spec.poles[std::size_t(n)]);
    F.T_at_i = F.T(kI);
    F.Sigma0 = sigma0(nu, portrait);

    F.points = portrait.points;
    for (std::size_t j = 0; j < F.points.size(); ++j) {
        const double xj = F.points[j];
        const double tol = 1e-12 * std::max(1.0, std::abs(xj));
        const int sigma = orientation(F.sigma_xi, xj, tol);
        if (sigma == 0) throw std::logic_error("stationary point is not an endpoint of Sigma(xi)");
        if (portrait.eta_signs[j] != -sigma) throw std::logic_error("eta sign disagrees with Sigma(xi) orientation");
        F.eta.push_back(-sigma);

        const double nj = nu(xj);
        double beta = 0.0;
        if (!nu.is_zero()) {
            for (auto [a, b] : F.support) {
                bool abuts = std::abs(a - xj) <= tol || std::abs(b - xj) <= tol;
                if (!abuts) {
                    beta -= phi_integral([&](double s) { return nu(s) / (s - xj); }, a, b, NAN);
                    continue;
                }
                // The log singularity of the abutting interval cancels against η log(η(z-ξ_j)) ν(ξ_j).
                beta -= phi_integral([&](double s) { return (nu(s) - nj) / (s - xj); }, a, b, NAN);
                beta += sigma > 0 ? -nj * std::log(b - xj) : nj * std::log(xj - a);
            }
        }
        F.nu_j.push_back(nj);
        F.beta_j.push_back(beta);
        F.T_j.push_back(F.blaschke_product(xj) * std::exp(kI * beta));
    }
    return F;
}

}  // namespace ccch
