#include "ccch/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccch {

namespace {

void check_domain(cplx z) {
    if (std::abs(z) < 1e-12 || std::abs(z - kI) < 1e-12 || std::abs(z + kI) < 1e-12)
        throw NumericError("DomainError", "theta undefined at z in {0, ±i}");
}

constexpr double kBoundaryTol = 1e-9;

}  // namespace

const char* region_name(Region r) {
    switch (r) {
        case Region::LeftNoPoint: return "LeftNoPoint";
        case Region::FourPoints: return "FourPoints";
        case Region::EightPoints: return "EightPoints";
        case Region::RightNoPoint: return "RightNoPoint";
    }
    return "?";
}

Region classify_region(double xi) {
    if (xi < -1.0) return Region::LeftNoPoint;
    if (xi <= 0.0) return Region::FourPoints;
    if (xi < 0.125) return Region::EightPoints;
    return Region::RightNoPoint;
}

cplx theta(cplx z, double xi) {
    check_domain(z);
    cplx w = z - 1.0 / z, s = z + 1.0 / z;
    return -0.25 * w * (xi + 4.0 / (s * s));
}

double im_theta(cplx z, double xi) {
    check_domain(z);
    double a = z.real(), b = z.imag();
    double m2 = a * a + b * b;
    double num = -m2 * m2 * m2 + 2.0 * m2 * m2 + (3.0 * a * a - b * b) * (1.0 + m2) + 2.0 * m2 - 1.0;
    double q = (a * a - b * b + 1.0) * (a * a - b * b + 1.0) + 4.0 * a * a * b * b;
    return b * (-0.25 * xi * (1.0 + 1.0 / m2) - num / (q * q));
}

cplx theta_prime(cplx z, double xi) {
    check_domain(z);
    cplx z2 = z * z, q = z2 + 1.0;
    return -0.25 * xi * (1.0 + 1.0 / z2) - (-z2 * z2 + 6.0 * z2 - 1.0) / (q * q * q);
}

double theta_prime(double z, double xi) { return theta_prime(cplx(z, 0.0), xi).real(); }

double theta_second(double z, double xi) {
    double z2 = z * z, q = z2 + 1.0;
    double q4 = q * q * q * q;
    return xi / (2.0 * z2 * z) - (2.0 * z2 * z2 * z - 28.0 * z2 * z + 18.0 * z) / q4;
}

cplx two_i_t_theta(cplx z, double y, double t) {
    check_domain(z);
    cplx w = z - 1.0 / z, s = z + 1.0 / z;
    return 2.0 * kI * (-0.25 * w * (y + 4.0 * t / (s * s)));
}

PhasePortrait stationary_points(double xi) {
    for (double c : {-1.0, 0.0, 0.125})
        if (std::abs(xi - c) < kBoundaryTol)
            throw NumericError("BoundaryXi", "xi within 1e-9 of a critical value");

    PhasePortrait p;
    p.xi = xi;
    p.region = classify_region(xi);
    if (p.region == Region::LeftNoPoint || p.region == Region::RightNoPoint) return p;

    // Log-spaced scan of (0, ∞); outer roots sit near 2/sqrt(ξ) for small ξ.
    double hi = std::max(1e3, 10.0 / std::sqrt(std::abs(xi)));
    double lo = 1.0 / hi;
    const int n = 10000;
    std::vector<double> pos;
    double a = lo, fa = theta_prime(a, xi);
    for (int k = 1; k <= n; ++k) {
        double b = lo * std::pow(hi / lo, double(k) / n);
        double fb = theta_prime(b, xi);
        if ((fa < 0) != (fb < 0)) {
            double l = a, r = b, fl = fa;
            while (r - l > 1e-15 * r) {
                double m = 0.5 * (l + r), fm = theta_prime(m, xi);
                if ((fm < 0) == (fl < 0)) {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            pos.push_back(0.5 * (l + r));
        }
        a = b;
        fa = fb;
    }
    // Closure under z -> 1/z: pair the k-th smallest with the k-th largest.
    const std::size_t m = pos.size();
    std::vector<double> sym(m);
    for (std::size_t k = 0; k < m; ++k) sym[k] = std::sqrt(pos[k] / pos[m - 1 - k]);
    std::vector<double> all;
    for (double v : sym) {
        all.push_back(v);
        all.push_back(-v);
    }
    std::sort(all.begin(), all.end(), std::greater<>());
    const std::size_t expect = p.region == Region::FourPoints ? 4 : 8;
    if (all.size() != expect)
        throw NumericError("RootCount", "found " + std::to_string(all.size()) + " stationary points");
    p.points = all;
    for (std::size_t j = 0; j < all.size(); ++j) {
        p.theta_second.push_back(theta_second(all[j], xi));
        int jj = int(j) + 1;
        int parity = (p.region == Region::EightPoints) ? jj + 1 : jj;
        p.eta_signs.push_back(parity % 2 == 0 ? 1 : -1);
    }
    return p;
}

std::vector<std::pair<double, double>> sigma_intervals(const PhasePortrait& p) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cuts(p.points.rbegin(), p.points.rend());
    if (p.region == Region::LeftNoPoint) return {{-inf, inf}};
    if (p.region == Region::RightNoPoint) return {};
    std::vector<double> edges{-inf};
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(inf);
    std::vector<std::pair<double, double>> out;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        double l = edges[k], r = edges[k + 1];
        double probe;
        if (std::isinf(l)) probe = r - 1.0 - std::abs(r);
        else if (std::isinf(r)) probe = l + 1.0 + std::abs(l);
        else probe = 0.5 * (l + r);
        if (std::abs(probe) < 1e-300) probe = 0.25 * r;
        if (theta_prime(probe, p.xi) > 0) out.emplace_back(l, r);
    }
    return out;
}

std::vector<double> stationary_points_closed_form(double xi) {
    // ξ p^2 + (8ξ - 4) p + 16ξ + 16 = 0
    std::vector<double> ps;
    double A = xi, B = 8.0 * xi - 4.0, C = 16.0 * xi + 16.0;
    if (std::abs(A) < 1e-300) {
        ps.push_back(-C / B);
    } else {
        double disc = B * B - 4.0 * A * C;
        if (disc < 0) return {};
        double sq = std::sqrt(disc);
        double q = -0.5 * (B + std::copysign(sq, B));
        ps.push_back(q / A);
        ps.push_back(C / q);
    }
    std::vector<double> z;
    for (double pv : ps) {
        if (pv < 0) continue;
        double w = std::sqrt(pv);
        for (double ww : {w, -w}) {
            double s = std::sqrt(ww * ww + 4.0);
            z.push_back(0.5 * (ww + s));
            z.push_back(0.5 * (ww - s));
        }
    }
    std::sort(z.begin(), z.end(), std::greater<>());
    z.erase(std::unique(z.begin(), z.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }), z.end());
    return z;
}

}  // namespace ccch
