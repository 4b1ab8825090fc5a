#pragma once
#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ccch {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Numeric failures carry a short machine-readable kind (BoundaryXi, DecayViolation, ...).
class NumericError : public std::runtime_error {
public:
    NumericError(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Mat2 sigma3() {
    Mat2 s;
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

inline Mat2 sigma2() {
    Mat2 s;
    s << 0.0, -kI, kI, 0.0;
    return s;
}

inline Mat2 mat2(cplx a, cplx b, cplx c, cplx d) {
    Mat2 m;
    m << a, b, c, d;
    return m;
}

inline double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace ccch
