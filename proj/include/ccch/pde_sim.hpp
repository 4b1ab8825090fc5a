#pragma once
#include <memory>
#include <vector>

#include "ccch/common.hpp"

namespace ccch {

struct FieldSnapshot {
    double t = 0.0;
    double L = 0.0;
    std::vector<double> x;
    std::vector<cplx> u, m;
};

struct Trajectory {
    std::vector<FieldSnapshot> snapshots;  // initial state first, then each requested time
    std::vector<cplx> g;                   // phase functional at each snapshot
    double max_edge_ratio = 0.0;           // max over steps of max(|u(±L)|)/max|u|
    int steps = 0;
    double dt = 0.0;
};

// Pseudospectral solver for m_t = u_x + ½[m(|u|²-|u_x|²)]_x - ½m(u ū_x - u_x ū), m = u - u_xx,
// on the periodic grid of [-L, L) with N points (N a power of two).
class Simulator {
public:
    Simulator(double L, int N);
    ~Simulator();
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    double L() const { return L_; }
    int N() const { return N_; }
    double dx() const { return 2.0 * L_ / N_; }

    std::vector<cplx> invert_helmholtz(const std::vector<cplx>& m) const;
    std::vector<cplx> apply_helmholtz(const std::vector<cplx>& u) const;  // u - u_xx
    std::vector<cplx> rhs(const std::vector<cplx>& m) const;
    // One classical RK4 step of size dt, no stability check.
    std::vector<cplx> step(const std::vector<cplx>& m, double dt) const;

    FieldSnapshot snapshot_from_u(const std::vector<cplx>& u, double t = 0.0) const;

    // Integrates to each time in save_times (ascending, > initial t). dt must be <= 0.25 dx.
    // Throws BlowupDetected when max|u| exceeds 10x its initial value and BoundaryContamination
    // when the edge ratio passes edge_tolerance.
    Trajectory evolve(const FieldSnapshot& init, double dt, const std::vector<double>& save_times) const;

    double edge_tolerance = 1e-8;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double L_;
    int N_;
};

// ∫ (m_x m̄ - m m̄_x) / (4d(d+1)) dx with d = √(1+|m|²), periodic trapezoid.
cplx phase_functional(const std::vector<cplx>& m, double L);

}  // namespace ccch
