#pragma once

#include <vector>

#include "shs/exec.hpp"
#include "shs/grid.hpp"

namespace shs {

// Discrete Laplacian in flux form: out[i] = (sum of face fluxes)/h.
// Neumann faces carry zero flux (ghost-cell even reflection), periodic faces
// wrap. Writing the update as a flux divergence makes sum(out)*h^d telescope,
// which keeps the conservation audit independent of any linear-solver residual.
void apply_laplacian(const Grid& g, const Field& u, Field& out,
                     exec::Policy policy = exec::default_policy());

// out = u + scale * Lap(u2)
void add_scaled_laplacian(const Grid& g, const Field& u, const Field& u2, double scale, Field& out,
                          exec::Policy policy = exec::default_policy());

// Tridiagonal system a_i x_{i-1} + b_i x_i + c_i x_{i+1} = r_i, Thomas algorithm.
// Factorization is reusable across right-hand sides (batched line solves).
struct TridiagFactor {
    std::vector<double> sub, diag, super;  // original coefficients
    std::vector<double> cp;                // forward-eliminated super-diagonal
    std::vector<double> inv_denom;         // 1/(b_i - a_i*cp_{i-1})

    TridiagFactor() = default;
    TridiagFactor(std::vector<double> a, std::vector<double> b, std::vector<double> c);
    std::size_t size() const { return diag.size(); }
    void solve(const double* rhs, double* x) const;
    void solve_inplace(std::vector<double>& rx) const { solve(rx.data(), rx.data()); }
};

// Cyclic (periodic) tridiagonal via Sherman-Morrison on top of Thomas.
struct CyclicTridiagFactor {
    TridiagFactor core;
    std::vector<double> z;  // core^{-1} * correction vector
    double corner_lo = 0.0, corner_hi = 0.0;
    double denom = 1.0;
    double gamma = 0.0;

    CyclicTridiagFactor() = default;
    // coefficients of the full cyclic system (sub[0] couples to last cell,
    // super[n-1] couples to first cell)
    CyclicTridiagFactor(const std::vector<double>& a, const std::vector<double>& b,
                        const std::vector<double>& c);
    std::size_t size() const { return core.size() + 0; }
    void solve(const double* rhs, double* x) const;
};

// Backward-Euler / Crank-Nicolson diffusion operator (I - theta*dt*Lap) for the
// 1D grid, as a reusable factorization.
struct Diffusion1D {
    Grid grid;
    double coeff = 0.0;  // theta*dt/h^2
    TridiagFactor neumann;
    CyclicTridiagFactor periodic;

    Diffusion1D() = default;
    Diffusion1D(const Grid& g, double theta_dt);
    void solve(const Field& rhs, Field& x) const;
};

// Matrix-free conjugate gradient for (I - theta*dt*Lap) x = b on 1D/2D grids.
// All inner products use deterministic fixed-block sums.
struct CgResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

CgResult solve_helmholtz_cg(const Grid& g, double theta_dt, const Field& b, Field& x,
                            double rel_tol = 1e-13, int max_iter = 0,
                            exec::Policy policy = exec::default_policy());

// Implicit diffusion step dispatch: 1D direct tridiagonal, 2D CG.
// Solves (I - theta*dt*Lap) out = rhs.
struct DiffusionSolver {
    Grid grid;
    double theta_dt = 0.0;
    Diffusion1D direct1d;
    double cg_tol = 1e-13;

    DiffusionSolver() = default;
    DiffusionSolver(const Grid& g, double theta_dt_, double cg_tol_ = 1e-13);
    CgResult solve(const Field& rhs, Field& out, exec::Policy policy = exec::default_policy()) const;
};

}  // namespace shs
