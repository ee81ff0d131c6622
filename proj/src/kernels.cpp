#include "shs/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace shs {

namespace {

// 1D flux divergence along a contiguous line.
inline void laplacian_line(const double* u, double* out, int n, double inv_h2, bool periodic) {
    // interior
    for (int i = 1; i + 1 < n; ++i) {
        out[i] += ((u[i + 1] - u[i]) - (u[i] - u[i - 1])) * inv_h2;
    }
    if (periodic) {
        out[0] += ((u[1] - u[0]) - (u[0] - u[n - 1])) * inv_h2;
        out[n - 1] += ((u[0] - u[n - 1]) - (u[n - 1] - u[n - 2])) * inv_h2;
    } else {
        out[0] += (u[1] - u[0]) * inv_h2;
        out[n - 1] += -(u[n - 1] - u[n - 2]) * inv_h2;
    }
}

}  // namespace

void apply_laplacian(const Grid& g, const Field& u, Field& out, exec::Policy policy) {
    const double inv_h2 = 1.0 / (g.h * g.h);
    const bool periodic = g.boundary == Boundary::Periodic;
    out.assign(u.size(), 0.0);
    if (g.dim == 1) {
        laplacian_line(u.data(), out.data(), g.nx, inv_h2, periodic);
        return;
    }
    const int nx = g.nx, ny = g.ny;
    // x-direction: one contiguous line per row
    exec::parallel_for(ny, policy, [&](std::ptrdiff_t iy) {
        laplacian_line(u.data() + iy * nx, out.data() + iy * nx, nx, inv_h2, periodic);
    });
    // y-direction: strided, accumulate per row to keep writes row-local
    exec::parallel_for(ny, policy, [&](std::ptrdiff_t iy) {
        const std::ptrdiff_t up = (iy + 1 < ny) ? iy + 1 : (periodic ? 0 : iy);
        const std::ptrdiff_t dn = (iy > 0) ? iy - 1 : (periodic ? ny - 1 : iy);
        const double* row = u.data() + iy * nx;
        const double* row_up = u.data() + up * nx;
        const double* row_dn = u.data() + dn * nx;
        double* o = out.data() + iy * nx;
        for (int ix = 0; ix < nx; ++ix) {
            // reflected ghost rows reproduce zero-flux faces (row_up/dn == row there)
            o[ix] += ((row_up[ix] - row[ix]) - (row[ix] - row_dn[ix])) * inv_h2;
        }
    });
}

void add_scaled_laplacian(const Grid& g, const Field& u, const Field& u2, double scale, Field& out,
                          exec::Policy policy) {
    Field lap;
    apply_laplacian(g, u2, lap, policy);
    out.resize(u.size());
    exec::parallel_for(static_cast<std::ptrdiff_t>(u.size()), policy, [&](std::ptrdiff_t i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = u[k] + scale * lap[k];
    });
}

TridiagFactor::TridiagFactor(std::vector<double> a, std::vector<double> b, std::vector<double> c)
    : sub(std::move(a)), diag(std::move(b)), super(std::move(c)) {
    const std::size_t n = diag.size();
    if (sub.size() != n || super.size() != n)
        throw std::invalid_argument("tridiag: coefficient arrays must have equal length");
    cp.resize(n);
    inv_denom.resize(n);
    double denom = diag[0];
    if (denom == 0.0) throw std::runtime_error("tridiag: zero pivot");
    inv_denom[0] = 1.0 / denom;
    cp[0] = super[0] * inv_denom[0];
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - sub[i] * cp[i - 1];
        if (denom == 0.0) throw std::runtime_error("tridiag: zero pivot");
        inv_denom[i] = 1.0 / denom;
        cp[i] = super[i] * inv_denom[i];
    }
}

void TridiagFactor::solve(const double* rhs, double* x) const {
    const std::size_t n = diag.size();
    x[0] = rhs[0] * inv_denom[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = (rhs[i] - sub[i] * x[i - 1]) * inv_denom[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
}

CyclicTridiagFactor::CyclicTridiagFactor(const std::vector<double>& a, const std::vector<double>& b,
                                         const std::vector<double>& c) {
    const std::size_t n = b.size();
    if (n < 3) throw std::invalid_argument("cyclic tridiag: need at least 3 unknowns");
    corner_lo = a[0];       // couples x[0] to x[n-1]
    corner_hi = c[n - 1];   // couples x[n-1] to x[0]
    gamma = -b[0];
    std::vector<double> bm = b;
    bm[0] = b[0] - gamma;
    bm[n - 1] = b[n - 1] - corner_lo * corner_hi / gamma;
    core = TridiagFactor(a, bm, c);
    std::vector<double> uvec(n, 0.0);
    uvec[0] = gamma;
    uvec[n - 1] = corner_hi;
    z.resize(n);
    core.solve(uvec.data(), z.data());
    denom = 1.0 + z[0] + corner_lo * z[n - 1] / gamma;
    if (denom == 0.0) throw std::runtime_error("cyclic tridiag: singular correction");
}

void CyclicTridiagFactor::solve(const double* rhs, double* x) const {
    const std::size_t n = core.size();
    core.solve(rhs, x);
    const double fact = (x[0] + corner_lo * x[n - 1] / gamma) / denom;
    for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
}

Diffusion1D::Diffusion1D(const Grid& g, double theta_dt) : grid(g), coeff(theta_dt / (g.h * g.h)) {
    const std::size_t n = static_cast<std::size_t>(g.nx);
    std::vector<double> a(n, -coeff), b(n, 1.0 + 2.0 * coeff), c(n, -coeff);
    if (g.boundary == Boundary::Neumann) {
        // zero-flux closure: boundary cells see a single face
        b[0] = 1.0 + coeff;
        b[n - 1] = 1.0 + coeff;
        a[0] = 0.0;
        c[n - 1] = 0.0;
        neumann = TridiagFactor(std::move(a), std::move(b), std::move(c));
    } else {
        periodic = CyclicTridiagFactor(a, b, c);
    }
}

void Diffusion1D::solve(const Field& rhs, Field& x) const {
    x.resize(rhs.size());
    if (grid.boundary == Boundary::Neumann)
        neumann.solve(rhs.data(), x.data());
    else
        periodic.solve(rhs.data(), x.data());
}

CgResult solve_helmholtz_cg(const Grid& g, double theta_dt, const Field& b, Field& x,
                            double rel_tol, int max_iter, exec::Policy policy) {
    const std::ptrdiff_t n = g.cells();
    if (max_iter <= 0) max_iter = static_cast<int>(4 * n);
    x.assign(b.size(), 0.0);
    Field r = b, p = b, ap;
    const double bnorm2 = exec::deterministic_dot(b, b, policy);
    CgResult res;
    if (bnorm2 == 0.0) {
        res.converged = true;
        return res;
    }
    double rr = bnorm2;
    for (int it = 0; it < max_iter; ++it) {
        // ap = (I - theta_dt * Lap) p
        add_scaled_laplacian(g, p, p, -theta_dt, ap, policy);
        const double pap = exec::deterministic_dot(p, ap, policy);
        const double alpha = rr / pap;
        exec::parallel_for(n, policy, [&](std::ptrdiff_t i) {
            const auto k = static_cast<std::size_t>(i);
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        });
        const double rr_new = exec::deterministic_dot(r, r, policy);
        res.iterations = it + 1;
        res.relative_residual = std::sqrt(rr_new / bnorm2);
        if (res.relative_residual <= rel_tol) {
            res.converged = true;
            return res;
        }
        const double beta = rr_new / rr;
        rr = rr_new;
        exec::parallel_for(n, policy, [&](std::ptrdiff_t i) {
            const auto k = static_cast<std::size_t>(i);
            p[k] = r[k] + beta * p[k];
        });
    }
    return res;
}

DiffusionSolver::DiffusionSolver(const Grid& g, double theta_dt_, double cg_tol_)
    : grid(g), theta_dt(theta_dt_), cg_tol(cg_tol_) {
    if (g.dim == 1) direct1d = Diffusion1D(g, theta_dt_);
}

CgResult DiffusionSolver::solve(const Field& rhs, Field& out, exec::Policy policy) const {
    if (grid.dim == 1) {
        direct1d.solve(rhs, out);
        CgResult r;
        r.converged = true;
        r.iterations = 1;
        return r;
    }
    return solve_helmholtz_cg(grid, theta_dt, rhs, out, cg_tol, 0, policy);
}

}  // namespace shs
