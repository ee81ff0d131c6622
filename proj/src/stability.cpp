#include "shs/stability.hpp"

#include <algorithm>
#include <cmath>

namespace shs::stab {

Complex branch_sqrt(Complex lambda, double c) {
    const Complex root = std::sqrt(Complex(c * c / 4.0, 0.0) + lambda);
    // principal branch; admissible iff Re(root) > c/2 (equality only at lambda = 0)
    if (std::abs(lambda) > 1e-14 && !(root.real() > c / 2.0 - 1e-12))
        throw BranchError("dispersion: branch condition Re sqrt(c^2/4+lambda) > c/2 violated");
    return root;
}

Complex dispersion_residual(Complex lambda, double c) {
    const Complex root = branch_sqrt(lambda, c);
    // rationalized form of lambda - c*(root - c/2): exact for the principal
    // branch and free of the small-lambda cancellation
    const Complex denom = root + c / 2.0;
    return lambda * lambda / (denom * denom);
}

namespace {

Complex dispersion_derivative(Complex lambda, double c) {
    const Complex root = std::sqrt(Complex(c * c / 4.0, 0.0) + lambda);
    return Complex(1.0, 0.0) - c / (2.0 * root);
}

}  // namespace

RootSearchReport find_roots(const DispersionProblem& p, int grid_density) {
    if (grid_density < 32)
        throw std::invalid_argument("find_roots: grid density must be at least 32 per axis");
    if (!(p.re_lo <= p.re_hi && p.im_lo <= p.im_hi))
        throw std::invalid_argument("find_roots: empty search region");
    RootSearchReport rep;
    const int nr = grid_density, ni = 2 * grid_density;
    std::vector<Complex> found;
    for (int i = 0; i <= nr; ++i) {
        for (int j = 0; j <= ni; ++j) {
            Complex lam(p.re_lo + (p.re_hi - p.re_lo) * i / nr,
                        p.im_lo + (p.im_hi - p.im_lo) * j / ni);
            ++rep.seeds;
            bool ok = false;
            for (int it = 0; it < 120; ++it) {
                Complex g, dg;
                try {
                    g = dispersion_residual(lam, p.c);
                    dg = dispersion_derivative(lam, p.c);
                } catch (const BranchError&) {
                    break;
                }
                if (std::abs(dg) < 1e-300) break;
                const Complex step = g / dg;
                lam -= step;
                if (std::abs(step) < 1e-13 && std::abs(g) < 1e-10) {
                    ok = true;
                    break;
                }
                if (std::abs(lam) > 1e6) break;
            }
            if (!ok) {
                ++rep.failed;
                continue;
            }
            // polish assuming a possible double root (multiplicity-2 Newton)
            for (int it = 0; it < 40; ++it) {
                Complex g, dg;
                try {
                    g = dispersion_residual(lam, p.c);
                    dg = dispersion_derivative(lam, p.c);
                } catch (const BranchError&) {
                    break;
                }
                if (std::abs(g) < 1e-30 || std::abs(dg) < 1e-300) break;
                lam -= 2.0 * g / dg;
            }
            ++rep.converged;
            // keep only roots inside the requested region
            if (lam.real() < p.re_lo - 1e-9 || lam.real() > p.re_hi + 1e-9 ||
                lam.imag() < p.im_lo - 1e-9 || lam.imag() > p.im_hi + 1e-9)
                continue;
            found.push_back(lam);
        }
    }
    // deduplicate converged points into representative roots
    std::vector<Root> roots;
    for (const Complex& lam : found) {
        bool merged = false;
        for (Root& r : roots) {
            if (std::abs(r.lambda - lam) < 1e-6) {
                if (std::abs(dispersion_residual(lam, p.c)) < r.residual) {
                    r.lambda = lam;
                    r.residual = std::abs(dispersion_residual(lam, p.c));
                }
                merged = true;
                break;
            }
        }
        if (!merged) {
            Root r;
            r.lambda = lam;
            r.residual = std::abs(dispersion_residual(lam, p.c));
            roots.push_back(r);
        }
    }
    // multiplicity estimate from the Newton contraction ratio at the root
    for (Root& r : roots) {
        const double d = 1e-5;
        const Complex g1 = dispersion_residual(r.lambda + d, p.c);
        const Complex g2 = dispersion_residual(r.lambda + 2.0 * d, p.c);
        const double ratio = std::abs(g2) / std::max(std::abs(g1), 1e-300);
        r.multiplicity = std::max(1, static_cast<int>(std::lround(std::log2(ratio))));
    }
    rep.roots = std::move(roots);
    return rep;
}

Complex eigenfunction_W(double y, Complex lambda, double c) {
    if (std::abs(lambda) < 1e-14)
        throw SingularParameterError(
            "eigenfunction_W: lambda = 0 is singular here; use the regularized residual");
    const Complex root = branch_sqrt(lambda, c);
    const Complex mu_minus = Complex(-c / 2.0, 0.0) - root;
    return -(c / lambda) * (std::exp(Complex(-c * y, 0.0)) - std::exp(mu_minus * y));
}

OdeResidualReport verify_ode(Complex lambda, double c, double L, double h) {
    if (std::abs(lambda) < 1e-14)
        throw SingularParameterError("verify_ode: lambda = 0 is singular for W");
    if (!(L >= 10.0 / c)) throw std::invalid_argument("verify_ode: need L >= 10/c");
    if (!(h > 0.0 && h < L / 8.0)) throw std::invalid_argument("verify_ode: bad step h");
    const long n = std::lround(L / h);
    OdeResidualReport rep;
    rep.h = h;
    double sum2 = 0.0;
    long count = 0;
    Complex wm = eigenfunction_W(0.0, lambda, c);
    Complex w0 = eigenfunction_W(h, lambda, c);
    for (long i = 1; i + 1 < n; ++i) {
        const double y = i * h;
        const Complex wp = eigenfunction_W(y + h, lambda, c);
        const Complex r = (wp - 2.0 * w0 + wm) / (h * h) + c * (wp - wm) / (2.0 * h) -
                          lambda * w0 - Complex(c * std::exp(-c * y), 0.0);
        rep.linf = std::max(rep.linf, std::abs(r));
        sum2 += std::norm(r);
        ++count;
        wm = w0;
        w0 = wp;
    }
    rep.l2 = count ? std::sqrt(sum2 / count) : 0.0;
    return rep;
}

}  // namespace shs::stab
