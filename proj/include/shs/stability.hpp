#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace shs::stab {

using Complex = std::complex<double>;

class BranchError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class SingularParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Search setup for modes of the linearized front problem. Admissible lambda
// live in the closed right half-plane; the square root is the principal branch
// and must satisfy Re sqrt(c^2/4 + lambda) > c/2 (checked per evaluation).
struct DispersionProblem {
    double c = 1.0;
    double re_lo = 0.0, re_hi = 8.0;
    double im_lo = -8.0, im_hi = 8.0;
};

// Branch-checked sqrt(c^2/4 + lambda).
Complex branch_sqrt(Complex lambda, double c);

// Regularized dispersion residual G(lambda) = lambda - c*(sqrt(c^2/4+lambda) - c/2).
// G = lambda * (1 - (c/lambda)(-c - mu_minus)), finite at lambda = 0 with G(0) = 0.
Complex dispersion_residual(Complex lambda, double c);

struct Root {
    Complex lambda;
    int multiplicity = 1;
    double residual = 0.0;
};

struct RootSearchReport {
    std::vector<Root> roots;
    long seeds = 0;
    long converged = 0;
    long failed = 0;  // Newton non-convergence from a seed (recorded, not fatal)
};

RootSearchReport find_roots(const DispersionProblem& problem, int grid_density = 32);

// Decaying eigenfunction W(y) = -(c/lambda)(exp(-cy) - exp(mu_- y)); singular
// at lambda = 0 (use the regularized residual there instead).
Complex eigenfunction_W(double y, Complex lambda, double c);

struct OdeResidualReport {
    double linf = 0.0;
    double l2 = 0.0;
    double h = 0.0;
};

// Second-order finite-difference residual of W'' + c W' - lambda W = c e^{-cy}
// sampled on [0, L]; O(h^2) for the exact eigenfunction.
OdeResidualReport verify_ode(Complex lambda, double c, double L, double h);

}  // namespace shs::stab
