#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "shs/grid.hpp"
#include "shs/kinetics.hpp"

namespace shs::waves {

// Closed-form traveling wave of the truncated one-phase problem with constant
// coefficient: three exponential/polynomial branches glued C^1 at s1 = -c0*M
// and at 0, which pins A to (c0, M).
struct TravelingWave {
    double c0 = 0.0;
    double M = 0.0;
    double A = 0.0;
    double s0 = 0.0;  // zero of the left branch (lies in (s1, 0))
    double s1 = 0.0;  // branch point, = -c0*M

    TravelingWave() = default;
    TravelingWave(double c0_, double M_);

    double profile(double s) const;             // phi(s)
    double profile_derivative(double s) const;  // phi'(s)
    double velocity_residual() const;           // M - A - (1 - exp(-c0^2 M))/c0^2
};

struct SolveAResult {
    double A = 0.0;
    bool valid = false;  // A in (0, M)
};

// A = M - (1 - exp(-c0^2 M))/c0^2, with a series fallback for tiny c0^2*M.
SolveAResult solve_A(double c0, double M);

// Exact planar wave of the constant-coefficient limit problem:
// u(t,x) = -max(1 - exp(-c(x - c t - x_front0)), 0).
double planar_wave_u(double c, double t, double x, double x_front0 = 0.0);
// Its Duvaut transform w(t,x), zero behind the front.
double planar_wave_w(double c, double t, double x, double x_front0 = 0.0);

// Cell average of the periodic coefficient field (midpoint quadrature; exact
// for trigonometric polynomials below the grid Nyquist). Warns (via the flag)
// if v0 < 1 anywhere.
struct Mu0Result {
    double mu0 = 0.0;
    bool hypothesis_ok = true;  // v0 >= 1 everywhere
    double min_v0 = 0.0;
};

Mu0Result mu0(const std::vector<double>& v0_cell, int cells_per_period = 0);

// Duvaut transform of a one-phase trajectory: w(t,x) = -int_t^inf u with the
// tail beyond the horizon estimated by per-cell exponential extrapolation.
struct DuvautResult {
    std::vector<double> times;
    std::vector<Field> w;          // one field per retained snapshot
    double max_dtw_mismatch = 0.0; // |d/dt w - u| checked at interior times
    double max_indicator_mismatch = 0.0;  // chi_{u<0} vs chi_{w>0} disagreement fraction
};

class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

DuvautResult duvaut_transform(const std::vector<double>& times, const std::vector<const Field*>& u,
                              double zero_tol = 1e-12);

// ---------------------------------------------------------------------------
// Pulsating-wave constructor: pseudo-time relaxation of the moving-frame
// equation L w = v0(x) g_M(w) on the cylinder [-S,S] x [0,1)^1 with Dirichlet
// caps w(-S) = M, w(S) = 0. The lattice direction e must be axis-aligned; the
// transverse coordinates drop out when v0 depends on the first coordinate only.
// ---------------------------------------------------------------------------

struct PulsatingWaveConfig {
    double c = 1.0;            // prescribed frame velocity
    double M = 6.0;            // truncation height
    double S = 0.0;            // half-length; 0 picks 20/c
    int ns = 2000;             // cells along the moving-frame coordinate
    int nx = 64;               // cells across the unit cell
    double x_period = 1.0;     // length of the stored x-interval (integer # of cells of v0)
    double dtau = 0.0;         // pseudo-time step; 0 picks h_s/(2c + 2)
    double under_relaxation = 0.8;
    double rel_tol = 1e-8;     // convergence: ||residual||_inf <= rel_tol * ||v0||_inf
    long max_iterations = 100000;
    bool shoot_for_speed = true;   // adjust the (c0, A) seed until the frame drift is small
    double shoot_tol = 0.01;       // relative drift target
    exec::Policy policy = exec::default_policy();
};

struct PulsatingWave {
    // moving-frame solution w~(s, x), s index major
    int ns = 0, nx = 0;
    double S = 0.0;
    double hs = 0.0;
    double hx = 0.0;
    double x_period = 1.0;
    double c = 0.0;            // frame velocity
    double c0_seed = 0.0;      // tuned planar-wave velocity parameter
    double M = 0.0;
    double A = 0.0;
    double mu0 = 0.0;
    std::vector<double> w;     // size ns*nx, w[is*nx + ix]
    std::vector<double> v0;    // size nx
    double s_offset = 0.0;     // translation normalization: the 1/M level sits at s = 0

    long iterations = 0;
    double final_residual = 0.0;
    std::vector<double> residual_history;  // sampled every few hundred iterations
    double measured_speed = 0.0;           // c corrected by the late-stage frame drift
    double cap_gradient = 0.0;             // max |ds w| near the caps (post-hoc S check)
    int clamp_events = 0;                  // w pushed outside [0, M] and clamped
    bool v0_hypothesis_ok = true;          // v0 >= 1 everywhere

    double at(int is, int ix) const { return w[static_cast<std::size_t>(is) * nx + ix]; }
    double s_of(int is) const { return -S + (is + 0.5) * hs - s_offset; }
    // w~ evaluated with the normalization offset, linear in s, flat past the caps
    double value(double s, double x) const;
    // reconstructed physical-frame solution w(t, x1) = w~(c t - x1, x1 mod period)
    double physical(double t, double x1) const { return value(c * t - x1, x1); }
    // reconstructed temperature u = dw/dt = c * ds w~
    double u_physical(double t, double x1) const;
};

class NonConvergenceError : public std::runtime_error {
  public:
    NonConvergenceError(const std::string& msg, std::vector<double> history)
        : std::runtime_error(msg), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

PulsatingWave pulsating_wave(const std::vector<double>& v0_cell, const PulsatingWaveConfig& cfg);

// convenience: sample a v0 profile spec on nx cells over [0, period)
std::vector<double> sample_v0(int nx, double period, double mean, double amplitude,
                              double frequency = 1.0);

}  // namespace shs::waves
