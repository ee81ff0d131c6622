#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "shs/grid.hpp"
#include "shs/hysteresis.hpp"
#include "shs/kinetics.hpp"
#include "shs/shs_sim.hpp"
#include "shs/waves.hpp"

namespace shs::diag {

// First threshold crossing of u along +x (descending through the level),
// linearly interpolated; per-row results in 2D.
struct FrontLocation {
    double mean = 0.0;
    double spread = 0.0;  // max - min over rows (0 in 1D)
    std::vector<double> per_row;
};

std::optional<double> front_position_1d(const Grid& g, const Field& u, double threshold,
                                        int row = 0);
std::optional<FrontLocation> front_position(const Grid& g, const Field& u, double threshold);

struct FrontTrace {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<double> speeds;  // centered differences, filled by pulsation_stats
};

// least-squares slope of positions(times)
double mean_speed(const FrontTrace& trace);

struct PulsationStats {
    double amplitude = 0.0;            // peak-to-trough of the speed series
    std::optional<double> period;      // autocorrelation peak, if oscillatory
    std::string verdict;               // "planar" or "pulsating"
    double mean_speed = 0.0;
};

class InsufficientDataError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Amplitude and period of the instantaneous-speed oscillation. The leading
// fraction of the series is discarded as transient. Planar verdict when the
// peak-to-trough stays below planar_tol relative to the mean speed.
PulsationStats pulsation_stats(const FrontTrace& trace, double planar_tol = 1e-3,
                               double transient_fraction = 0.25,
                               std::optional<double> expected_period = std::nullopt);

// Clearing-out check on a space-time box Q = {t0-2delta < t < t0,
// phi1(t) < x < phi2(t)}: sub-threshold boundary data forces a sub-threshold
// interior, with the comparison ODE ceiling integrated alongside.
struct ClearingOutConfig {
    double t0 = 0.0;
    double delta = 0.0;
    std::function<double(double)> phi1;
    std::function<double(double)> phi2;
    double kappa = -0.5;           // < 0
    double omega_delta = 0.0;      // boundary margin factor omega(delta)
    double omega_kappa = 1.0;      // admissible-eps ceiling omega(kappa)
    kinetics::ScalingParams params;
    double C_bound = 1.0;          // constant in the comparison ODE
    double grid_tol = 1e-9;
};

struct ClearingOutReport {
    std::string verdict;        // "pass", "fail", or "inapplicable"
    double boundary_max = 0.0;  // max of u on the sampled parabolic boundary
    double interior_max = 0.0;
    double ode_ceiling = 0.0;   // y(t0) of y' = C g_eps(y)/eps
    bool eps_admissible = true; // eps <= omega(kappa)
};

ClearingOutReport clearing_out_check(const limit::FieldSeries& series, const ClearingOutConfig& cfg);

// Max relative drift of sum(u+v) over a trajectory, measured against the
// initial absolute mass scale sum(|u0|+|v0|).
double conservation_audit(const sim::EpsTrajectory& traj);

struct L2AuditReport {
    double lhs = 0.0;  // int_0^T int u^2
    double rhs = 0.0;  // T * int (C + |u0|)^2
    bool pass = false;
    double margin = 0.0;
};

L2AuditReport l2_bound_audit(const sim::EpsTrajectory& traj, double T = -1.0);

// Tangential-difference planarity test on a moving-frame wave: z^xi compares
// the wave against its shifted, time-delayed copy. Real-valued shifts along
// the lattice directions are required to discriminate (integer lattice shifts
// give identically zero by the pulsation identity).
struct TangentialDifference {
    std::vector<std::vector<double>> shifts;  // shift vectors (first component used)
    double sup_eta = 0.0;                     // sup over shifts and cells of |z^xi|
    double max_cell_average = 0.0;            // max over shifts/levels of |avg_x z^xi|
    std::string verdict;                      // "planar" or "non-planar"
};

TangentialDifference planarity_check(const waves::PulsatingWave& wave,
                                     const std::vector<std::vector<double>>& shifts,
                                     double planar_tol_rel = 1e-3);

// Trace of the reconstructed pulsating wave's front over n_periods periods.
FrontTrace trace_pulsating_front(const waves::PulsatingWave& wave, double n_periods = 5.0,
                                 int samples_per_period = 200, double threshold_frac = 0.5);

// Plateau value of the reconstructed dw/dt ahead of the front, i.e. c*ds(w~)
// averaged over the band where the row-averaged profile sits between the
// given fractions of A. Converges to -mu0 away from the front and cap layers.
double far_field_dtw(const waves::PulsatingWave& wave, double band_lo_frac = 0.6,
                     double band_hi_frac = 0.95);

struct WaveShapeAudit {
    double max_ds = 0.0;            // max of ds w~ (monotone profile: <= tol)
    double min_dss_below_halfA = 0.0;  // min of dss w~ where w~ <= A/2 (convexity)
    double w_min = 0.0, w_max = 0.0;
};

WaveShapeAudit wave_shape_audit(const waves::PulsatingWave& wave);

}  // namespace shs::diag
