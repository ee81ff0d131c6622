#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "shs/grid.hpp"
#include "shs/kernels.hpp"
#include "shs/shs_sim.hpp"

namespace shs::limit {

// State of the singular-limit free-boundary problem. chi is the burnt
// indicator driven by the running maximum m of the temperature: once a cell
// reaches u >= 0 it ignites, releases v0 into u, and chi stays 1 forever.
struct LimitState {
    Grid grid;
    Field u;
    Field m;                    // running maximum of u per cell
    std::vector<std::uint8_t> chi;
    Field v0;
    double t = 0.0;
};

struct LimitStepOptions {
    // one ignition pass per step by default; the fixed-point flag re-solves the
    // diffusion with the released heat until no new cell ignites within the step
    bool fixed_point_ignition = false;
    // a burnt cell sinking below -monotone_tol while decreasing marks the run
    // as outside the time-increasing regime
    double monotone_tol = 0.05;
    bool strict_monotone = false;  // throw instead of flagging
    exec::Policy policy = exec::default_policy();
};

struct LimitStepReport {
    int newly_ignited = 0;
    int ignition_sweeps = 1;
    bool monotone_violation = false;
    double enthalpy_residual = 0.0;   // max |(e' - e)/dt - Lap u'| off ignition cells
    double supercaloric_min = 0.0;    // min of (u' - u)/dt - Lap u' over chi-constant cells
};

// Fresh initial data: chi = H(u_raw) with the closed threshold u_raw >= 0, and
// the ignition release applied at time zero, u = u_raw + v0 * chi.
LimitState init_fresh(const Grid& g, const Field& u_raw, const Field& v0);

// Mid-propagation initial data: chi supplied, no release at time zero (burnt
// cells already carry post-release temperatures). chi = 0 cells must be
// strictly unburnt (u_raw < 0).
LimitState init_preburnt(const Grid& g, const Field& u_raw, const Field& v0,
                         const std::vector<std::uint8_t>& chi0);

LimitStepReport step_limit(LimitState& state, double dt, const LimitStepOptions& opts = {});

struct LimitSnapshot {
    double t = 0.0;
    Field u;
    Field m;
    std::vector<std::uint8_t> chi;
};

struct LimitTrajectory {
    Grid grid;
    Field v0;
    std::vector<LimitSnapshot> snapshots;
    std::vector<double> trace_times;
    std::vector<double> trace_positions;   // chi-interface position, 1D/row mean
    bool outside_monotone_regime = false;
    double max_enthalpy_residual = 0.0;
    double min_supercaloric = 0.0;
    long chi_consistency_violations = 0;   // chi=1 <=> m>=0 failures over all steps
    long chi_monotone_violations = 0;
};

struct RunLimitConfig {
    Grid grid;
    Field u_raw;
    Field v0;
    std::optional<std::vector<std::uint8_t>> chi0;  // engaged: pre-burnt init
    double t_final = 1.0;
    double dt = 1e-4;
    double snapshot_dt = 0.1;
    int trace_every = 50;  // record the front every N steps (0 disables)
    LimitStepOptions step;
};

LimitTrajectory run_limit(const RunLimitConfig& cfg);

// chi-interface position: rightmost burnt->unburnt face along x; in 2D the
// mean over rows. Empty if nothing is burnt or everything is.
std::optional<double> chi_front_position(const Grid& g, const std::vector<std::uint8_t>& chi);

// Lightweight view shared by the measurement layer: a time series of scalar
// fields on one grid.
struct FieldSeries {
    const Grid* grid = nullptr;
    std::vector<double> times;
    std::vector<const Field*> fields;
};

FieldSeries u_series(const LimitTrajectory& traj);
FieldSeries u_series(const sim::EpsTrajectory& traj);

// First time u >= 0 per cell, linearly interpolated between snapshots;
// +infinity where the cell never ignites.
Field ignition_time_map(const FieldSeries& series);

// Self-convergence of the finite-eps system toward the limit solver: L1
// distance at the final time for each eps, plus the trend verdict.
struct ConvergenceRow {
    double eps = 0.0;
    double l1_error = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::string verdict;  // "monotone-trend pass", "fail", or "vacuous"
    bool strictly_decreasing = false;
};

struct ConvergenceConfig {
    Grid grid;
    sim::InitialProfileSpec u_spec;
    sim::V0ProfileSpec v_spec;
    std::vector<double> eps_values;  // strictly decreasing
    double t_final = 0.5;
    double dt_eps = 2e-5;
    double dt_limit = 2e-5;
    kinetics::ScalingKind kind = kinetics::ScalingKind::MatkowskySivashinsky;
    double sigma = 0.0;
    double kappa = 0.5;
    double theta_bar = 0.5;
    exec::Policy policy = exec::default_policy();
};

ConvergenceTable eps_convergence_study(const ConvergenceConfig& cfg);

}  // namespace shs::limit
