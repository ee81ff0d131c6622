#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "shs/grid.hpp"
#include "shs/kernels.hpp"
#include "shs/kinetics.hpp"

namespace shs::sim {

enum class DiffusionScheme { BackwardEuler, CrankNicolson };
enum class Splitting { Lie, Strang };

// State of the finite-activation-energy system: temperature offset u and
// remaining reactant v (v = v0 at t = 0). The reaction consumes v by exact
// exponential integration, and every unit of consumed v enters u in the same
// cell, so sum(u+v) is conserved up to diffusion-solver rounding.
struct EpsState {
    Grid grid;
    Field u;
    Field v;
    double t = 0.0;
    kinetics::ScalingParams params;
};

struct StepOptions {
    DiffusionScheme diffusion = DiffusionScheme::BackwardEuler;
    Splitting splitting = Splitting::Lie;
    exec::Policy policy = exec::default_policy();
};

struct SnapshotDiagnostics {
    double t = 0.0;
    double mass = 0.0;     // sum(u+v) * cell volume
    double min_u = 0.0;
    double max_u = 0.0;
    double max_v = 0.0;
    double l2_u = 0.0;     // sum(u^2) * cell volume
};

struct EpsSnapshot {
    double t = 0.0;
    Field u;
    Field v;
};

struct EpsTrajectory {
    Grid grid;
    kinetics::ScalingParams params;
    double v0_bound = 0.0;  // C with 0 <= v0 <= C, used by the L2 audit
    Field u0;               // initial data (kept for the audits)
    std::vector<EpsSnapshot> snapshots;
    std::vector<SnapshotDiagnostics> diagnostics;
};

class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(const std::string& what, double t_fail)
        : std::runtime_error(what + " (t = " + std::to_string(t_fail) + ")"), t(t_fail) {}
    double t;
};

// One IMEX step: exact exponential reactant depletion at the frozen
// temperature, heat release equal to the consumed reactant, then implicit
// diffusion applied in flux form.
void step_imex(EpsState& state, double dt, const StepOptions& opts = {});

struct RunEpsConfig {
    Grid grid;
    kinetics::ScalingParams params;
    Field u0;
    Field v0;
    double t_final = 1.0;
    double dt = 1e-4;
    double snapshot_dt = 0.1;  // <= 0 stores only initial and final states
    StepOptions step;
};

EpsTrajectory run_eps(const RunEpsConfig& cfg);

// Named initial-data profiles. All profiles validate 0 <= v0 and u0 >= u_min
// and report the minimum |slope| over zero crossings of u0 (the transversality
// needed by the one-dimensional limit characterization).
struct InitialProfileSpec {
    std::string kind = "uniform";  // uniform | step | smooth-front | table
    double u_level = 0.0;          // uniform value / left level
    double u_right = 0.0;          // right level (step, smooth-front)
    double center = 0.0;           // transition center
    double width = 0.1;            // transition width (> 0)
    std::vector<double> xs;        // table abscissae (strictly increasing)
    std::vector<double> values;    // table values
};

struct V0ProfileSpec {
    std::string kind = "constant";  // constant | sinusoidal | table
    double value = 1.0;
    double amplitude = 0.0;
    double frequency_x = 1.0;  // periods per unit length, x axis
    double frequency_y = 0.0;
    std::vector<double> xs;
    std::vector<double> values;
};

struct InitialData {
    Field u0;
    Field v0;
    double min_crossing_slope = 0.0;  // +inf if u0 never crosses zero
    double v0_bound = 0.0;
};

InitialData build_initial_data(const Grid& g, const InitialProfileSpec& u_spec,
                               const V0ProfileSpec& v_spec, double u_min = -1.0);

Field build_v0_field(const Grid& g, const V0ProfileSpec& spec);

}  // namespace shs::sim
