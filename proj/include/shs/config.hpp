#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shs/grid.hpp"
#include "shs/kinetics.hpp"
#include "shs/shs_sim.hpp"

namespace shs::io {

class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::vector<std::string> errs)
        : std::runtime_error(join(errs)), errors(std::move(errs)) {}
    std::vector<std::string> errors;

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "configuration invalid:";
        for (const auto& e : v) s += "\n  - " + e;
        return s;
    }
};

struct GridSpec {
    int dim = 1;
    int cells_x = 0;
    int cells_y = 1;
    double length = 1.0;  // domain length along x; h = length / cells_x
    Boundary boundary = Boundary::Neumann;
};

struct KineticsSpec {
    kinetics::ScalingKind kind = kinetics::ScalingKind::MatkowskySivashinsky;
    double epsilon = 0.1;
    double sigma = 0.0;
    double theta_bar = 0.5;
    double kappa = 0.5;
};

struct NumericsSpec {
    double dt = 1e-4;
    double t_final = 1.0;
    double snapshot_dt = 0.0;
    std::string diffusion = "backward-euler";  // or crank-nicolson
    std::string splitting = "lie";             // or strang
    int trace_every = 50;
    bool fixed_point_ignition = false;
    double monotone_tol = 0.05;
};

struct WaveSpec {
    double c = 1.0;
    double c0 = 1.0;
    double M = 6.0;
    double S = 0.0;
    int ns = 2000;
    int nx = 64;
    double x_period = 1.0;
    double rel_tol = 1e-8;
    long max_iterations = 100000;
    bool shoot = true;
};

struct DispersionSpec {
    std::vector<double> c_values = {1.0};
    double re_lo = 0.0, re_hi = 8.0, im_lo = -8.0, im_hi = 8.0;
    int density = 32;
};

struct ConvergenceSpec {
    std::vector<double> eps_values;
};

struct SweepSpec {
    std::string experiment;  // experiment run per point
    std::string parameter;   // dotted key, e.g. kinetics.epsilon
    std::vector<double> values;
};

struct RunConfig {
    std::string experiment;
    GridSpec grid;
    KineticsSpec kin;
    sim::InitialProfileSpec u_spec;
    sim::V0ProfileSpec v_spec;
    NumericsSpec num;
    WaveSpec wave;
    DispersionSpec disp;
    ConvergenceSpec conv;
    SweepSpec sweep;
    std::string out_dir = "out";
    std::uint64_t config_hash = 0;

    Grid make_grid() const;
    kinetics::ScalingParams make_params() const;
};

std::uint64_t fnv1a_hash(const std::string& text);

// Parses the plain-text `key = value` format with [section] headers; unknown
// keys are rejected and every validation error is reported, not just the first.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

}  // namespace shs::io
