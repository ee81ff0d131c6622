#include "shs/shs_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shs::sim {

namespace {

void reaction_substep(EpsState& s, double dt, exec::Policy policy) {
    const auto& p = s.params;
    exec::parallel_for(s.grid.cells(), policy, [&](std::ptrdiff_t i) {
        const auto k = static_cast<std::size_t>(i);
        const double rate = kinetics::g_eps(s.u[k], p) / p.epsilon;
        const double vn = s.v[k];
        const double vnew = vn * std::exp(-dt * rate);
        s.u[k] += vn - vnew;  // exact exchange: released heat equals consumed reactant
        s.v[k] = vnew;
    });
}

void diffusion_substep(EpsState& s, double dt, const StepOptions& opts) {
    const double theta = opts.diffusion == DiffusionScheme::BackwardEuler ? 1.0 : 0.5;
    DiffusionSolver solver(s.grid, theta * dt);
    Field rhs;
    if (theta < 1.0) {
        add_scaled_laplacian(s.grid, s.u, s.u, (1.0 - theta) * dt, rhs, opts.policy);
    } else {
        rhs = s.u;
    }
    Field ustar;
    const CgResult cg = solver.solve(rhs, ustar, opts.policy);
    if (!cg.converged)
        throw IntegrationError("diffusion solve did not converge (residual " +
                                   std::to_string(cg.relative_residual) + ")",
                               s.t);
    // flux-form recompute: u <- u + dt*Lap(theta*ustar + (1-theta)*u), so the
    // cell sum telescopes regardless of the solver residual
    Field mix;
    if (theta < 1.0) {
        mix.resize(ustar.size());
        exec::parallel_for(s.grid.cells(), opts.policy, [&](std::ptrdiff_t i) {
            const auto k = static_cast<std::size_t>(i);
            mix[k] = theta * ustar[k] + (1.0 - theta) * s.u[k];
        });
    } else {
        mix = std::move(ustar);
    }
    Field unew;
    add_scaled_laplacian(s.grid, s.u, mix, dt, unew, opts.policy);
    s.u = std::move(unew);
}

}  // namespace

void step_imex(EpsState& state, double dt, const StepOptions& opts) {
    if (!(dt > 0.0)) throw IntegrationError("step_imex: dt must be positive", state.t);
    if (opts.splitting == Splitting::Strang) {
        reaction_substep(state, 0.5 * dt, opts.policy);
        diffusion_substep(state, dt, opts);
        reaction_substep(state, 0.5 * dt, opts.policy);
    } else {
        reaction_substep(state, dt, opts.policy);
        diffusion_substep(state, dt, opts);
    }
    state.t += dt;
}

namespace {

SnapshotDiagnostics snapshot_diagnostics(const EpsState& s, exec::Policy policy) {
    SnapshotDiagnostics d;
    d.t = s.t;
    const double vol = s.grid.cell_volume();
    const std::ptrdiff_t n = s.grid.cells();
    d.mass = vol * exec::deterministic_sum(n, policy, [&](std::ptrdiff_t i) {
                 const auto k = static_cast<std::size_t>(i);
                 return s.u[k] + s.v[k];
             });
    d.min_u = exec::reduce_min(n, policy, [&](std::ptrdiff_t i) { return s.u[static_cast<std::size_t>(i)]; });
    d.max_u = exec::reduce_max(n, policy, [&](std::ptrdiff_t i) { return s.u[static_cast<std::size_t>(i)]; });
    d.max_v = exec::reduce_max(n, policy, [&](std::ptrdiff_t i) { return s.v[static_cast<std::size_t>(i)]; });
    d.l2_u = vol * exec::deterministic_sum(n, policy, [&](std::ptrdiff_t i) {
                 const double u = s.u[static_cast<std::size_t>(i)];
                 return u * u;
             });
    if (!std::isfinite(d.mass) || !std::isfinite(d.l2_u))
        throw IntegrationError("non-finite field encountered", s.t);
    return d;
}

}  // namespace

EpsTrajectory run_eps(const RunEpsConfig& cfg) {
    cfg.grid.validate();
    cfg.params.validate();
    if (!(cfg.t_final >= 0.0)) throw std::invalid_argument("run_eps: t_final must be >= 0");
    if (cfg.t_final > 0.0 && !(cfg.dt > 0.0))
        throw std::invalid_argument("run_eps: dt must be positive");
    EpsState s{cfg.grid, cfg.u0, cfg.v0, 0.0, cfg.params};
    if (s.u.size() != static_cast<std::size_t>(cfg.grid.cells()) || s.u.size() != s.v.size())
        throw std::invalid_argument("run_eps: field sizes do not match the grid");

    EpsTrajectory traj;
    traj.grid = cfg.grid;
    traj.params = cfg.params;
    traj.u0 = cfg.u0;
    traj.v0_bound = exec::reduce_max(cfg.grid.cells(), cfg.step.policy, [&](std::ptrdiff_t i) {
        return cfg.v0[static_cast<std::size_t>(i)];
    });
    auto record = [&]() {
        traj.snapshots.push_back({s.t, s.u, s.v});
        traj.diagnostics.push_back(snapshot_diagnostics(s, cfg.step.policy));
    };
    record();
    if (cfg.t_final == 0.0) return traj;

    const double out_every = cfg.snapshot_dt > 0.0 ? cfg.snapshot_dt : cfg.t_final;
    double next_out = out_every;
    const long nsteps = std::lround(std::ceil(cfg.t_final / cfg.dt - 1e-12));
    for (long n = 0; n < nsteps; ++n) {
        const double dt = std::min(cfg.dt, cfg.t_final - s.t);
        step_imex(s, dt, cfg.step);
        if (s.t + 1e-12 >= next_out || n == nsteps - 1) {
            record();
            while (next_out <= s.t + 1e-12) next_out += out_every;
        }
    }
    return traj;
}

namespace {

double interp_table(const std::vector<double>& xs, const std::vector<double>& vals, double x) {
    if (xs.size() < 2 || xs.size() != vals.size())
        throw std::invalid_argument("profile table needs matching xs/values with >= 2 samples");
    if (x <= xs.front()) return vals.front();
    if (x >= xs.back()) return vals.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return vals[j - 1] + w * (vals[j] - vals[j - 1]);
}

}  // namespace

Field build_v0_field(const Grid& g, const V0ProfileSpec& spec) {
    Field v0 = make_field(g);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix), y = g.y(iy);
            double val = 0.0;
            if (spec.kind == "constant") {
                val = spec.value;
            } else if (spec.kind == "sinusoidal") {
                val = spec.value +
                      spec.amplitude * std::sin(2.0 * M_PI * spec.frequency_x * x) +
                      (g.dim == 2 && spec.frequency_y != 0.0
                           ? spec.amplitude * std::sin(2.0 * M_PI * spec.frequency_y * y)
                           : 0.0);
            } else if (spec.kind == "table") {
                val = interp_table(spec.xs, spec.values, x);
            } else {
                throw std::invalid_argument("unknown v0 profile kind '" + spec.kind + "'");
            }
            v0[g.at(ix, iy)] = val;
        }
    }
    return v0;
}

InitialData build_initial_data(const Grid& g, const InitialProfileSpec& u_spec,
                               const V0ProfileSpec& v_spec, double u_min) {
    InitialData out;
    out.u0 = make_field(g);
    auto u_of_x = [&](double x) -> double {
        if (u_spec.kind == "uniform") return u_spec.u_level;
        if (u_spec.kind == "step") {
            // linear ramp of the given width centered at `center`
            if (x <= u_spec.center - 0.5 * u_spec.width) return u_spec.u_level;
            if (x >= u_spec.center + 0.5 * u_spec.width) return u_spec.u_right;
            const double w = (x - (u_spec.center - 0.5 * u_spec.width)) / u_spec.width;
            return u_spec.u_level + w * (u_spec.u_right - u_spec.u_level);
        }
        if (u_spec.kind == "smooth-front") {
            const double s = 1.0 / (1.0 + std::exp((x - u_spec.center) / u_spec.width));
            return u_spec.u_right + (u_spec.u_level - u_spec.u_right) * s;
        }
        if (u_spec.kind == "table") return interp_table(u_spec.xs, u_spec.values, x);
        throw std::invalid_argument("unknown u profile kind '" + u_spec.kind + "'");
    };
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) out.u0[g.at(ix, iy)] = u_of_x(g.x(ix));
    out.v0 = build_v0_field(g, v_spec);

    std::string violations;
    double vmax = 0.0;
    for (std::size_t k = 0; k < out.u0.size(); ++k) {
        if (out.v0[k] < 0.0) {
            violations = "v0 must satisfy 0 <= v0 (found " + std::to_string(out.v0[k]) + ")";
            break;
        }
        vmax = std::max(vmax, out.v0[k]);
        if (out.u0[k] < u_min - 1e-12) {
            violations = "u0 must satisfy u0 >= u_min (found " + std::to_string(out.u0[k]) + ")";
            break;
        }
    }
    if (!violations.empty()) throw std::invalid_argument("initial data: " + violations);
    out.v0_bound = vmax;

    // slope of u0 at its zero crossings along x (finite differences)
    double min_slope = std::numeric_limits<double>::infinity();
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix + 1 < g.nx; ++ix) {
            const double a = out.u0[g.at(ix, iy)], b = out.u0[g.at(ix + 1, iy)];
            if ((a <= 0.0 && b > 0.0) || (a >= 0.0 && b < 0.0) || (a == 0.0 && b == 0.0)) {
                min_slope = std::min(min_slope, std::abs(b - a) / g.h);
            }
        }
    }
    out.min_crossing_slope = min_slope;
    return out;
}

}  // namespace shs::sim
