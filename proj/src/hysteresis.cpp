#include "shs/hysteresis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shs::limit {

LimitState init_fresh(const Grid& g, const Field& u_raw, const Field& v0) {
    g.validate();
    const auto n = static_cast<std::size_t>(g.cells());
    if (u_raw.size() != n || v0.size() != n)
        throw std::invalid_argument("init_fresh: field sizes do not match the grid");
    LimitState s;
    s.grid = g;
    s.u.resize(n);
    s.m.resize(n);
    s.chi.resize(n);
    s.v0 = v0;
    for (std::size_t k = 0; k < n; ++k) {
        if (v0[k] < 0.0) throw std::invalid_argument("init_fresh: v0 must be nonnegative");
        const bool burnt = u_raw[k] >= 0.0;  // closed ignition threshold
        s.chi[k] = burnt ? 1 : 0;
        s.u[k] = u_raw[k] + (burnt ? v0[k] : 0.0);
        s.m[k] = s.u[k];
    }
    return s;
}

LimitState init_preburnt(const Grid& g, const Field& u_raw, const Field& v0,
                         const std::vector<std::uint8_t>& chi0) {
    g.validate();
    const auto n = static_cast<std::size_t>(g.cells());
    if (u_raw.size() != n || v0.size() != n || chi0.size() != n)
        throw std::invalid_argument("init_preburnt: field sizes do not match the grid");
    LimitState s;
    s.grid = g;
    s.u = u_raw;
    s.m.resize(n);
    s.chi = chi0;
    s.v0 = v0;
    for (std::size_t k = 0; k < n; ++k) {
        if (v0[k] < 0.0) throw std::invalid_argument("init_preburnt: v0 must be nonnegative");
        if (!chi0[k] && u_raw[k] >= 0.0)
            throw std::invalid_argument(
                "init_preburnt: unburnt cells (chi = 0) must carry u < 0");
        s.m[k] = chi0[k] ? std::max(u_raw[k], 0.0) : u_raw[k];
    }
    return s;
}

LimitStepReport step_limit(LimitState& s, double dt, const LimitStepOptions& opts) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_limit: dt must be positive");
    const auto n = static_cast<std::size_t>(s.grid.cells());
    LimitStepReport rep;

    DiffusionSolver solver(s.grid, dt);
    const std::vector<std::uint8_t> chi_before = s.chi;
    const Field u_before = s.u;

    Field release(n, 0.0);
    Field rhs(n), prov, unew;
    std::vector<std::uint8_t> ignited_now(n, 0);
    int sweeps = 0;
    while (true) {
        ++sweeps;
        exec::parallel_for(s.grid.cells(), opts.policy, [&](std::ptrdiff_t i) {
            const auto k = static_cast<std::size_t>(i);
            rhs[k] = u_before[k] + release[k];
        });
        const CgResult cg = solver.solve(rhs, prov, opts.policy);
        if (!cg.converged) throw std::runtime_error("step_limit: diffusion solve did not converge");
        // flux-form recompute keeps the enthalpy update exactly e' = e + dt*Lap(u')
        add_scaled_laplacian(s.grid, rhs, prov, dt, unew, opts.policy);

        int newly = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (!chi_before[k] && !ignited_now[k] && unew[k] >= 0.0) {
                ignited_now[k] = 1;
                ++newly;
            }
        }
        if (!opts.fixed_point_ignition || newly == 0) {
            if (opts.fixed_point_ignition) {
                // releases already diffused inside the solve
                s.u = unew;
            } else {
                rep.newly_ignited = newly;
                s.u = unew;
                for (std::size_t k = 0; k < n; ++k)
                    if (ignited_now[k]) s.u[k] += s.v0[k];
            }
            break;
        }
        rep.newly_ignited += newly;
        for (std::size_t k = 0; k < n; ++k)
            if (ignited_now[k]) release[k] = s.v0[k];
    }
    rep.ignition_sweeps = sweeps;
    if (opts.fixed_point_ignition) {
        rep.newly_ignited = 0;
        for (std::size_t k = 0; k < n; ++k) rep.newly_ignited += ignited_now[k];
    }

    // commit indicator and running maximum
    for (std::size_t k = 0; k < n; ++k) {
        if (ignited_now[k]) s.chi[k] = 1;
        if (s.chi[k] < chi_before[k])
            throw std::logic_error("step_limit: chi decreased (internal invariant violation)");
        s.m[k] = std::max(s.m[k], s.u[k]);
    }

    // step audit: enthalpy residual and supercaloric defect away from the
    // cells ignited this step (the fresh latent bump sits inside their
    // stencil), plus the time-increasing-regime guard
    std::vector<std::uint8_t> near_ignition(n, 0);
    for (int iy = 0; iy < s.grid.ny; ++iy) {
        for (int ix = 0; ix < s.grid.nx; ++ix) {
            if (!ignited_now[s.grid.at(ix, iy)]) continue;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    int jx = ix + dx, jy = iy + dy;
                    if (s.grid.boundary == Boundary::Periodic) {
                        jx = (jx + s.grid.nx) % s.grid.nx;
                        jy = (jy + s.grid.ny) % s.grid.ny;
                    } else {
                        jx = std::clamp(jx, 0, s.grid.nx - 1);
                        jy = std::clamp(jy, 0, s.grid.ny - 1);
                    }
                    near_ignition[s.grid.at(jx, jy)] = 1;
                }
            }
        }
    }
    Field lap;
    apply_laplacian(s.grid, s.u, lap, opts.policy);
    double res_max = 0.0, super_min = std::numeric_limits<double>::infinity();
    bool mono_violation = false;
    for (std::size_t k = 0; k < n; ++k) {
        if (!near_ignition[k]) {
            const double r = (s.u[k] - u_before[k]) / dt - lap[k];
            res_max = std::max(res_max, std::abs(r));
            super_min = std::min(super_min, r);
        }
        if (chi_before[k] && s.u[k] < -opts.monotone_tol && s.u[k] < u_before[k])
            mono_violation = true;
    }
    rep.enthalpy_residual = res_max;
    rep.supercaloric_min = super_min;
    rep.monotone_violation = mono_violation;
    if (mono_violation && opts.strict_monotone)
        throw std::runtime_error("step_limit: outside monotone regime (burnt region cooling below zero)");

    s.t += dt;
    return rep;
}

std::optional<double> chi_front_position(const Grid& g, const std::vector<std::uint8_t>& chi) {
    double sum = 0.0;
    int rows = 0;
    for (int iy = 0; iy < g.ny; ++iy) {
        int last_burnt = -1;
        for (int ix = 0; ix < g.nx; ++ix)
            if (chi[g.at(ix, iy)]) last_burnt = ix;
        if (last_burnt < 0 || last_burnt == g.nx - 1) continue;
        sum += g.x(last_burnt) + 0.5 * g.h;
        ++rows;
    }
    if (rows == 0) return std::nullopt;
    return sum / rows;
}

LimitTrajectory run_limit(const RunLimitConfig& cfg) {
    cfg.grid.validate();
    LimitState s = cfg.chi0 ? init_preburnt(cfg.grid, cfg.u_raw, cfg.v0, *cfg.chi0)
                            : init_fresh(cfg.grid, cfg.u_raw, cfg.v0);
    LimitTrajectory traj;
    traj.grid = cfg.grid;
    traj.v0 = cfg.v0;
    traj.min_supercaloric = std::numeric_limits<double>::infinity();

    auto consistency_check = [&]() {
        for (std::size_t k = 0; k < s.chi.size(); ++k) {
            const bool want = s.m[k] >= 0.0;
            if (static_cast<bool>(s.chi[k]) != want) ++traj.chi_consistency_violations;
        }
    };
    auto record = [&]() { traj.snapshots.push_back({s.t, s.u, s.m, s.chi}); };
    auto trace = [&]() {
        if (auto p = chi_front_position(s.grid, s.chi)) {
            traj.trace_times.push_back(s.t);
            traj.trace_positions.push_back(*p);
        }
    };

    record();
    trace();
    consistency_check();
    if (cfg.t_final <= 0.0) return traj;
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("run_limit: dt must be positive");

    const double out_every = cfg.snapshot_dt > 0.0 ? cfg.snapshot_dt : cfg.t_final;
    double next_out = out_every;
    const long nsteps = std::lround(std::ceil(cfg.t_final / cfg.dt - 1e-12));
    std::vector<std::uint8_t> chi_prev = s.chi;
    for (long n = 0; n < nsteps; ++n) {
        const double dt = std::min(cfg.dt, cfg.t_final - s.t);
        const LimitStepReport rep = step_limit(s, dt, cfg.step);
        traj.max_enthalpy_residual = std::max(traj.max_enthalpy_residual, rep.enthalpy_residual);
        traj.min_supercaloric = std::min(traj.min_supercaloric, rep.supercaloric_min);
        if (rep.monotone_violation) traj.outside_monotone_regime = true;
        for (std::size_t k = 0; k < s.chi.size(); ++k)
            if (s.chi[k] < chi_prev[k]) ++traj.chi_monotone_violations;
        chi_prev = s.chi;
        consistency_check();
        if (cfg.trace_every > 0 && (n % cfg.trace_every == 0 || n == nsteps - 1)) trace();
        if (s.t + 1e-12 >= next_out || n == nsteps - 1) {
            record();
            while (next_out <= s.t + 1e-12) next_out += out_every;
        }
    }
    return traj;
}

FieldSeries u_series(const LimitTrajectory& traj) {
    FieldSeries fs;
    fs.grid = &traj.grid;
    for (const auto& snap : traj.snapshots) {
        fs.times.push_back(snap.t);
        fs.fields.push_back(&snap.u);
    }
    return fs;
}

FieldSeries u_series(const sim::EpsTrajectory& traj) {
    FieldSeries fs;
    fs.grid = &traj.grid;
    for (const auto& snap : traj.snapshots) {
        fs.times.push_back(snap.t);
        fs.fields.push_back(&snap.u);
    }
    return fs;
}

Field ignition_time_map(const FieldSeries& series) {
    if (!series.grid || series.fields.empty())
        throw std::invalid_argument("ignition_time_map: empty trajectory");
    const auto n = series.fields.front()->size();
    Field t_ign(n, std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < n; ++k) {
        if ((*series.fields.front())[k] >= 0.0) {
            t_ign[k] = series.times.front();
            continue;
        }
        for (std::size_t j = 1; j < series.fields.size(); ++j) {
            const double a = (*series.fields[j - 1])[k];
            const double b = (*series.fields[j])[k];
            if (b >= 0.0) {
                const double w = (0.0 - a) / (b - a);
                t_ign[k] = series.times[j - 1] + w * (series.times[j] - series.times[j - 1]);
                break;
            }
        }
    }
    return t_ign;
}

ConvergenceTable eps_convergence_study(const ConvergenceConfig& cfg) {
    ConvergenceTable table;
    if (cfg.eps_values.empty()) {
        table.verdict = "vacuous";
        return table;
    }
    for (std::size_t i = 1; i < cfg.eps_values.size(); ++i)
        if (!(cfg.eps_values[i] < cfg.eps_values[i - 1]))
            throw std::invalid_argument("eps_convergence_study: eps list must be strictly decreasing");
    if (cfg.grid.dim != 1)
        throw std::invalid_argument("eps_convergence_study: 1D grids only");

    const sim::InitialData init = sim::build_initial_data(cfg.grid, cfg.u_spec, cfg.v_spec);
    if (!(init.min_crossing_slope > 0.0) &&
        std::isfinite(init.min_crossing_slope))
        throw std::invalid_argument("eps_convergence_study: u0 must have nonvanishing slope at zero crossings");

    RunLimitConfig lim;
    lim.grid = cfg.grid;
    lim.u_raw = init.u0;
    lim.v0 = init.v0;
    lim.t_final = cfg.t_final;
    lim.dt = cfg.dt_limit;
    lim.snapshot_dt = cfg.t_final;
    lim.trace_every = 0;
    lim.step.policy = cfg.policy;
    const LimitTrajectory ref = run_limit(lim);
    const Field& u_ref = ref.snapshots.back().u;

    const double vol = cfg.grid.cell_volume();
    for (double eps : cfg.eps_values) {
        sim::RunEpsConfig ec;
        ec.grid = cfg.grid;
        ec.params.epsilon = eps;
        ec.params.scaling_kind = cfg.kind;
        ec.params.sigma = cfg.sigma;
        ec.params.kappa_eps = cfg.kappa;
        ec.params.theta_bar = cfg.theta_bar;
        ec.u0 = init.u0;
        ec.v0 = init.v0;
        ec.t_final = cfg.t_final;
        ec.dt = cfg.dt_eps;
        ec.snapshot_dt = cfg.t_final;
        ec.step.policy = cfg.policy;
        const sim::EpsTrajectory traj = sim::run_eps(ec);
        const Field& u_eps = traj.snapshots.back().u;
        double l1 = 0.0;
        for (std::size_t k = 0; k < u_eps.size(); ++k) l1 += std::abs(u_eps[k] - u_ref[k]);
        table.rows.push_back({eps, l1 * vol});
    }
    if (table.rows.size() < 2) {
        table.verdict = "vacuous";
        return table;
    }
    int inversions = 0;
    bool strict = true;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (!(table.rows[i].l1_error < table.rows[i - 1].l1_error)) {
            ++inversions;
            strict = false;
        }
    }
    table.strictly_decreasing = strict;
    table.verdict = inversions <= 1 ? "monotone-trend pass" : "fail";
    return table;
}

}  // namespace shs::limit
