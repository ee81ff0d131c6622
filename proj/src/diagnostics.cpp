#include "shs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace shs::diag {

std::optional<double> front_position_1d(const Grid& g, const Field& u, double threshold, int row) {
    for (int ix = 0; ix + 1 < g.nx; ++ix) {
        const double a = u[g.at(ix, row)];
        const double b = u[g.at(ix + 1, row)];
        if (a > threshold && b <= threshold) {
            const double w = (a - threshold) / (a - b);
            return g.x(ix) + w * g.h;
        }
    }
    return std::nullopt;
}

std::optional<FrontLocation> front_position(const Grid& g, const Field& u, double threshold) {
    FrontLocation loc;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int iy = 0; iy < g.ny; ++iy) {
        const auto p = front_position_1d(g, u, threshold, iy);
        if (!p) continue;
        loc.per_row.push_back(*p);
        lo = std::min(lo, *p);
        hi = std::max(hi, *p);
    }
    if (loc.per_row.empty()) return std::nullopt;
    loc.mean = std::accumulate(loc.per_row.begin(), loc.per_row.end(), 0.0) / loc.per_row.size();
    loc.spread = hi - lo;
    return loc;
}

double mean_speed(const FrontTrace& trace) {
    const std::size_t n = trace.times.size();
    if (n < 2) return 0.0;
    double st = 0, sp = 0, stt = 0, stp = 0;
    for (std::size_t i = 0; i < n; ++i) {
        st += trace.times[i];
        sp += trace.positions[i];
        stt += trace.times[i] * trace.times[i];
        stp += trace.times[i] * trace.positions[i];
    }
    const double denom = n * stt - st * st;
    return denom > 0.0 ? (n * stp - st * sp) / denom : 0.0;
}

PulsationStats pulsation_stats(const FrontTrace& trace, double planar_tol,
                               double transient_fraction, std::optional<double> expected_period) {
    const std::size_t n = trace.times.size();
    if (n < 16 || trace.positions.size() != n)
        throw InsufficientDataError("pulsation_stats: trace too short");
    const double span = trace.times.back() - trace.times.front();
    if (expected_period && span < 3.0 * (*expected_period))
        throw InsufficientDataError("pulsation_stats: trace spans fewer than 3 putative periods");

    // centered-difference speeds, transient discarded
    std::vector<double> t, v;
    const std::size_t start =
        std::max<std::size_t>(1, static_cast<std::size_t>(transient_fraction * n));
    for (std::size_t i = start; i + 1 < n; ++i) {
        const double dt = trace.times[i + 1] - trace.times[i - 1];
        if (dt <= 0.0) continue;
        t.push_back(trace.times[i]);
        v.push_back((trace.positions[i + 1] - trace.positions[i - 1]) / dt);
    }
    if (v.size() < 8) throw InsufficientDataError("pulsation_stats: too few speed samples");

    PulsationStats out;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    out.mean_speed = mean;
    double vmin = v[0], vmax = v[0];
    for (double s : v) {
        vmin = std::min(vmin, s);
        vmax = std::max(vmax, s);
    }
    out.amplitude = vmax - vmin;
    const double rel = std::abs(mean) > 0.0 ? out.amplitude / std::abs(mean) : out.amplitude;
    if (rel < planar_tol) {
        out.verdict = "planar";
        return out;
    }
    out.verdict = "pulsating";

    // period from the first prominent autocorrelation peak of the detrended series
    std::vector<double> d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d[i] = v[i] - mean;
    const std::size_t nlag = d.size() / 2;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_lag = 0;
    bool dipped = false;
    std::vector<double> rho(nlag + 1, 0.0);
    double rho0 = 0.0;
    for (double x : d) rho0 += x * x;
    for (std::size_t lag = 1; lag <= nlag; ++lag) {
        double s = 0.0;
        for (std::size_t i = 0; i + lag < d.size(); ++i) s += d[i] * d[i + lag];
        rho[lag] = s / std::max(rho0, 1e-300);
        if (rho[lag] < 0.25) dipped = true;  // wait for decorrelation before peak-hunting
        if (dipped && rho[lag] > best) {
            best = rho[lag];
            best_lag = lag;
        }
    }
    if (best_lag > 0 && best > 0.2) {
        const double dt_sample = (t.back() - t.front()) / (t.size() - 1);
        double lag_refined = static_cast<double>(best_lag);
        if (best_lag + 1 <= nlag && best_lag >= 2) {
            const double ym = rho[best_lag - 1], y0 = rho[best_lag], yp = rho[best_lag + 1];
            const double denom = ym - 2.0 * y0 + yp;
            if (std::abs(denom) > 1e-300) lag_refined += 0.5 * (ym - yp) / denom;
        }
        out.period = lag_refined * dt_sample;
    }
    return out;
}

namespace {

// linear interpolation of a field series in time and (1D) space
double sample_series(const limit::FieldSeries& s, double t, double x) {
    const Grid& g = *s.grid;
    const std::size_t nt = s.times.size();
    std::size_t j = 0;
    while (j + 2 < nt && s.times[j + 1] < t) ++j;
    const double t0 = s.times[j], t1 = s.times[j + 1];
    const double wt = std::clamp((t - t0) / std::max(t1 - t0, 1e-300), 0.0, 1.0);
    auto space = [&](const Field& f) {
        double fx = x / g.h - 0.5;
        const int ix0 = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx - 2);
        const double w = std::clamp(fx - ix0, 0.0, 1.0);
        return (1.0 - w) * f[g.at(ix0)] + w * f[g.at(ix0 + 1)];
    };
    return (1.0 - wt) * space(*s.fields[j]) + wt * space(*s.fields[j + 1]);
}

}  // namespace

ClearingOutReport clearing_out_check(const limit::FieldSeries& series, const ClearingOutConfig& cfg) {
    if (!series.grid || series.times.size() < 2)
        throw std::invalid_argument("clearing_out_check: need a trajectory with >= 2 snapshots");
    if (!(cfg.kappa < 0.0)) throw std::invalid_argument("clearing_out_check: kappa must be negative");
    if (!(cfg.delta > 0.0)) throw std::invalid_argument("clearing_out_check: delta must be positive");
    ClearingOutReport rep;
    rep.eps_admissible = cfg.params.epsilon <= cfg.omega_kappa;

    const double t_lo = cfg.t0 - 2.0 * cfg.delta;
    const double bound = (1.0 + cfg.omega_delta) * cfg.kappa;
    const int nt = 64, nx = 256;

    // parabolic boundary: bottom slice plus the two lateral curves
    double bmax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= nx; ++i) {
        const double x = cfg.phi1(t_lo) + (cfg.phi2(t_lo) - cfg.phi1(t_lo)) * i / nx;
        bmax = std::max(bmax, sample_series(series, t_lo, x));
    }
    for (int j = 0; j <= nt; ++j) {
        const double t = t_lo + (cfg.t0 - t_lo) * j / nt;
        bmax = std::max(bmax, sample_series(series, t, cfg.phi1(t)));
        bmax = std::max(bmax, sample_series(series, t, cfg.phi2(t)));
    }
    rep.boundary_max = bmax;
    if (bmax > bound + cfg.grid_tol) {
        rep.verdict = "inapplicable";
        return rep;
    }

    double imax = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= nt; ++j) {
        const double t = t_lo + (cfg.t0 - t_lo) * j / nt;
        for (int i = 1; i < nx; ++i) {
            const double x = cfg.phi1(t) + (cfg.phi2(t) - cfg.phi1(t)) * i / nx;
            imax = std::max(imax, sample_series(series, t, x));
        }
    }
    rep.interior_max = imax;

    // comparison ODE y' = C g_eps(y)/eps from the boundary level (RK4)
    double y = bound;
    const int ode_steps = 2000;
    const double dt = (cfg.t0 - t_lo) / ode_steps;
    auto f = [&](double z) { return cfg.C_bound * kinetics::g_eps(z, cfg.params) / cfg.params.epsilon; };
    for (int i = 0; i < ode_steps; ++i) {
        const double k1 = f(y);
        const double k2 = f(y + 0.5 * dt * k1);
        const double k3 = f(y + 0.5 * dt * k2);
        const double k4 = f(y + dt * k3);
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (y > 0.0) break;  // ceiling escaped the negative phase
    }
    rep.ode_ceiling = y;

    rep.verdict = imax <= cfg.kappa + cfg.grid_tol ? "pass" : "fail";
    return rep;
}

double conservation_audit(const sim::EpsTrajectory& traj) {
    if (traj.diagnostics.empty()) return 0.0;
    double scale = 0.0;
    {
        const auto& s0 = traj.snapshots.front();
        for (std::size_t k = 0; k < s0.u.size(); ++k)
            scale += std::abs(s0.u[k]) + std::abs(s0.v[k]);
        scale *= traj.grid.cell_volume();
        scale = std::max(scale, 1e-300);
    }
    const double m0 = traj.diagnostics.front().mass;
    double drift = 0.0;
    for (const auto& d : traj.diagnostics) drift = std::max(drift, std::abs(d.mass - m0));
    return drift / scale;
}

L2AuditReport l2_bound_audit(const sim::EpsTrajectory& traj, double T) {
    L2AuditReport rep;
    if (traj.diagnostics.size() < 1) {
        rep.pass = true;
        return rep;
    }
    if (T < 0.0) T = traj.diagnostics.back().t;
    // lhs: trapezoid in time of the recorded int u^2
    double lhs = 0.0;
    for (std::size_t j = 1; j < traj.diagnostics.size(); ++j) {
        const auto& a = traj.diagnostics[j - 1];
        const auto& b = traj.diagnostics[j];
        if (a.t >= T) break;
        const double dt = std::min(b.t, T) - a.t;
        lhs += 0.5 * dt * (a.l2_u + b.l2_u);
    }
    double rhs = 0.0;
    for (std::size_t k = 0; k < traj.u0.size(); ++k) {
        const double z = traj.v0_bound + std::abs(traj.u0[k]);
        rhs += z * z;
    }
    rhs *= T * traj.grid.cell_volume();
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.margin = rhs - lhs;
    rep.pass = lhs <= rhs * (1.0 + 1e-10) + 1e-12;
    return rep;
}

TangentialDifference planarity_check(const waves::PulsatingWave& wave,
                                     const std::vector<std::vector<double>>& shifts,
                                     double planar_tol_rel) {
    TangentialDifference td;
    td.shifts = shifts;
    double wmax = 0.0;
    for (double v : wave.w) wmax = std::max(wmax, std::abs(v));

    for (const auto& xi : shifts) {
        if (xi.empty() || !std::isfinite(xi[0]))
            throw std::domain_error("planarity_check: shifts must be finite lattice-direction vectors");
        for (std::size_t d = 1; d < xi.size(); ++d)
            if (xi[d] != 0.0)
                throw std::domain_error(
                    "planarity_check: only shifts along the stored lattice direction are supported");
        const double shift = xi[0];
        // z^xi in the moving frame is w~(s, x - xi) - w~(s, x); the time delay
        // e.xi/c cancels against the frame shift exactly
        for (int is = 0; is < wave.ns; ++is) {
            double avg = 0.0;
            for (int ix = 0; ix < wave.nx; ++ix) {
                const double x = (ix + 0.5) * wave.hx;
                const double s = wave.s_of(is);
                const double z = wave.value(s, x - shift) - wave.value(s, x);
                td.sup_eta = std::max(td.sup_eta, std::abs(z));
                avg += z;
            }
            td.max_cell_average = std::max(td.max_cell_average, std::abs(avg / wave.nx));
        }
    }
    td.verdict = td.sup_eta <= planar_tol_rel * std::max(wmax, 1e-300) ? "planar" : "non-planar";
    return td;
}

double far_field_dtw(const waves::PulsatingWave& wave, double band_lo_frac, double band_hi_frac) {
    // row-averaged profile and its s-derivative
    std::vector<double> avg(static_cast<std::size_t>(wave.ns), 0.0);
    for (int is = 0; is < wave.ns; ++is) {
        double s = 0.0;
        for (int ix = 0; ix < wave.nx; ++ix) s += wave.at(is, ix);
        avg[static_cast<std::size_t>(is)] = s / wave.nx;
    }
    const double lo = band_lo_frac * wave.A, hi = band_hi_frac * wave.A;
    double sum = 0.0;
    int count = 0;
    for (int is = 1; is + 1 < wave.ns; ++is) {
        const double w = avg[static_cast<std::size_t>(is)];
        if (w < lo || w > hi) continue;
        const double ds = (avg[static_cast<std::size_t>(is + 1)] - avg[static_cast<std::size_t>(is - 1)]) /
                          (2.0 * wave.hs);
        sum += wave.c * ds;
        ++count;
    }
    return count ? sum / count : 0.0;
}

WaveShapeAudit wave_shape_audit(const waves::PulsatingWave& wave) {
    WaveShapeAudit a;
    a.w_min = std::numeric_limits<double>::infinity();
    a.w_max = -a.w_min;
    a.max_ds = -std::numeric_limits<double>::infinity();
    a.min_dss_below_halfA = std::numeric_limits<double>::infinity();
    for (int is = 0; is < wave.ns; ++is) {
        for (int ix = 0; ix < wave.nx; ++ix) {
            const double w = wave.at(is, ix);
            a.w_min = std::min(a.w_min, w);
            a.w_max = std::max(a.w_max, w);
            if (is == 0 || is + 1 == wave.ns) continue;
            const double wm = wave.at(is - 1, ix), wp = wave.at(is + 1, ix);
            a.max_ds = std::max(a.max_ds, (wp - wm) / (2.0 * wave.hs));
            if (w <= 0.5 * wave.A) {
                const double dss = (wp - 2.0 * w + wm) / (wave.hs * wave.hs);
                a.min_dss_below_halfA = std::min(a.min_dss_below_halfA, dss);
            }
        }
    }
    return a;
}

FrontTrace trace_pulsating_front(const waves::PulsatingWave& wave, double n_periods,
                                 int samples_per_period, double threshold_frac) {
    FrontTrace trace;
    const double period = 1.0 / wave.c;
    const double t_end = n_periods * period;
    const int n = static_cast<int>(n_periods * samples_per_period);
    const double threshold = -threshold_frac * wave.mu0;
    // physical window ahead of the normalized front, wide enough to contain it
    const double x_lo = -2.0, x_hi = wave.c * t_end + 2.0;
    const int nx_phys = static_cast<int>((x_hi - x_lo) / (wave.hs / wave.c) * 1.5);
    for (int j = 0; j <= n; ++j) {
        const double t = t_end * j / n;
        // scan u along x for the descending threshold crossing
        double prev_u = wave.u_physical(t, x_lo);
        double prev_x = x_lo;
        for (int i = 1; i <= nx_phys; ++i) {
            const double x = x_lo + (x_hi - x_lo) * i / nx_phys;
            const double u = wave.u_physical(t, x);
            if (prev_u > threshold && u <= threshold) {
                const double w = (prev_u - threshold) / (prev_u - u);
                trace.times.push_back(t);
                trace.positions.push_back(prev_x + w * (x - prev_x));
                break;
            }
            prev_u = u;
            prev_x = x;
        }
    }
    return trace;
}

}  // namespace shs::diag
