#include "shs/kinetics.hpp"

#include <algorithm>
#include <limits>

namespace shs::kinetics {

double g_eps_ms(double z, const ScalingParams& p) {
    if (!std::isfinite(z)) throw std::domain_error("g_eps_ms: non-finite temperature offset");
    if (p.scaling_kind != ScalingKind::MatkowskySivashinsky)
        throw std::invalid_argument("g_eps_ms: params carry a different scaling kind");
    if (z <= -1.0) return 0.0;
    return std::exp((1.0 - 1.0 / (z + 1.0)) / p.epsilon);
}

double g_eps_threshold(double z, const ScalingParams& p) {
    if (!std::isfinite(z)) throw std::domain_error("g_eps_threshold: non-finite temperature offset");
    if (p.scaling_kind != ScalingKind::Threshold)
        throw std::invalid_argument("g_eps_threshold: params carry a different scaling kind");
    if (z <= p.theta_bar - 1.0) return 0.0;
    const double denom = p.kappa_eps * z + 1.0;
    if (denom <= 0.0)
        throw std::domain_error("g_eps_threshold: kappa*z + 1 <= 0 inside the active branch");
    return std::exp((z / denom) / p.epsilon);
}

double g_eps(double z, const ScalingParams& p) {
    return p.scaling_kind == ScalingKind::MatkowskySivashinsky ? g_eps_ms(z, p)
                                                               : g_eps_threshold(z, p);
}

TruncationParams::TruncationParams(double M_, double A_) : M(M_), A(A_) {
    if (!(M > 0.0)) throw std::invalid_argument("truncation: M must be positive");
    if (!(A > 0.0 && A < M)) throw std::invalid_argument("truncation: need 0 < A < M");
    inner_flat_lo = 1.0 / M;
    inner_flat_hi = 0.5 * A;
    degenerate_plateau = !(inner_flat_lo < inner_flat_hi);
}

void TruncationParams::require_plateau() const {
    if (degenerate_plateau)
        throw std::invalid_argument(
            "truncation: 1/M >= A/2, no flat interval (M too small for this velocity)");
}

double g_M_regularized(double z, const TruncationParams& t) {
    if (z <= 0.0 || z >= t.A) return 0.0;
    const double b = std::min(t.inner_flat_lo, t.inner_flat_hi);  // end of the left ramp
    const double half = t.inner_flat_hi;
    if (z < b) {
        // concave quadratic ramp with zero slope at the plateau end
        const double s = z / b;
        return s * (2.0 - s);
    }
    if (z <= half) return 1.0;
    // cubic descent with zero slope at both ends
    const double tau = (z - half) / (t.A - half);
    return 1.0 - tau * tau * (3.0 - 2.0 * tau);
}

AssumptionReport check_assumptions(ScalingKind kind, const std::vector<double>& eps_sequence,
                                   double kneg_lo, double kneg_hi, double kpos_lo, double kpos_hi,
                                   double c_K, int grid_points, double sigma, double kappa,
                                   double theta_bar) {
    AssumptionReport rep;
    rep.c_K = c_K;
    if (eps_sequence.empty()) {
        rep.verdict = "vacuous";
        return rep;
    }
    if (!(kneg_lo <= kneg_hi && kneg_hi < 0.0))
        throw std::domain_error("check_assumptions: K_neg must be a compact subset of (-inf,0)");
    if (!(kpos_lo > 0.0 && kpos_lo <= kpos_hi))
        throw std::domain_error("check_assumptions: K_pos must be a compact subset of (0,inf)");
    for (std::size_t i = 1; i < eps_sequence.size(); ++i)
        if (!(eps_sequence[i] < eps_sequence[i - 1]))
            throw std::invalid_argument("check_assumptions: eps sequence must be strictly decreasing");
    for (double e : eps_sequence)
        if (!(e > 0.0)) throw std::invalid_argument("check_assumptions: eps must be positive");

    const int n = std::max(grid_points, 2);
    for (double e : eps_sequence) {
        ScalingParams p;
        p.epsilon = e;
        p.sigma = sigma;
        p.kappa_eps = kappa;
        p.theta_bar = theta_bar;
        p.scaling_kind = kind;
        double sup_neg = 0.0;
        for (int i = 0; i < n; ++i) {
            const double z = kneg_lo + (kneg_hi - kneg_lo) * i / (n - 1);
            sup_neg = std::max(sup_neg, g_eps(z, p) / e);
        }
        double inf_pos = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double z = kpos_lo + (kpos_hi - kpos_lo) * i / (n - 1);
            inf_pos = std::min(inf_pos, std::min(g_eps(z, p), c_K));
        }
        rep.eps_values.push_back(e);
        rep.sup_ratio_neg.push_back(sup_neg);
        rep.inf_clipped_pos.push_back(inf_pos);
    }
    {
        // growth bound of the largest-eps member over a wide sample, recorded
        // because the linear-growth constant is never enforced
        ScalingParams p;
        p.epsilon = eps_sequence.front();
        p.sigma = sigma;
        p.kappa_eps = kappa;
        p.theta_bar = theta_bar;
        p.scaling_kind = kind;
        double gmax = 0.0;
        for (int i = 0; i < n; ++i) {
            const double z = -2.0 + 12.0 * i / (n - 1);
            gmax = std::max(gmax, g_eps(z, p));
        }
        rep.growth_bound = gmax;
    }
    if (eps_sequence.size() == 1) {
        rep.verdict = "vacuous";
        return rep;
    }
    bool ok = true;
    for (std::size_t i = 1; i < eps_sequence.size(); ++i) {
        if (!(rep.sup_ratio_neg[i] < rep.sup_ratio_neg[i - 1]) &&
            rep.sup_ratio_neg[i - 1] > 0.0)
            ok = false;
        if (rep.inf_clipped_pos[i] + 1e-15 < rep.inf_clipped_pos[i - 1]) ok = false;
    }
    rep.verdict = ok ? "pass" : "fail";
    return rep;
}

}  // namespace shs::kinetics
