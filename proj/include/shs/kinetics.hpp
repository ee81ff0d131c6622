#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace shs::kinetics {

enum class ScalingKind { MatkowskySivashinsky, Threshold };

// Scaling parameters of the stiff reaction rate g_eps. epsilon plays the role
// of the inverse activation energy; the two kinds correspond to the two
// reductions of the original variables to (u, v).
struct ScalingParams {
    double epsilon = 0.1;
    double sigma = 0.0;        // heat-release parameter, in [0,1)
    double kappa_eps = 0.0;    // threshold scaling only, must be > 0 there
    double theta_bar = 0.5;    // ignition threshold, in (0,1)
    ScalingKind scaling_kind = ScalingKind::MatkowskySivashinsky;

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("kinetics: epsilon must be positive");
        if (!(sigma >= 0.0 && sigma < 1.0))
            throw std::invalid_argument("kinetics: sigma must lie in [0,1)");
        if (!(theta_bar > 0.0 && theta_bar < 1.0))
            throw std::invalid_argument("kinetics: theta_bar must lie in (0,1)");
        if (scaling_kind == ScalingKind::Threshold && !(kappa_eps > 0.0))
            throw std::invalid_argument("kinetics: threshold scaling requires kappa > 0");
    }
};

// g(z) = exp((1 - 1/(z+1))/eps) for z > -1, zero at and below z = -1.
double g_eps_ms(double z, const ScalingParams& p);

// g(z) = exp((z/(kappa z + 1))/eps) for z > theta_bar - 1, zero below.
double g_eps_threshold(double z, const ScalingParams& p);

double g_eps(double z, const ScalingParams& p);

// Lipschitz truncation of the ignition indicator: supported on [0,A],
// identically 1 on [1/M, A/2], concave monotone ramp on the left, smooth
// monotone descent on the right.
struct TruncationParams {
    double M = 0.0;
    double A = 0.0;
    double inner_flat_lo = 0.0;  // 1/M
    double inner_flat_hi = 0.0;  // A/2
    bool degenerate_plateau = false;  // 1/M >= A/2: the flat interval collapses

    TruncationParams() = default;
    TruncationParams(double M_, double A_);
    // strict form of the shape invariant 0 < 1/M < A/2 < A < M
    void require_plateau() const;
};

double g_M_regularized(double z, const TruncationParams& t);

// Numerical verification of the asymptotic assumptions on g_eps over a
// decreasing epsilon sequence: sup over K_neg of g_eps/eps must trend to 0,
// and inf over K_pos of min(g_eps, c_K) must trend to c_K.
struct AssumptionReport {
    std::vector<double> eps_values;
    std::vector<double> sup_ratio_neg;   // max over K_neg of g_eps/eps
    std::vector<double> inf_clipped_pos; // min over K_pos of min(g_eps, c_K)
    double c_K = 1.0;
    double growth_bound = 0.0;           // sup of g_eps over the sampled grid (largest eps)
    std::string verdict;                 // "pass", "fail", or "vacuous"
};

AssumptionReport check_assumptions(ScalingKind kind, const std::vector<double>& eps_sequence,
                                   double kneg_lo, double kneg_hi, double kpos_lo, double kpos_hi,
                                   double c_K = 1.0, int grid_points = 10000,
                                   double sigma = 0.0, double kappa = 0.5, double theta_bar = 0.5);

}  // namespace shs::kinetics
