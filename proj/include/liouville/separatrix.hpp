#pragma once

#include "liouville/action_map.hpp"

#include <functional>
#include <string>
#include <vector>

namespace liouville {

/// plus: E = E_plus - scale*z (from below); minus: E = E_minus + scale*z (from above).
enum class Branch { plus, minus };
std::string branch_label(Branch b);
Branch parse_branch(const std::string& s);

/// z = 2^-k for k = k_min..k_max with `per_octave` points per factor two, ascending in z.
std::vector<double> dyadic_grid(int k_min, int k_max, int per_octave = 1);

/// Dyadic grid clipped to z <= Z/4, Z the window width in units of the energy scale.
std::vector<double> branch_grid(const ActionMap& map, int region, int k_min = 4, int k_max = 26, int per_octave = 2);

struct SingularSamples {
    int region = 0;
    Branch branch = Branch::plus;
    double eps = 1;
    std::vector<double> z;
    std::vector<double> I;
};

SingularSamples singular_samples(const ActionMap& map, int region, Branch branch, const std::vector<double>& z);

struct SingularRep {
    int region = 0;
    Branch branch = Branch::plus;
    std::vector<double> phi;  ///< phi(z) = sum phi[k] z^k
    std::vector<double> psi;  ///< psi(z) = sum psi[k] z^k, multiplying z ln z
    double radius = 0;
    double eps = 1;
    double fit_residual = 0;
    int degree = 0;

    double phi_at(double z) const;
    double psi_at(double z) const;
    double value(double z) const;
    double phi0() const { return phi.empty() ? 0.0 : phi[0]; }
    double psi0() const { return psi.empty() ? 0.0 : psi[0]; }
};

struct FitOptions {
    int degree = 6;
    /// +1, -1 or 0 (psi identically zero); anything else skips the sign check.
    int expected_sign = 2;
    /// Validity radius recorded on the result, normally 1/C_hat.
    double radius = 0;
    double max_condition = 1e13;
};

/// Least squares in {z^k} u {z^{k+1} ln z}, k = 0..d, with column scaling and pivoted QR.
/// Falls back to lower degree on IllConditionedFit.
SingularRep fit_singular_rep(const SingularSamples& s, const FitOptions& opts = {});

/// +1 when the level curve reaches a saddle from inside, -1 from outside, 0 at a minimum.
int expected_psi_sign(const ActionMap& map, int region, Branch branch);

/// eps / (4 pi g).
double psi_zero_prediction(double g, double eps);

/// Hyperbolic rate g = sqrt(1 + nu(0, theta_c)) sqrt(|G''(theta_c)|/2) at critical index c of the map.
double critical_rate(const ActionMap& map, int c);

/// Signed sum of eps/(4 pi g_k) over the saddle passages of the branch.
double psi_zero_from_passages(const ActionMap& map, int region, Branch branch);

/// phi(z) + psi(z) z Log z, principal branch. Throws BranchCut on the closed negative axis.
cplx complex_action_eval(const SingularRep& rep, cplx z);

struct BoundsReport {
    double min_scaled_derivative = 0;  ///< inf dIdE*sqrt(eps) (interior) or dIdE*sqrt(E+eps) (rotation)
    double slope = 0;                  ///< least-squares slope of dIdE against |ln z|
    double slope_expected = 0;         ///< |psi(0)|/eps
    double max_asymptote_gap = 0;      ///< sup |dIdE - slope_expected |ln z||
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

struct BoundsOptions {
    double c_emp = 0;
    int samples = 100;
    int slope_k_min = 8;
    int slope_k_max = 22;
    double slope_tol = 0.02;
    bool throw_on_violation = false;
};

/// Lower bounds on dIdE over the window of `region` and the |ln z| slope near the branch edge.
BoundsReport check_derivative_bounds(const ActionMap& map, int region, const SingularRep& rep,
                                     const BoundsOptions& opts = {});

struct DriftReport {
    double lambda = 0;
    double mu = 0;
    double max_dIdE_diff = 0;
    double scaled = 0;  ///< max_dIdE_diff * lambda * sqrt(eps) / mu
    double max_phi_diff = 0;
    double max_psi_diff = 0;
    bool in_regime = true;  ///< C_hat*mu <= lambda <= 1/C_hat
};

/// Compares dIdE of two maps with the same criticals on the lambda-shrunk real windows.
DriftReport perturbation_drift(const ActionMap& perturbed, const ActionMap& reference, double mu, double lambda,
                               double C_hat = 0, int points = 40);

struct AnalyticityWindow {
    double lambda = 0;
    double rho = 0;
    double sigma = 0;
    double lambda_hat = 0;
};

AnalyticityWindow analyticity_window(double lambda, double eps, double C_hat);

struct RadiusProbe {
    double center = 0;
    double half_width = 0;
    double bernstein = 1;  ///< decay ratio r of the Chebyshev coefficients
    double radius = 0;     ///< semi-minor axis h (r - 1/r)/2 of the Bernstein ellipse
    std::vector<double> coeffs;
};

/// Chebyshev coefficients of f on [center - h, center + h] and the implied analyticity radius.
RadiusProbe chebyshev_radius(const std::function<double(double)>& f, double center, double half_width,
                             int samples = 64);

struct HessianReport {
    double max_first_ratio = 0;   ///< sup |dE/dI| / sqrt(eps + |E|)
    double max_second = 0;        ///< sup |d2E/dI2| from second differences
    double max_second_scaled = 0; ///< max_second * lambda_hat
    double max_identity_gap = 0;  ///< relative gap to -I''/I'^3
};

/// E(I) sampled on the lambda-shrunk action interval of `region`.
HessianReport hessian_bounds(const ActionMap& map, int region, const AnalyticityWindow& window, int points = 24);

}  // namespace liouville
