#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace liouville {

using cplx = std::complex<double>;

/// Truncated Fourier series sum_k a_k cos(k t) + b_k sin(k t), k = 0..M.
class PeriodicPotential {
public:
    PeriodicPotential() : a_(1, 0.0), b_(1, 0.0) {}
    /// `sin_coeffs[j]` multiplies sin((j+1) t).
    PeriodicPotential(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

    static PeriodicPotential cosine(double amplitude = 1.0, int k = 1);
    /// Least-squares (DFT) fit of a real periodic function.
    static PeriodicPotential fit(const std::function<double(double)>& f, int degree, int samples);

    int degree() const { return static_cast<int>(a_.size()) - 1; }
    double cos_coeff(int k) const { return k < static_cast<int>(a_.size()) ? a_[k] : 0.0; }
    double sin_coeff(int k) const { return k < static_cast<int>(b_.size()) ? b_[k] : 0.0; }
    std::vector<double> cos_coeffs() const { return a_; }
    std::vector<double> sin_coeffs() const;

    double operator()(double t) const;
    cplx operator()(cplx z) const;
    /// n-th derivative at t, without building a new series.
    double derivative_at(double t, int n) const;
    cplx derivative_at(cplx z, int n) const;
    PeriodicPotential derivative(int n = 1) const;

    /// G(phi + d) - G(phi) evaluated without cancellation for small d.
    double difference(double phi, double d) const;

    double mean() const { return a_[0]; }
    bool zero_mean(double tol = 0.0) const;
    bool is_zero() const;
    /// sup |G| on the lines Im z = +-s (real line when s = 0).
    double sup_on_strip(double s, int samples = 1024) const;

    PeriodicPotential scaled(double c) const;
    PeriodicPotential affine(double scale, double shift) const;
    PeriodicPotential operator+(const PeriodicPotential& o) const;
    PeriodicPotential operator-(const PeriodicPotential& o) const;

private:
    std::vector<double> a_;  // a_[k], k = 0..M
    std::vector<double> b_;  // b_[k], b_[0] = 0
};

enum class CriticalKind { maximum, minimum };

struct CriticalPoint {
    double location = 0;  ///< in [0, 2pi)
    double value = 0;
    CriticalKind kind = CriticalKind::maximum;
};

struct MorseProfile {
    std::vector<CriticalPoint> criticals;  ///< starts at the global maximum
    double beta = 0;
    int n_wells = 0;
    double max_second_derivative = 0;

    /// Unwrapped angle theta_0 <= theta_i < theta_0 + 2pi, with theta_{2N} = theta_0 + 2pi.
    double angle(int i) const;
    double value(int i) const;
    CriticalKind kind(int i) const;
};

struct MorseOptions {
    double tol_root = 1e-9;
    int grid = 4096;
    /// When false, coinciding critical values are tolerated and beta uses
    /// only gaps between neighbouring critical points.
    bool require_distinct = true;
};

std::vector<CriticalPoint> find_critical_points(const PeriodicPotential& G, double tol_root = 1e-9);
/// Cyclic reordering that starts at the global maximum.
std::vector<CriticalPoint> order_from_global_max(std::vector<CriticalPoint> crit);
/// min over the real line of |G'| + |G''|.
double min_morse_gauge(const PeriodicPotential& G, int grid = 4096);
double max_abs_second_derivative(const PeriodicPotential& G, int grid = 4096);
double morse_beta(const PeriodicPotential& G, double tol_root = 1e-9);
MorseProfile analyze_morse(const PeriodicPotential& G, const MorseOptions& opts = {});
double critical_count_bound(const MorseProfile& profile);

struct CosineLikeParams {
    double eta = 0;
    double theta0 = 0;
    double g_hat = 0;
};
/// Throws ZeroFirstHarmonic, or NotCosineLike when g_hat >= 1/4.
CosineLikeParams cosine_like_params(const PeriodicPotential& G, double strip_width = 1.0);

struct AffineMap {
    double scale = 1;
    double shift = 0;
    double operator()(double y) const { return scale * y + shift; }
    double inverse(double v) const { return (v - shift) / scale; }
};

struct UnitRescaling {
    PeriodicPotential V;
    AffineMap L;
    double max_value = 1;
    double min_value = -1;
};
UnitRescaling rescale_to_unit(const PeriodicPotential& G);

struct PhaseShiftOptions {
    int grid = 8192;
    /// Reject w with sup_{T_1}|w - cos| > 2^-10.
    bool enforce_hypothesis = true;
    double normalization_tol = 1e-10;
    /// Half-width of the windows around the extrema that use the square-root continuation.
    double critical_radius = 0.5;
};

struct PhaseShift {
    PeriodicPotential b;
    double g_hat0 = 0;
    bool hypothesis_met = true;
    double residual = 0;        ///< sup over a 10^4-point real grid of |w - cos(x + b)|
    double sup_quarter = 0;     ///< sup over |Im z| = 1/4 of |b|
    double x_max = 0, x_min = 0;
};
PhaseShift phase_shift_b(const PeriodicPotential& w, double tol, const PhaseShiftOptions& opts = {});

}  // namespace liouville
