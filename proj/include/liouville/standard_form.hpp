#pragma once

#include "liouville/potential.hpp"
#include "liouville/taylor_fourier.hpp"

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace liouville {

struct StandardCharacteristics {
    std::vector<std::array<double, 2>> hat_domain;  ///< box [lo, hi] per adiabatic parameter
    double R0 = 1;
    double r0 = 1;
    double s0 = 1;
    double beta = 1;
    double eps = 1;
    double mu = 0;
    double kappa = 4;

    int dim_p_hat() const { return static_cast<int>(hat_domain.size()); }
    double hat_measure() const;
    std::vector<double> hat_center() const;
};

double kappa_of(const StandardCharacteristics& chars);

/// Characteristics derived from G0: eps = sup_{T_s0}|G0|, beta from the Morse
/// profile and R0 = r0 = 2^8 sqrt(eps), the smallest radius allowed by the eps-bound.
StandardCharacteristics characteristics_for(const PeriodicPotential& G0, double s0 = 1.0, double mu = 0.0,
                                            std::vector<std::array<double, 2>> hat_domain = {});

struct StandardFormHamiltonian {
    std::shared_ptr<const NuFunction> nu;
    std::shared_ptr<const PotentialFamily> G;
    PeriodicPotential G0;
    StandardCharacteristics chars;

    int dim_p_hat() const { return chars.dim_p_hat(); }
    double value(double p1, const std::vector<double>& p_hat, double q) const;
};

/// H = (1 + nu(q)) p^2 + G0(q) with nu independent of p.
StandardFormHamiltonian make_standard_form(const PeriodicPotential& G0, const PeriodicPotential& nu = {},
                                           double s0 = 1.0);
/// Pendulum G0 = eps cos q, nu = 0.
StandardFormHamiltonian pendulum(double eps);

struct SamplingSpec {
    int theta_points = 1024;
    int p1_points = 64;
    int p_hat_points = 9;
};

struct ValidationReport {
    double sup_nu = 0;
    double sup_G_minus_G0_over_eps = 0;
    double sup_G0 = 0;
    double mu_measured = 0;
    double min_re_one_plus_nu = 0;
    double beta_measured = 0;
    bool morse_ok = false;
    double kappa = 0;
    std::vector<std::string> failures;
    bool valid() const { return failures.empty(); }
};

ValidationReport validate_standard_form(const StandardFormHamiltonian& H, const SamplingSpec& grid = {});

/// p_hat samples on the tensor grid of the box, `points` per dimension.
std::vector<std::vector<double>> hat_grid(const StandardCharacteristics& chars, int points);

// ---------------------------------------------------------------- standardize

struct StandardizeResult {
    StandardFormHamiltonian H;
    std::function<double(const std::vector<double>&)> u;
    std::function<double(const std::vector<double>&, double)> v;
    std::function<double(const std::vector<double>&)> g;
    double g0 = 0;
    double rho = 0;
    /// Largest perturbation in a doubling ladder for which the v-Newton converged with |v| <= rho/4.
    double eps_threshold = 0;
};

struct StandardizeOptions {
    double r = 1;  ///< analyticity radius of h, f in p
    double s = 1;  ///< strip half-width of f
    int fourier_degree = 48;
    int fourier_samples = 192;
};

/// `h` is a table in p (its coefficients must be constant in q), `f` a table in (p, q1).
StandardizeResult standardize(const TaylorFourier& h, const TaylorFourier& f, const std::vector<double>& p0,
                              double eps_pert, const StandardizeOptions& opts = {});

// ---------------------------------------------------------------- continuation

/// Critical points at one p_hat, unwrapped so theta(0) < ... < theta(2N) = theta(0) + 2pi.
struct CriticalSet {
    std::vector<double> theta;
    std::vector<double> energy;
    std::vector<CriticalKind> kind;

    int n_wells() const { return static_cast<int>(theta.size()) / 2; }
    double angle(int i) const;
    double value(int i) const;
    bool is_max(int i) const;
};

CriticalSet critical_set(const MorseProfile& profile);

class ContinuedCriticals {
public:
    ContinuedCriticals(const StandardFormHamiltonian& H, MorseProfile reference);

    /// Contraction seeded at the reference points followed by Newton polish.
    CriticalSet at(const std::vector<double>& p_hat) const;
    const MorseProfile& reference() const { return reference_; }

    struct Sample {
        std::vector<double> p_hat;
        CriticalSet set;
        double max_theta_shift = 0;
        double max_energy_shift = 0;
        double max_residual = 0;
    };
    std::vector<Sample> samples;
    double theta_bound = 0;
    double energy_bound = 0;
    bool bounds_ok = true;

private:
    StandardFormHamiltonian H_;
    MorseProfile reference_;
};

struct ContinuationOptions {
    int points_per_dim = 9;
    bool require_distinct = true;
};

ContinuedCriticals continue_critical_points(const StandardFormHamiltonian& H, const ContinuationOptions& opts = {});

}  // namespace liouville
