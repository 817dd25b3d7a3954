#pragma once

#include "liouville/standard_form.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace liouville {

enum class RegionKind { lower_rotation, libration, annulus, upper_rotation };
RegionKind region_kind(int i, int n_wells);
std::string region_label(RegionKind k);

struct EnergyWindow {
    double E_minus = 0;
    double E_plus = 0;
    int region = 0;
    int minus_anchor = -1;  ///< critical index realising E_minus
    int plus_anchor = -1;   ///< critical index realising E_plus, -1 for the rotation cap
};

/// Window of region i. `reference` supplies the unperturbed energies used by the j-/j+ rule.
EnergyWindow energy_window(int i, const CriticalSet& crit, const CriticalSet& reference, double rotation_cap);
EnergyWindow energy_window(int i, const ContinuedCriticals& crit, const std::vector<double>& p_hat,
                           const StandardCharacteristics& chars);

/// Turning points of a well (theta_left_max, theta_min, theta_right_max) of G at level E.
std::pair<double, double> turning_points(double E, double theta_left_max, double theta_min, double theta_right_max,
                                         const PeriodicPotential& G);

/// P solving P sqrt(1 + nu(P)) = z by the contraction P~ -> ((1+nu(z+P~))^{-1/2} - 1) z.
cplx momentum_branch(cplx z, const NuSlice::At& nu);
cplx momentum_branch(cplx z, double q1, const std::vector<double>& p_hat, const StandardFormHamiltonian& H);

/// G with G(v) = g(sqrt v): even-power series near 0, principal square root elsewhere.
class EvenSqrtComposition {
public:
    EvenSqrtComposition(std::function<cplx(cplx)> g, double radius, int samples = 64);
    cplx operator()(cplx v) const;
    cplx series(cplx v) const;
    const std::vector<cplx>& even_coeffs() const { return coeffs_; }
    double radius() const { return r_; }

private:
    std::function<cplx(cplx)> g_;
    double r_;
    std::vector<cplx> coeffs_;
};

EvenSqrtComposition even_sqrt_compose(std::function<cplx(cplx)> g, double radius);

/// Energy level E = E_anchor + offset, kept exact near a critical energy.
struct Level {
    double E = 0;
    int anchor = -1;
    double offset = 0;
};

struct ActionMapOptions {
    double quad_tol = 1e-13;
    /// Energy unit used for z = |E - E_c|/scale; defaults to chars.eps when <= 0.
    double energy_scale = 0;
    double richardson_step = 1e-4;
};

class ActionMap {
public:
    ActionMap(const StandardFormHamiltonian& H, const std::vector<double>& p_hat = {},
              const ActionMapOptions& opts = {});
    ActionMap(const StandardFormHamiltonian& H, const ContinuedCriticals& cc, const std::vector<double>& p_hat,
              const ActionMapOptions& opts = {});
    /// Bare slice: potential, nu and ordered criticals.
    ActionMap(PeriodicPotential G, NuSlice nu, CriticalSet crit, CriticalSet reference, double rotation_cap,
              const ActionMapOptions& opts = {});

    int n_wells() const { return crit_.n_wells(); }
    int n_regions() const { return 2 * n_wells() + 1; }
    RegionKind kind(int i) const { return region_kind(i, n_wells()); }
    const CriticalSet& criticals() const { return crit_; }
    const PeriodicPotential& potential() const { return G_; }
    const NuSlice& nu() const { return nu_; }
    double energy_scale() const { return scale_; }
    EnergyWindow window(int i) const;
    double lambda_max() const;

    Level level(double E) const { return Level{E, -1, 0}; }
    /// E = E_plus - scale*z anchored at the critical realising E_plus.
    Level near_plus(int i, double z) const;
    /// E = E_minus + scale*z.
    Level near_minus(int i, double z) const;

    double action(int i, const Level& L) const;
    double dIdE(int i, const Level& L) const;
    double d2IdE2(int i, const Level& L) const;
    double action(int i, double E) const { return action(i, level(E)); }
    double dIdE(int i, double E) const { return dIdE(i, level(E)); }
    double d2IdE2(int i, double E) const { return d2IdE2(i, level(E)); }
    double period(int i, double E) const;
    double energy_of_action(int i, double I) const;

    std::pair<double, double> turning_points(int i, const Level& L) const;
    /// Critical indices whose saddle the level curve passes as the edge is approached, with multiplicity.
    std::vector<int> separatrix_passages(int i, bool plus_edge) const;

private:
    enum class Quantity { action, dIdE, d2IdE2 };
    double integrate(int i, const Level& L, Quantity q) const;
    double delta(const Level& L, int c) const;
    double root_between(const Level& L, int c1, int c2) const;
    void check_window(int i, const Level& L) const;

    PeriodicPotential G_;
    NuSlice nu_;
    CriticalSet crit_;
    CriticalSet reference_;
    double cap_ = 0;
    double scale_ = 1;
    ActionMapOptions opts_;
};

struct ActionSample {
    double E = 0, I = 0, dIdE = 0, T = 0;
};

struct ActionTable {
    int region = 0;
    std::vector<double> p_hat;
    std::vector<ActionSample> samples;
    double quad_tol = 0;
    std::string orientation;
};

/// Parallel over samples with `threads` workers; order of samples follows `energies`.
ActionTable make_action_table(const ActionMap& map, int i, const std::vector<double>& energies,
                              const std::vector<double>& p_hat = {}, int threads = 1);

struct RegionDomain {
    int region = 0;
    double a_minus = 0;
    double a_plus = 0;
};

std::vector<RegionDomain> region_domains(double lambda, const ActionMap& map);

/// 2 pi meas(D^) sum_i sup_{p_hat}(a+(0) - a+(lambda) + a-(lambda) - a-(0)).
double measure_deficit(double lambda, const StandardFormHamiltonian& H, const ActionMapOptions& opts = {},
                       int points_per_dim = 9);

}  // namespace liouville
