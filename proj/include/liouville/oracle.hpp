#pragma once

#include <array>
#include <functional>
#include <vector>

namespace liouville::oracle {

struct EllipticValues {
    double m = 0;
    double K = 0;
    double E_int = 0;
    /// E(m) - (1 - m) K(m), evaluated without cancellation for small m.
    double E_minus_m1K = 0;
};

/// Complete elliptic integrals by the arithmetic-geometric mean.
/// `m1` = 1 - m is passed separately so that m close to 1 keeps its precision.
EllipticValues elliptic(double m, double m1);
inline EllipticValues elliptic(double m) { return elliptic(m, 1.0 - m); }

enum class PendulumRegion { rotation, libration };

/// Action of H = p^2 + eps cos q.
double pendulum_action(double E, double eps, PendulumRegion region);
double pendulum_dIdE(double E, double eps, PendulumRegion region);

/// Smooth planar Hamiltonian H(p, q) with gradient and Hessian.
struct PlanarHamiltonian {
    std::function<double(double, double)> value;
    /// (H_p, H_q)
    std::function<std::array<double, 2>(double, double)> gradient;
    /// (H_pp, H_pq, H_qq)
    std::function<std::array<double, 3>(double, double)> hessian;
};

PlanarHamiltonian pendulum_hamiltonian(double eps);
PlanarHamiltonian harmonic_hamiltonian(double g);

struct Trajectory {
    std::vector<double> t, p, q;
    double max_energy_drift = 0;
};

/// Fixed-step implicit midpoint integration of qdot = H_p, pdot = -H_q.
Trajectory symplectic_flow(const PlanarHamiltonian& H, std::array<double, 2> z0, double T, double dt,
                           int store_every = 1);

/// One implicit-midpoint step; throws StepRejected if the Newton solve fails.
std::array<double, 2> midpoint_step(const PlanarHamiltonian& H, std::array<double, 2> z, double dt);

/// Return time of q to its initial value (libration, moving with q increasing)
/// or to q0 + 2pi (rotation), located by Hermite interpolation between steps.
double flow_period(const PlanarHamiltonian& H, std::array<double, 2> z0, double dt, bool rotation,
                   double t_max = 1e4);

}  // namespace liouville::oracle
