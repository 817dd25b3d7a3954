#include "liouville/oracle.hpp"

#include "liouville/errors.hpp"

#include <cmath>
#include <numbers>

namespace liouville::oracle {

EllipticValues elliptic(double m, double m1) {
    if (!(m >= 0 && m1 > 0)) fail("OutOfWindow", "elliptic parameter outside [0, 1)");
    EllipticValues v;
    v.m = m;
    double a = 1.0, b = std::sqrt(m1);
    // c_1 = (1 - sqrt(m1))/2 written without cancellation
    double c = m / (2.0 * (1.0 + b));
    double pow2 = 1.0, sum = 0.0;
    for (int n = 1; n < 64; ++n) {
        double an = 0.5 * (a + b);
        double bn = std::sqrt(a * b);
        // c_n = (a_{n-1} - b_{n-1})/2 carried in from the previous step
        sum += pow2 * c * c;
        pow2 *= 2.0;
        a = an;
        b = bn;
        double cn = c * c / (4.0 * 0.5 * (a + b));
        if (std::abs(c) <= 1e-17 * a) break;
        c = cn;
    }
    v.K = std::numbers::pi / (2.0 * a);
    v.E_minus_m1K = v.K * (0.5 * m - sum);
    v.E_int = v.K * (1.0 - 0.5 * m - sum);
    return v;
}

double pendulum_action(double E, double eps, PendulumRegion region) {
    if (region == PendulumRegion::rotation) {
        if (!(E > eps)) fail("OutOfWindow", "rotation requires E > eps");
        auto ev = elliptic(2.0 * eps / (E + eps), (E - eps) / (E + eps));
        return 2.0 / std::numbers::pi * std::sqrt(E + eps) * ev.E_int;
    }
    if (!(E >= -eps && E < eps)) fail("OutOfWindow", "libration requires -eps <= E < eps");
    auto ev = elliptic((E + eps) / (2.0 * eps), (eps - E) / (2.0 * eps));
    return 4.0 * std::sqrt(2.0 * eps) / std::numbers::pi * ev.E_minus_m1K;
}

double pendulum_dIdE(double E, double eps, PendulumRegion region) {
    if (region == PendulumRegion::rotation) {
        if (!(E > eps)) fail("OutOfWindow", "rotation requires E > eps");
        auto ev = elliptic(2.0 * eps / (E + eps), (E - eps) / (E + eps));
        return ev.K / (std::numbers::pi * std::sqrt(E + eps));
    }
    if (!(E >= -eps && E < eps)) fail("OutOfWindow", "libration requires -eps <= E < eps");
    auto ev = elliptic((E + eps) / (2.0 * eps), (eps - E) / (2.0 * eps));
    return std::numbers::sqrt2 * ev.K / (std::numbers::pi * std::sqrt(eps));
}

PlanarHamiltonian pendulum_hamiltonian(double eps) {
    PlanarHamiltonian H;
    H.value = [eps](double p, double q) { return p * p + eps * std::cos(q); };
    H.gradient = [eps](double p, double q) { return std::array<double, 2>{2 * p, -eps * std::sin(q)}; };
    H.hessian = [eps](double, double q) { return std::array<double, 3>{2.0, 0.0, -eps * std::cos(q)}; };
    return H;
}

PlanarHamiltonian harmonic_hamiltonian(double g) {
    PlanarHamiltonian H;
    H.value = [g](double p, double q) { return p * p + g * g * q * q; };
    H.gradient = [g](double p, double q) { return std::array<double, 2>{2 * p, 2 * g * g * q}; };
    H.hessian = [g](double, double) { return std::array<double, 3>{2.0, 0.0, 2 * g * g}; };
    return H;
}

std::array<double, 2> midpoint_step(const PlanarHamiltonian& H, std::array<double, 2> z, double dt) {
    const double h = 0.5 * dt;
    // explicit Euler half step as the initial guess for the midpoint
    auto g0 = H.gradient(z[0], z[1]);
    double mp = z[0] - h * g0[1], mq = z[1] + h * g0[0];
    for (int it = 0; it < 30; ++it) {
        auto g = H.gradient(mp, mq);
        auto hs = H.hessian(mp, mq);
        double f1 = mp - z[0] + h * g[1];
        double f2 = mq - z[1] - h * g[0];
        // Jacobian of (f1, f2) with respect to (mp, mq)
        double j11 = 1 + h * hs[1], j12 = h * hs[2];
        double j21 = -h * hs[0], j22 = 1 - h * hs[1];
        double det = j11 * j22 - j12 * j21;
        double dp = (f1 * j22 - f2 * j12) / det;
        double dq = (j11 * f2 - j21 * f1) / det;
        mp -= dp;
        mq -= dq;
        if (std::abs(dp) + std::abs(dq) <= 1e-16 * (1 + std::abs(mp) + std::abs(mq)))
            return {2 * mp - z[0], 2 * mq - z[1]};
    }
    auto g = H.gradient(mp, mq);
    double f1 = mp - z[0] + h * g[1], f2 = mq - z[1] - h * g[0];
    if (std::abs(f1) + std::abs(f2) > 1e-13 * (1 + std::abs(mp) + std::abs(mq)))
        fail("StepRejected", "implicit midpoint Newton solve failed");
    return {2 * mp - z[0], 2 * mq - z[1]};
}

Trajectory symplectic_flow(const PlanarHamiltonian& H, std::array<double, 2> z0, double T, double dt,
                           int store_every) {
    if (!(dt > 0) || dt > T / 1000 * (1 + 1e-12)) throw ConfigError("InvalidArgument", "dt must satisfy 0 < dt <= T/1000");
    Trajectory tr;
    const long steps = std::lround(T / dt);
    const double E0 = H.value(z0[0], z0[1]);
    auto z = z0;
    tr.t.push_back(0);
    tr.p.push_back(z[0]);
    tr.q.push_back(z[1]);
    for (long k = 1; k <= steps; ++k) {
        z = midpoint_step(H, z, dt);
        tr.max_energy_drift = std::max(tr.max_energy_drift, std::abs(H.value(z[0], z[1]) - E0));
        if (k % store_every == 0 || k == steps) {
            tr.t.push_back(k * dt);
            tr.p.push_back(z[0]);
            tr.q.push_back(z[1]);
        }
    }
    return tr;
}

double flow_period(const PlanarHamiltonian& H, std::array<double, 2> z0, double dt, bool rotation, double t_max) {
    const double target = rotation ? 2 * std::numbers::pi : 0.0;
    auto z = z0;
    double t = 0;
    double s_prev = 0;
    bool left = false;
    const long max_steps = std::lround(t_max / dt);
    for (long k = 1; k <= max_steps; ++k) {
        auto zn = midpoint_step(H, z, dt);
        double s_now = zn[1] - z0[1];
        double sign = rotation ? (H.gradient(z0[0], z0[1])[0] > 0 ? 1.0 : -1.0) : 1.0;
        double a = sign * s_prev - target, b = sign * s_now - target;
        if (!rotation && a < 0) left = true;
        if ((rotation || left) && a < 0 && b >= 0) {
            // cubic Hermite in t for s(t) with slopes qdot = H_p
            double v0 = sign * H.gradient(z[0], z[1])[0] * dt;
            double v1 = sign * H.gradient(zn[0], zn[1])[0] * dt;
            auto herm = [&](double u) {
                double u2 = u * u, u3 = u2 * u;
                return (2 * u3 - 3 * u2 + 1) * a + (u3 - 2 * u2 + u) * v0 + (-2 * u3 + 3 * u2) * b +
                       (u3 - u2) * v1;
            };
            double lo = 0, hi = 1;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                (herm(mid) < 0 ? lo : hi) = mid;
            }
            return t + 0.5 * (lo + hi) * dt;
        }
        s_prev = s_now;
        z = zn;
        t += dt;
    }
    fail("NoConvergence", "flow did not return within t_max");
}

}  // namespace liouville::oracle
