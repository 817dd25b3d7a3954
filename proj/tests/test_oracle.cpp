#include "liouville/oracle.hpp"

#include "oracle_data.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace liouville;
using doctest::Approx;

TEST_SUITE("oracle") {
    TEST_CASE("elliptic integrals against frozen values") {
        for (const auto& r : frozen()["elliptic"]) {
            const auto v = oracle::elliptic(r["m"].get<double>());
            CHECK(near_rel(v.K, r["K"].get<double>(), 1e-14));
            CHECK(near_rel(v.E_int, r["E"].get<double>(), 1e-14));
        }
    }

    TEST_CASE("E - (1-m)K is accurate for small m") {
        const double m = 1e-9;
        const auto v = oracle::elliptic(m);
        CHECK(v.E_minus_m1K == Approx(std::numbers::pi / 4 * m).epsilon(1e-6));
    }

    TEST_CASE("pendulum action and frequency against frozen values") {
        for (const auto& r : frozen()["pendulum_libration"]) {
            const double E = r["E"];
            CHECK(near_rel(oracle::pendulum_action(E, 1, oracle::PendulumRegion::libration), r["I"], 1e-12));
            CHECK(near_rel(oracle::pendulum_dIdE(E, 1, oracle::PendulumRegion::libration), r["dIdE"], 1e-10));
        }
        for (const auto& r : frozen()["pendulum_rotation"]) {
            const double E = r["E"];
            CHECK(near_rel(oracle::pendulum_action(E, 1, oracle::PendulumRegion::rotation), r["I"], 1e-13));
            CHECK(near_rel(oracle::pendulum_dIdE(E, 1, oracle::PendulumRegion::rotation), r["dIdE"], 1e-12));
        }
    }

    TEST_CASE("rotation action at E = 3") {
        CHECK(oracle::pendulum_action(3, 1, oracle::PendulumRegion::rotation) == Approx(1.7196).epsilon(1e-4));
    }

    TEST_CASE("pendulum action scales with sqrt eps") {
        for (double eps : {0.01, 0.25, 4.0}) {
            CHECK(oracle::pendulum_action(0.3 * eps, eps, oracle::PendulumRegion::libration) ==
                  Approx(std::sqrt(eps) * oracle::pendulum_action(0.3, 1, oracle::PendulumRegion::libration))
                      .epsilon(1e-13));
        }
    }

    TEST_CASE("harmonic flow conserves energy and has period pi/g") {
        const double g = 0.7;
        const auto H = oracle::harmonic_hamiltonian(g);
        const auto tr = oracle::symplectic_flow(H, {0.3, 0.0}, 10.0, 1e-3, 100);
        CHECK(tr.max_energy_drift < 1e-12);
        const double T = oracle::flow_period(H, {0.3, 0.0}, 1e-3, false);
        CHECK(T == Approx(std::numbers::pi / g).epsilon(1e-6));
    }

    TEST_CASE("pendulum flow period matches 2 pi dI/dE") {
        const auto H = oracle::pendulum_hamiltonian(1.0);
        const double E = 0.0;
        const double T = oracle::flow_period(H, {std::sqrt(E + 1), std::numbers::pi}, 1e-3, false);
        const double ref = 2 * std::numbers::pi * oracle::pendulum_dIdE(E, 1, oracle::PendulumRegion::libration);
        CHECK(T == Approx(ref).epsilon(1e-6));
    }
}
