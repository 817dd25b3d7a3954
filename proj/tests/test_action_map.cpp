#include "liouville/action_map.hpp"
#include "liouville/errors.hpp"
#include "liouville/oracle.hpp"

#include "oracle_data.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace liouville;
using doctest::Approx;

namespace {
const double pi = std::numbers::pi;

ActionMap pendulum_map(double eps = 1.0) {
    ActionMapOptions o;
    o.energy_scale = eps;
    return ActionMap(pendulum(eps), {}, o);
}
}  // namespace

TEST_SUITE("action_map") {
    TEST_CASE("region labels") {
        CHECK(region_kind(0, 1) == RegionKind::lower_rotation);
        CHECK(region_kind(1, 1) == RegionKind::libration);
        CHECK(region_kind(2, 1) == RegionKind::upper_rotation);
        CHECK(region_kind(2, 2) == RegionKind::annulus);
        CHECK(region_kind(4, 2) == RegionKind::upper_rotation);
    }

    TEST_CASE("pendulum windows") {
        const auto m = pendulum_map();
        CHECK(m.n_regions() == 3);
        CHECK(m.window(1).E_minus == -1.0);
        CHECK(m.window(1).E_plus == 1.0);
        const double R0 = 256.0 * std::sqrt(std::cosh(1.0));
        for (int i : {0, 2}) {
            CHECK(m.window(i).E_minus == 1.0);
            CHECK(m.window(i).E_plus == Approx(R0 * R0 + R0 * R0).epsilon(1e-10));
        }
    }

    TEST_CASE("two-well windows follow the j-/j+ rule") {
        const auto m = ActionMap(make_standard_form(PeriodicPotential({0, 1, 0.3}, {0, 0})));
        REQUIRE(m.n_regions() == 5);
        const auto& c = m.criticals();
        for (int i : {1, 3}) {
            CHECK(m.window(i).E_minus == Approx(c.value(i)).epsilon(1e-13));
            CHECK(m.window(i).E_plus == Approx(-0.7).epsilon(1e-13));
        }
        CHECK(m.window(2).E_minus == Approx(-0.7).epsilon(1e-13));
        CHECK(m.window(2).E_plus == Approx(1.3).epsilon(1e-13));
        CHECK(m.window(0).E_minus == Approx(1.3).epsilon(1e-13));
    }

    TEST_CASE("turning points of the cosine well") {
        const auto G = PeriodicPotential::cosine();
        auto tp = turning_points(0.0, 0, pi, 2 * pi, G);
        CHECK(tp.first == Approx(pi / 2).epsilon(1e-13));
        CHECK(tp.second == Approx(3 * pi / 2).epsilon(1e-13));
        const double E = -1 + 1e-6;
        tp = turning_points(E, 0, pi, 2 * pi, G);
        CHECK(tp.first + tp.second == Approx(2 * pi).epsilon(1e-13));
        CHECK(pi - tp.first == Approx(std::acos(-E)).epsilon(1e-9));
        CHECK_THROWS_WITH_AS(turning_points(-1.0, 0, pi, 2 * pi, G), doctest::Contains("OutOfWindow"), Error);
    }

    TEST_CASE("momentum branch") {
        NuSlice::At zero;
        CHECK(std::abs(momentum_branch(cplx(0.3, 0.1), zero) - cplx(0.3, 0.1)) < 1e-15);
        NuSlice::At c{{0.2}};
        const cplx z(0.4, -0.05);
        CHECK(std::abs(momentum_branch(z, c) - z / std::sqrt(1.2)) < 1e-13);
    }

    TEST_CASE("even square-root composition") {
        auto sq = even_sqrt_compose([](cplx z) { return z * z; }, 1.0);
        CHECK(std::abs(sq(cplx(0.3, 0.2)) - cplx(0.3, 0.2)) < 1e-13);
        auto c = even_sqrt_compose([](cplx z) { return std::cos(z); }, 1.0);
        CHECK(std::real(c(0.25)) == Approx(0.877582561890373).epsilon(1e-13));
        CHECK(std::real(c.series(0.25)) == Approx(0.877582561890373).epsilon(1e-12));
        CHECK_THROWS_WITH_AS(even_sqrt_compose([](cplx z) { return z * z * z; }, 1.0), doctest::Contains("NotEven"),
                             Error);
    }

    TEST_CASE("action and frequency against frozen values") {
        const auto m = pendulum_map();
        for (const auto& r : frozen()["pendulum_libration"]) {
            const double E = r["E"];
            CHECK(near_rel(m.action(1, E), r["I"], 1e-12));
            CHECK(near_rel(m.dIdE(1, E), r["dIdE"], 1e-10));
        }
        for (const auto& r : frozen()["pendulum_rotation"]) {
            const double E = r["E"];
            for (int i : {0, 2}) {
                CHECK(near_rel(m.action(i, E), r["I"], 1e-12));
                CHECK(near_rel(m.dIdE(i, E), r["dIdE"], 1e-10));
                CHECK(near_rel(m.d2IdE2(i, E), r["d2IdE2"], 1e-8));
            }
        }
        CHECK(m.action(2, 3.0) == Approx(1.7196).epsilon(1e-4));
    }

    TEST_CASE("separatrix and well-bottom limits") {
        const auto m = pendulum_map();
        const double sep = frozen()["separatrix_action"];
        CHECK(m.action(2, m.near_minus(2, 1e-14)) == Approx(sep).epsilon(1e-10));
        CHECK(m.action(1, m.near_minus(1, 1e-12)) == Approx(std::sqrt(0.5) * 1e-12).epsilon(1e-6));
        CHECK(m.dIdE(1, m.near_minus(1, 1e-10)) == Approx(1 / std::sqrt(2.0)).epsilon(1e-8));
        CHECK(m.period(1, -1 + 1e-10) == Approx(pi * std::sqrt(2.0)).epsilon(1e-8));
        CHECK(m.dIdE(2, 100.0) == Approx(0.05).epsilon(2e-3));
    }

    TEST_CASE("actions add up across the separatrix") {
        const auto m = pendulum_map();
        const double inside = m.action(1, m.near_plus(1, 1e-14));
        const double outside = m.action(0, m.near_minus(0, 1e-14)) + m.action(2, m.near_minus(2, 1e-14));
        CHECK(inside == Approx(outside).epsilon(1e-6));
    }

    TEST_CASE("period grows like the log of the distance to the separatrix") {
        const auto m = pendulum_map();
        const double t1 = m.period(1, m.near_plus(1, 1e-6).E);
        const double t2 = m.period(1, m.near_plus(1, 1e-8).E);
        const double slope = (t2 - t1) / std::log(100.0);
        CHECK(slope == Approx(2 * pi * std::sqrt(2.0) / (2 * pi)).epsilon(1e-3));
    }

    TEST_CASE("period matches the flow in the well") {
        const auto m = pendulum_map();
        const double T = oracle::flow_period(oracle::pendulum_hamiltonian(1.0), {1.0, pi}, 1e-3, false);
        CHECK(m.period(1, 0.0) == Approx(T).epsilon(1e-6));
    }

    TEST_CASE("property: energy of action inverts the action") {
        const auto m = pendulum_map(0.25);
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> u(0.001, 0.999);
        for (int k = 0; k < 50; ++k) {
            const int i = k % 3;
            const auto w = m.window(i);
            const double hi = i == 1 ? w.E_plus : w.E_minus + 25;
            const double E = w.E_minus + (hi - w.E_minus) * u(rng);
            CHECK(m.energy_of_action(i, m.action(i, E)) == Approx(E).epsilon(1e-9).scale(1));
        }
    }

    TEST_CASE("small and large action asymptotics") {
        const auto m = pendulum_map();
        const double I = 1e-6;
        CHECK(m.energy_of_action(1, I) == Approx(-1 + std::sqrt(2.0) * I).epsilon(1e-9).scale(1));
        const double big = 200.0;
        CHECK(m.energy_of_action(2, big) / (big * big) == Approx(1).epsilon(1e-4));
    }

    TEST_CASE("property: action increases and frequency is positive") {
        const auto H = make_standard_form(PeriodicPotential({0, 1, 0.3}, {0, 0.1}));
        const ActionMap m(H);
        for (int i = 0; i < m.n_regions(); ++i) {
            const auto w = m.window(i);
            const double hi = std::min(w.E_plus, w.E_minus + 10);
            double prev = -1;
            for (int j = 1; j < 40; ++j) {
                const double E = w.E_minus + (hi - w.E_minus) * j / 40.0;
                const double I = m.action(i, E);
                CHECK(I > prev);
                CHECK(m.dIdE(i, E) > 0);
                prev = I;
            }
        }
    }

    TEST_CASE("region domains at lambda = 0 are the window actions") {
        const auto m = pendulum_map();
        const auto d0 = region_domains(0.0, m);
        REQUIRE(d0.size() == 3);
        CHECK(d0[1].a_minus == 0);
        CHECK(d0[1].a_plus == Approx(2 * frozen()["separatrix_action"].get<double>()).epsilon(1e-10));
        const auto d1 = region_domains(1e-3, m);
        for (int i = 0; i < 3; ++i) {
            CHECK(d1[i].a_minus >= d0[i].a_minus);
            CHECK(d1[i].a_plus <= d0[i].a_plus);
        }
        CHECK_THROWS_WITH_AS(region_domains(2 * m.lambda_max(), m), doctest::Contains("LambdaOutOfRange"), Error);
    }

    TEST_CASE("measure deficit vanishes with lambda") {
        const auto H = pendulum(1.0);
        ActionMapOptions o;
        o.energy_scale = 1;
        const double a = measure_deficit(1e-2, H, o);
        const double b = measure_deficit(1e-4, H, o);
        CHECK(a > b);
        CHECK(b > 0);
        CHECK(measure_deficit(0.0, H, o) == Approx(0).scale(1));
    }
}
