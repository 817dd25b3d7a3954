#include "liouville/action_map.hpp"
#include "liouville/normal_form.hpp"

#include "oracle_data.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace liouville;
using doctest::Approx;

TEST_SUITE("normal_form") {
    TEST_CASE("polynomial arithmetic") {
        const auto x = Poly2::var_x(4), y = Poly2::var_y(4);
        const auto p = x * x * y + y * cplx(2);
        CHECK(std::abs(p(cplx(0.5), cplx(3)) - cplx(0.75 + 6)) < 1e-15);
        CHECK(std::abs(p.dx()(cplx(0.5), cplx(3)) - cplx(3)) < 1e-15);
        const auto q = p.compose(y, x);
        CHECK(std::abs(q(cplx(3), cplx(0.5)) - p(cplx(0.5), cplx(3))) < 1e-14);
        CHECK(poisson(x, y, 1).at(0, 0) == cplx(1));
    }

    TEST_CASE("pendulum quadratic data") {
        for (double eps : {0.25, 1.0, 4.0}) {
            const auto q = local_quadratic_data(pendulum(eps), 0);
            CHECK(q.kind == NFKind::hyperbolic);
            CHECK(q.lambda_lin == Approx(std::sqrt(eps / 2)).epsilon(1e-12));
            CHECK(q.delta == Approx(std::pow(eps / 2, 0.25)).epsilon(1e-12));
            CHECK(q.g == Approx(std::sqrt(eps / 2)).epsilon(1e-12));
        }
        CHECK(local_quadratic_data(pendulum(1.0), 1).kind == NFKind::elliptic);
    }

    TEST_CASE("quadratic barrier is already normal") {
        const double g0 = 0.7;
        const auto loc = quadratic_model(g0, NFKind::hyperbolic, 6);
        const auto q = local_quadratic_data(loc);
        CHECK(q.lambda_lin == Approx(g0));
        CHECK(q.g == Approx(g0));
        CHECK(q.delta == Approx(std::sqrt(g0)));
        const auto nf = birkhoff_normalize(loc, 1.0);
        for (double r : nf.data.R) CHECK(r == 0);
        CHECK(nf.transform.a1.is_zero(1e-15));
        CHECK(nf.transform.a2.is_zero(1e-15));
        const auto pq = transform_point(nf.transform, 0.03, -0.02);
        CHECK(pq[0] == Approx(std::sqrt(g0) * 0.03).epsilon(1e-14));
        CHECK(pq[1] == Approx(-0.02 / std::sqrt(g0)).epsilon(1e-14));
    }

    TEST_CASE("pendulum normal form residual and orderings") {
        const auto H = pendulum(1.0);
        NormalFormOptions o;
        const auto base = birkhoff_normalize(H, 0, {}, o, 1.0);
        CHECK(base.data.residual < o.tol);
        CHECK(base.data.R[0] == 0);
        CHECK(base.data.R[1] == 0);
        for (auto ord : {NFOrdering::ascending, NFOrdering::descending, NFOrdering::kernel_shift}) {
            o.ordering = ord;
            const auto r = birkhoff_normalize(H, 0, {}, o, 1.0);
            for (std::size_t h = 0; h < r.data.R.size(); ++h)
                CHECK(r.data.R[h] == Approx(base.data.R[h]).epsilon(1e-12).scale(1));
        }
    }

    TEST_CASE("elliptic normal form matches the frozen expansion") {
        const auto nf = birkhoff_normalize(pendulum(1.0), 1, {}, {}, 1.0).data;
        CHECK(nf.kind == NFKind::elliptic);
        CHECK(nf.g == Approx(std::sqrt(0.5)).epsilon(1e-13));
        const auto& ref = frozen()["pendulum_min_R"];
        CHECK(nf.R[2] == Approx(ref[0].get<double>()).epsilon(1e-6));
        CHECK(nf.R[3] == Approx(ref[1].get<double>()).epsilon(1e-3));
    }

    TEST_CASE("elliptic energy agrees with the action map near the bottom") {
        const auto H = pendulum(1.0);
        const auto nf = birkhoff_normalize(H, 1, {}, {}, 1.0).data;
        ActionMapOptions o;
        o.energy_scale = 1;
        const ActionMap m(H, {}, o);
        CHECK(elliptic_action_energy(nf, 0.0) == nf.E_c);
        for (double I : {1e-4, 1e-3, 1e-2}) CHECK(std::abs(elliptic_action_energy(nf, I) - m.energy_of_action(1, I)) < 1e-8);
    }

    TEST_CASE("energy inversion") {
        auto nf = birkhoff_normalize(quadratic_model(0.7, NFKind::hyperbolic, 6), 1.0).data;
        CHECK(invert_energy_J(nf, 0.0) == 0);
        CHECK(invert_energy_J(nf, 0.02) == Approx(0.02 / nf.g).epsilon(1e-13));
        const auto pn = birkhoff_normalize(pendulum(1.0), 0, {}, {}, 1.0).data;
        for (double z : {-0.01, 0.005, 0.02}) {
            const double J = invert_energy_J(pn, z);
            CHECK(pn.g * J - pn.R_at(-J) == Approx(z).epsilon(1e-13));
        }
        CHECK(probe_inversion_radius(pn) > 0);
    }

    TEST_CASE("energy-time coordinates") {
        const auto nf = birkhoff_normalize(pendulum(1.0), 0, {}, {}, 1.0).data;
        const auto Hn = normal_form_hamiltonian(nf);
        const double E = 0.99;
        const auto p0 = energy_time_coords(nf, E, 0.0);
        CHECK(p0.y1 == 0);
        CHECK(p0.x1 == Approx(std::sqrt(p0.J)).epsilon(1e-14));
        for (double t : {-0.4, 0.1, 0.5}) {
            const auto p = energy_time_coords(nf, E, t);
            CHECK(Hn.value(p.y1, p.x1) == Approx(E).epsilon(1e-11));
            CHECK(energy_time_inverse(nf, E, p.y1, p.x1) == Approx(t).epsilon(1e-11).scale(1));
        }
    }

    TEST_CASE("property: the transform is symplectic") {
        const auto nf = birkhoff_normalize(make_standard_form(PeriodicPotential({0, 1, 0.1}, {0, 0.05})), 0, {}, {}, 1.0);
        std::mt19937 rng(23);
        const double r = 0.1 * nf.data.c0;
        REQUIRE(r > 0);
        std::uniform_real_distribution<double> u(-r, r);
        for (int k = 0; k < 100; ++k) {
            const auto J = transform_jacobian(nf.transform, u(rng), u(rng));
            CHECK(J[0] * J[3] - J[1] * J[2] == Approx(1).epsilon(1e-10));
        }
    }
}
