#include "liouville/errors.hpp"
#include "liouville/standard_form.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace liouville;
using doctest::Approx;

namespace {
PeriodicPotential constant(double c) { return PeriodicPotential({c}, {}); }

TaylorFourier poly_h(std::vector<double> c) {
    TaylorFourier h(1);
    for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k] != 0) h.add_term({static_cast<int>(k)}, constant(c[k]));
    return h;
}

TaylorFourier cos_f() {
    TaylorFourier f(1);
    f.add_term({0}, PeriodicPotential::cosine());
    return f;
}
}  // namespace

TEST_SUITE("standard_form") {
    TEST_CASE("pendulum is a valid standard form with mu = 0") {
        const auto H = pendulum(1.0);
        const auto rep = validate_standard_form(H);
        CHECK(rep.valid());
        CHECK(rep.mu_measured == 0);
        CHECK(rep.morse_ok);
        CHECK(rep.sup_G0 == Approx(std::cosh(1.0)).epsilon(1e-6));
    }

    TEST_CASE("eps above the admissible bound fails") {
        auto H = pendulum(1.0);
        H.chars.r0 = H.chars.R0 = std::sqrt(1024.0);
        const auto rep = validate_standard_form(H);
        CHECK_FALSE(rep.valid());
    }

    TEST_CASE("sine perturbation of the kinetic term") {
        const auto H = make_standard_form(PeriodicPotential::cosine(1.0), PeriodicPotential({0}, {0.1}));
        const auto rep = validate_standard_form(H);
        CHECK(rep.valid());
        CHECK(rep.mu_measured == Approx(0.1 * std::cosh(1.0)).epsilon(1e-6));
    }

    TEST_CASE("kappa examples") {
        StandardCharacteristics c;
        c.s0 = 1;
        c.R0 = c.r0 = 1;
        c.eps = 0.5;
        c.beta = 1;
        CHECK(kappa_of(c) == Approx(4));
        c.s0 = 0.1;
        c.eps = 1e-6;
        CHECK(kappa_of(c) == Approx(10));
        c.s0 = 1;
        c.R0 = 7;
        CHECK(kappa_of(c) == Approx(7));
    }

    TEST_CASE("standardize a quadratic h") {
        const double e = 1e-3;
        const auto r = standardize(poly_h({0, 0, 1}), cos_f(), {0.0}, e);
        CHECK(r.g0 == Approx(1.0));
        CHECK(r.u({}) == Approx(0).scale(1));
        for (double q : {0.0, 1.0, 2.5}) {
            CHECK(r.v({}, q) == Approx(0).scale(1));
            CHECK(r.H.G->slice({})(q) == Approx(e * std::cos(q)).epsilon(1e-12).scale(1));
        }
        for (double p : {-0.1, 0.0, 0.2})
            for (double q : {0.0, 2.0}) CHECK(std::abs(r.H.nu->slice({}).value(p, q)) < 1e-12);
    }

    TEST_CASE("standardize a translated quadratic") {
        const double a = 0.3, e = 1e-3;
        const auto r = standardize(poly_h({a * a, -2 * a, 1}), cos_f(), {a}, e);
        CHECK(r.u({}) == Approx(a).epsilon(1e-12));
        CHECK(r.H.G->slice({})(0.7) == Approx(e * std::cos(0.7)).epsilon(1e-12).scale(1));
    }

    TEST_CASE("standardize a cubic h reproduces the composition") {
        const double e = 1e-3;
        const auto r = standardize(poly_h({0, 0, 1, 1}), cos_f(), {0.0}, e);
        CHECK(std::abs(r.u({})) < 1e-12);
        double worst = 0;
        for (double p : {-0.05, 0.0, 0.03}) {
            for (double q : {0.0, 1.1, 3.0, 5.2}) {
                const double P = p + r.u({});
                const double Q = q + r.v({}, q);
                const double lhs = P * P + P * P * P + e * std::cos(Q);
                const double nu = r.H.nu->slice({}).value(p, q);
                const double rhs = r.g({}) + r.g0 * ((1 + nu) * p * p + r.H.G->slice({})(q));
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
        CHECK(worst < 1e-10);
    }

    TEST_CASE("critical continuation with mu = 0 is exact") {
        const auto H = make_standard_form(PeriodicPotential::cosine(1.0));
        const auto cc = continue_critical_points(H);
        const auto s = cc.at({});
        CHECK(s.theta[0] == Approx(0).scale(1));
        CHECK(s.energy[0] == 1.0);
        CHECK(s.energy[1] == -1.0);
    }

    TEST_CASE("shifted cosine maximum") {
        const double mu = 0.05;
        const auto G = PeriodicPotential({0, 1}, {mu});
        const auto crit = critical_set(analyze_morse(G));
        CHECK(std::tan(crit.theta[0]) == Approx(mu).epsilon(1e-12));
        CHECK(crit.energy[0] == Approx(std::sqrt(1 + mu * mu)).epsilon(1e-13));
    }

    TEST_CASE("property: perturbed criticals stay within the drift bounds") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(-1, 1);
        for (int trial = 0; trial < 5; ++trial) {
            const double mu = 1e-3 * (1 + trial);
            const auto H = make_standard_form(PeriodicPotential::cosine(1.0),
                                              PeriodicPotential({0, u(rng)}, {u(rng)}).scaled(mu));
            const auto cc = continue_critical_points(H);
            CHECK(cc.bounds_ok);
            for (const auto& s : cc.samples) {
                CHECK(s.max_theta_shift <= cc.theta_bound);
                CHECK(s.max_energy_shift <= cc.energy_bound);
            }
        }
    }
}
