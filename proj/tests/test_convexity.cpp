#include "liouville/convexity.hpp"
#include "liouville/errors.hpp"

#include "oracle_data.hpp"

#include <doctest.h>

#include <cmath>

using namespace liouville;
using doctest::Approx;

namespace {
ActionMap pendulum_map() {
    ActionMapOptions o;
    o.energy_scale = 1;
    return ActionMap(pendulum(1.0), {}, o);
}
}  // namespace

TEST_SUITE("convexity") {
    TEST_CASE("rotation curvature against frozen values") {
        const auto m = pendulum_map();
        for (const auto& r : frozen()["rotation_d2EdI2"]) {
            const double E = r["E"];
            CHECK(d2E_dI2(m, 2, E) == Approx(r["d2EdI2"].get<double>()).epsilon(1e-9));
        }
        CHECK(d2E_dI2(m, 2, 3.0) >= 2);
        CHECK(d2E_dI2(m, 2, 1e4) == Approx(2).epsilon(1e-2));
    }

    TEST_CASE("richardson differences agree with the integral") {
        const auto m = pendulum_map();
        for (double E : {1.5, 3.0, 10.0})
            CHECK(d2IdE2_richardson(m, 2, E, 1e-2) == Approx(m.d2IdE2(2, E)).epsilon(1e-8));
    }

    TEST_CASE("a0 integrals against frozen values") {
        for (const auto& r : frozen()["a0"]) {
            const double E = r["E"];
            CHECK(near_rel(a0_first(E), r["first"], 1e-10));
            CHECK(near_rel(a0_second(E), r["second"], 1e-8));
            CHECK(near_rel(a0_ratio(E), r["ratio"], 1e-8));
        }
    }

    TEST_CASE("a0 ratio increases to one quarter") {
        CHECK(a0_ratio(-1 + 1e-6) == Approx(0.25).epsilon(1e-2));
        CHECK(a0_ratio(-1 + 1e-4) == Approx(0.25).epsilon(1e-2));
        double prev = 0;
        for (int j = 0; j < 20; ++j) {
            const double E = -0.999 + 1.998 * j / 19.0;
            const double r = a0_ratio(E);
            CHECK(r > prev);
            prev = r;
        }
    }

    TEST_CASE("outer regions are convex") {
        const auto m = pendulum_map();
        std::vector<double> E;
        for (int j = 0; j < 50; ++j) E.push_back(1.1 + (100 - 1.1) * j / 49.0);
        for (int region : {0, 2}) {
            const auto rep = outer_convexity_check(m, region, E);
            CHECK(rep.ok());
            CHECK(rep.min_d2EdI2 >= 2);
        }
        const ActionMap tw(make_standard_form(PeriodicPotential({0, 1, 0.3}, {0, 0})));
        std::vector<double> E2;
        for (int j = 0; j < 50; ++j) E2.push_back(1.4 + (100 - 1.4) * j / 49.0);
        CHECK(outer_convexity_check(tw, 4, E2).min_d2EdI2 >= 2);
    }

    TEST_CASE("exact cosine well is concave with slope at most -1/4") {
        std::vector<double> E;
        for (int j = 0; j < 50; ++j) E.push_back(-0.99 + 1.98 * j / 49.0);
        const auto rep = inner_cosine_bound(PeriodicPotential::cosine(), E);
        CHECK(rep.exact_cosine);
        CHECK(rep.ok());
        CHECK(rep.max_d2EdI2 <= -0.25);
        const auto near = inner_cosine_bound(PeriodicPotential::cosine(), {-1 + 1e-4});
        CHECK(near.samples[0].d2EdI2 == Approx(-0.25).epsilon(1e-2));
    }

    TEST_CASE("near-cosine well keeps the -1/27 bound") {
        std::vector<double> E;
        for (int j = 0; j < 20; ++j) E.push_back(-0.95 + 1.9 * j / 19.0);
        const auto rep = inner_cosine_bound(PeriodicPotential({0, 1, 1e-3}, {0, 0}), E, false);
        CHECK_FALSE(rep.exact_cosine);
        CHECK(rep.max_d2EdI2 <= -1.0 / 27);
    }

    TEST_CASE("curvature is invariant under affine rescaling") {
        const auto r = rescaled_action(PeriodicPotential({2, 3}, {0}), 2, 6.0);
        CHECK(r.direct == Approx(frozen()["rescaled_2_plus_3cos_E6"].get<double>()).epsilon(1e-12));
        CHECK(r.rel_gap < 1e-12);
    }

    TEST_CASE("profile flags sign changes") {
        const auto m = pendulum_map();
        const auto prof = convexity_profile(m, 1, window_grid(m, 1, 30, 1e-3), 2);
        CHECK(prof.samples.size() == 30);
        for (const auto& s : prof.samples) CHECK(s.verdict != Curvature::convex);
        CHECK(curvature_label(Curvature::inflection) == "inflection-flag");
    }
}
