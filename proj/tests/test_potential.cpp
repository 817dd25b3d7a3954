#include "liouville/errors.hpp"
#include "liouville/potential.hpp"
#include "oracle_data.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace liouville;
using doctest::Approx;

namespace {
const double pi = std::numbers::pi;

PeriodicPotential random_potential(std::mt19937& rng, int degree) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> a(degree + 1), b(degree);
    for (int k = 1; k <= degree; ++k) {
        a[k] = u(rng) / (k * k);
        b[k - 1] = u(rng) / (k * k);
    }
    return PeriodicPotential(a, b);
}
}  // namespace

TEST_SUITE("potential") {
    TEST_CASE("critical points of the cosine") {
        auto p = analyze_morse(PeriodicPotential::cosine());
        REQUIRE(p.criticals.size() == 2);
        CHECK(p.n_wells == 1);
        CHECK(p.criticals[0].kind == CriticalKind::maximum);
        CHECK(p.criticals[0].location == Approx(0).epsilon(1e-12));
        CHECK(p.criticals[1].location == Approx(pi).epsilon(1e-12));
        CHECK(p.beta == Approx(1).epsilon(1e-9));
    }

    TEST_CASE("two-well potential has four critical points") {
        const PeriodicPotential G({0, 1, 0.3}, {0, 0});
        CHECK_THROWS_WITH_AS(analyze_morse(G), doctest::Contains("DistinctValueViolation"), Error);
        auto p = analyze_morse(G, MorseOptions{1e-9, 4096, false});
        CHECK(p.criticals.size() == 4);
        CHECK(p.n_wells == 2);
        CHECK(p.criticals[0].value == Approx(1.3).epsilon(1e-12));
        CHECK(critical_count_bound(p) >= 4);
        const auto& o = frozen()["two_well_criticals"];
        int minima = 0;
        for (const auto& c : p.criticals)
            if (c.kind == CriticalKind::minimum) {
                ++minima;
                CHECK(c.value == Approx(o["min_value"].get<double>()).epsilon(1e-12));
            } else if (c.location > 1) {
                CHECK(c.value == Approx(o["saddle_value"].get<double>()).epsilon(1e-12));
                CHECK(c.location == Approx(pi).epsilon(1e-12));
            }
        CHECK(minima == 2);
    }

    TEST_CASE("coinciding critical values are rejected") {
        CHECK_THROWS_WITH_AS(analyze_morse(PeriodicPotential::cosine(1.0, 2), MorseOptions{1e-9, 4096, false}),
                             doctest::Contains("DistinctValueViolation"), Error);
        try {
            analyze_morse(PeriodicPotential::cosine(1.0, 2));
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.name() == "DistinctValueViolation");
        }
    }

    TEST_CASE("critical count bound of the cosine is scale free") {
        CHECK(critical_count_bound(analyze_morse(PeriodicPotential::cosine())) ==
              Approx(pi * std::sqrt(2.0)).epsilon(1e-6));
        CHECK(critical_count_bound(analyze_morse(PeriodicPotential::cosine(0.01))) ==
              Approx(pi * std::sqrt(2.0)).epsilon(1e-6));
    }

    TEST_CASE("cosine-like parameters") {
        auto c = cosine_like_params(PeriodicPotential::cosine());
        CHECK(c.eta == Approx(1));
        CHECK(c.theta0 == Approx(0));
        CHECK(c.g_hat < 1e-14);
        auto d = cosine_like_params(PeriodicPotential({0, 0.9, 0.01}, {0, 0}));
        CHECK(d.eta == Approx(0.9));
        CHECK(d.g_hat == Approx(0.01 * std::cosh(2.0) / 0.9).epsilon(1e-3));
        CHECK_THROWS_WITH_AS(cosine_like_params(PeriodicPotential::cosine(1.0, 3)), doctest::Contains("ZeroFirstHarmonic"),
                             Error);
    }

    TEST_CASE("rescaling to the unit interval") {
        auto r = rescale_to_unit(PeriodicPotential({2, 3}, {0}));
        CHECK(r.L(5.0) == Approx(1.0));
        CHECK(r.L(-1.0) == Approx(-1.0));
        CHECK(r.V(0.3) == Approx(std::cos(0.3)).epsilon(1e-12));
        auto s = rescale_to_unit(PeriodicPotential({0, 0.5, 0.005}, {0, 0}));
        CHECK(s.max_value > s.min_value);
        auto again = rescale_to_unit(s.V);
        CHECK(again.L.scale == Approx(1).epsilon(1e-12));
        CHECK(again.L.shift == Approx(0).epsilon(1e-12));
    }

    TEST_CASE("phase shift of the cosine is zero") {
        auto ps = phase_shift_b(PeriodicPotential::cosine(), 1e-10);
        CHECK(ps.b.sup_on_strip(0.0) < 1e-12);
    }

    TEST_CASE("phase shift recovers a known shift") {
        auto w = PeriodicPotential::fit([](double x) { return std::cos(x + 1e-4 * std::sin(x)); }, 12, 96);
        auto ps = phase_shift_b(w, 1e-9);
        for (double x : {0.1, 1.0, 2.5, 4.0}) CHECK(ps.b(x) == Approx(1e-4 * std::sin(x)).epsilon(1e-8).scale(1));
        CHECK(ps.sup_quarter <= 9 * std::sqrt(ps.g_hat0));
    }

    TEST_CASE("phase shift rejects w far from the cosine") {
        auto w = PeriodicPotential::fit([](double x) { return std::cos(x + 0.1 * std::sin(x)); }, 16, 128);
        CHECK_THROWS_WITH_AS(phase_shift_b(w, 1e-8), doctest::Contains("TooFarFromCosine"), Error);
    }

    TEST_CASE("property: derivatives agree with centred differences") {
        std::mt19937 rng(7);
        for (int trial = 0; trial < 10; ++trial) {
            auto G = random_potential(rng, 6);
            for (double x : {0.3, 1.7, 4.1}) {
                const double h = 1e-4;
                const double fd = (G(x + h) - G(x - h)) / (2 * h);
                CHECK(G.derivative_at(x, 1) == Approx(fd).epsilon(1e-6).scale(1));
            }
        }
    }

    TEST_CASE("property: beta scales linearly") {
        std::mt19937 rng(11);
        for (int trial = 0; trial < 5; ++trial) {
            auto G = PeriodicPotential::cosine() + random_potential(rng, 3).scaled(0.05);
            const double b = morse_beta(G);
            CHECK(morse_beta(G.scaled(3.0)) == Approx(3 * b).epsilon(1e-8));
        }
    }

    TEST_CASE("property: criticals alternate and are cyclically ordered") {
        std::mt19937 rng(3);
        for (int trial = 0; trial < 10; ++trial) {
            auto G = PeriodicPotential::cosine() + random_potential(rng, 4).scaled(0.2);
            auto p = analyze_morse(G, MorseOptions{1e-9, 4096, false});
            for (std::size_t i = 0; i < p.criticals.size(); ++i) {
                CHECK(p.kind(i) != p.kind(i + 1));
                CHECK(p.angle(i) < p.angle(i + 1));
            }
        }
    }
}
