#include "liouville/errors.hpp"
#include "liouville/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace liouville;
using doctest::Approx;
using io::json;

namespace {
int count_lines(const std::string& s) {
    std::istringstream in(s);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) ++n;
    return n;
}

const double cap = 1.0 / 95;
}  // namespace

TEST_SUITE("io") {
    TEST_CASE("potential round trip") {
        const PeriodicPotential G({0.1, 1, 0.3}, {0.2, -0.05});
        const auto back = io::potential_from_json(io::to_json(G));
        for (double x : {0.0, 0.7, 3.0}) CHECK(back(x) == G(x));
    }

    TEST_CASE("numbers survive text round trip") {
        for (double x : {0.1, 1.0 / 3, 1e-300, -2.5e17}) CHECK(std::stod(io::num(x)) == x);
    }

    TEST_CASE("criticals csv has one row per critical point") {
        const auto csv = io::criticals_csv(analyze_morse(PeriodicPotential::cosine()));
        CHECK(csv.rfind("index,theta,value,kind", 0) == 0);
        CHECK(count_lines(csv) == 3);
    }

    TEST_CASE("minimal config") {
        const auto rc = io::parse_run_config(json::parse(R"({"potential": {"cos": [0, 1]}})"), cap);
        CHECK(rc.potential(0.0) == 1.0);
        CHECK(rc.threads == 1);
        CHECK(rc.p_hat_grid.size() == 1);
        CHECK_FALSE(rc.eps.has_value());
    }

    TEST_CASE("config round trip") {
        const auto j = json::parse(R"({"potential": {"cos": [0, 1, 0.3]}, "eps": 1.5, "mu": 0.001,
            "nu": {"cos": [0, 1]}, "lambda": [0.001, 0.002], "threads": 3, "seed": 9,
            "energies": {"from": -0.5, "to": 0.5, "points": 5}, "branch": "minus"})");
        const auto rc = io::parse_run_config(j, cap);
        const auto again = io::parse_run_config(io::to_json(rc), cap);
        CHECK(again.eps.value() == 1.5);
        CHECK(again.mu == 0.001);
        CHECK(again.lambda_grid.size() == 2);
        CHECK(again.branch == "minus");
        CHECK(again.energies.expand().size() == 5);
        CHECK(again.energies.expand().back() == Approx(0.5));
    }

    TEST_CASE("config violations are rejected") {
        const char* cases[] = {
            R"({})",
            R"({"potential": {"cos": [0, 1]}, "colour": 1})",
            R"({"potential": {"cos": [0, 1]}, "lambda": [0.5]})",
            R"({"potential": {"cos": [0, 1]}, "lambda": [0]})",
            R"({"potential": {"cos": [0, 1]}, "tolerances": {"quad": -1}})",
            R"({"potential": {"cos": [0, 1]}, "threads": 0})",
            R"({"potential": {"cos": [0, 1]}, "p_hat_grid": [[0.1]]})",
            R"({"potential": {"cos": [0, 1]}, "branch": "up"})",
            R"({"potential": {"cos": "x"}})",
        };
        for (const char* c : cases) {
            CAPTURE(c);
            CHECK_THROWS_AS(io::parse_run_config(json::parse(c), cap), ConfigError);
        }
    }

    TEST_CASE("standard form serialization") {
        const auto H = make_standard_form(PeriodicPotential({0, 1, 0.1}, {0, 0}), PeriodicPotential({0}, {0.01}));
        const auto back = io::standard_form_from_json(io::to_json(H));
        for (double q : {0.0, 1.0, 4.0}) CHECK(back.value(0.3, {}, q) == Approx(H.value(0.3, {}, q)).epsilon(1e-15));
        CHECK(back.chars.eps == H.chars.eps);
    }

    TEST_CASE("singular representation round trip") {
        SingularRep r;
        r.region = 2;
        r.branch = Branch::minus;
        r.phi = {1, 2};
        r.psi = {-0.1};
        r.eps = 0.5;
        r.degree = 1;
        const auto back = io::singular_rep_from_json(io::to_json(r));
        CHECK(back.region == 2);
        CHECK(back.branch == Branch::minus);
        CHECK(back.psi0() == -0.1);
        CHECK(back.value(0.01) == r.value(0.01));
    }

    TEST_CASE("files are written with directories") {
        const auto dir = std::filesystem::temp_directory_path() / "liouville_io_test" / "nested";
        std::filesystem::remove_all(dir.parent_path());
        io::write_json_file((dir / "x.json").string(), json{{"a", 1}});
        CHECK(io::read_json_file((dir / "x.json").string())["a"] == 1);
        std::filesystem::remove_all(dir.parent_path());
    }

    TEST_CASE("action table csv is deterministic") {
        ActionMapOptions o;
        o.energy_scale = 1;
        const ActionMap m(pendulum(1.0), {}, o);
        const auto a = io::action_table_csv(make_action_table(m, 2, {2.0, 3.0, 4.0}, {}, 1));
        const auto b = io::action_table_csv(make_action_table(m, 2, {2.0, 3.0, 4.0}, {}, 3));
        CHECK(a == b);
        CHECK(count_lines(a) == 4);
    }
}
