#include "liouville/acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    liouville::AcceptanceOptions o;
    app.add_flag("--quick", o.quick);
    app.add_option("--threads", o.threads)->check(CLI::PositiveNumber);
    app.add_option("--golden", o.golden_path);
    app.add_option("--only", o.only);
    CLI11_PARSE(app, argc, argv);

    int failed = 0;
    for (const auto& r : liouville::run_acceptance(o)) {
        std::cout << liouville::format_result(r) << std::endl;
        if (!r.passed) ++failed;
    }
    return failed ? 1 : 0;
}
