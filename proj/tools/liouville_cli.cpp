#include "liouville/acceptance.hpp"
#include "liouville/convexity.hpp"
#include "liouville/errors.hpp"
#include "liouville/golden.hpp"
#include "liouville/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>

using namespace liouville;
namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, acceptance_failed = 1, config_error = 2, numerical_error = 3 };

struct Common {
    std::string config;
    std::string out;
    int threads = 0;
    bool quick = false;
    std::string golden;
};

io::RunConfig load(const Common& c) {
    if (c.config.empty()) throw ConfigError("ConfigError", "--config is required");
    double cap = 1.0 / GoldenConstants{}.C_hat;
    try {
        cap = 1.0 / load_golden(c.golden.empty() ? default_golden_path() : c.golden).C_hat;
    } catch (const Error&) {
        // keep the built-in window constant when the golden file is unusable
    }
    auto rc = io::load_run_config(c.config, cap);
    if (!c.out.empty()) rc.output_dir = c.out;
    if (c.threads > 0) rc.threads = c.threads;
    return rc;
}

std::string path_in(const io::RunConfig& rc, const std::string& name) { return (fs::path(rc.output_dir) / name).string(); }

int analyze_potential(const Common& c) {
    const auto rc = load(c);
    MorseProfile prof;
    try {
        MorseOptions mo;
        mo.require_distinct = false;
        prof = analyze_morse(rc.potential, mo);
    } catch (const Error& e) {
        // a potential that is not Morse is a validation failure of the input
        std::cerr << "error: " << e.what() << "\n";
        return config_error;
    }
    io::write_json_file(path_in(rc, "morse_profile.json"), io::to_json(prof));
    io::write_text_file(path_in(rc, "criticals.csv"), io::criticals_csv(prof));
    std::cout << "criticals " << prof.criticals.size() << ", wells " << prof.n_wells << ", beta " << prof.beta << "\n";
    return ok;
}

std::vector<int> regions_of(const io::RunConfig& rc, const ActionMap& m) {
    if (rc.region >= 0) {
        if (rc.region >= m.n_regions())
            throw ConfigError("ConfigError", "region " + std::to_string(rc.region) + " does not exist");
        return {rc.region};
    }
    std::vector<int> all(m.n_regions());
    for (int i = 0; i < m.n_regions(); ++i) all[i] = i;
    return all;
}

int action_table(const Common& c) {
    const auto rc = load(c);
    const auto H = io::build_hamiltonian(rc);
    const auto E = rc.energies.expand();
    if (E.empty()) throw ConfigError("ConfigError", "action-table needs 'energies'");
    std::string csv;
    int rows = 0;
    for (const auto& p : rc.p_hat_grid) {
        const ActionMap m(H, p, io::map_options(rc));
        for (int i : regions_of(rc, m)) {
            const auto w = m.window(i);
            std::vector<double> inside;
            for (double e : E)
                if (e > w.E_minus && e < w.E_plus) inside.push_back(e);
            const auto t = make_action_table(m, i, inside, p, rc.threads);
            auto text = io::action_table_csv(t);
            if (!csv.empty()) text = text.substr(text.find('\n') + 1);
            csv += text;
            rows += static_cast<int>(t.samples.size());
        }
    }
    io::write_text_file(path_in(rc, "action_table.csv"), csv);
    std::cout << rows << " rows\n";
    return ok;
}

int fit_separatrix(const Common& c) {
    const auto rc = load(c);
    const ActionMap m(io::build_hamiltonian(rc), rc.p_hat_grid.front(), io::map_options(rc));
    const int region = rc.region >= 0 ? rc.region : 1;
    if (region >= m.n_regions()) throw ConfigError("ConfigError", "region does not exist");
    const Branch b = parse_branch(rc.branch);
    const auto s = singular_samples(m, region, b, branch_grid(m, region));
    FitOptions fo;
    fo.degree = rc.fit_degree;
    fo.expected_sign = expected_psi_sign(m, region, b);
    const auto rep = fit_singular_rep(s, fo);
    io::write_json_file(path_in(rc, "singular_rep.json"), io::to_json(rep));
    io::write_text_file(path_in(rc, "singular_fit.csv"), io::singular_fit_csv(s, rep));
    std::cout << "psi(0) " << rep.psi0() << ", predicted " << psi_zero_from_passages(m, region, b) << ", residual "
              << rep.fit_residual << "\n";
    return ok;
}

int normal_form(const Common& c) {
    const auto rc = load(c);
    const auto H = io::build_hamiltonian(rc);
    int crit = rc.critical;
    if (crit < 0) crit = 0;
    NormalFormOptions o;
    o.order = rc.nf_order;
    o.tol = rc.tol.normal_form;
    const double scale = rc.eps ? *rc.eps : 0.0;
    const auto nf = birkhoff_normalize(H, crit, rc.p_hat_grid.front(), o, scale);
    io::write_json_file(path_in(rc, "normal_form.json"), io::to_json(nf.data));
    std::cout << nf_kind_label(nf.data.kind) << " at theta " << nf.data.theta_c << ", residual " << nf.data.residual
              << "\n";
    return ok;
}

int convexity(const Common& c) {
    const auto rc = load(c);
    const ActionMap m(io::build_hamiltonian(rc), rc.p_hat_grid.front(), io::map_options(rc));
    const double s = m.energy_scale();
    for (int i : regions_of(rc, m)) {
        std::vector<double> E = rc.energies.expand();
        if (E.empty()) {
            const auto w = m.window(i);
            const bool rot = m.kind(i) == RegionKind::lower_rotation || m.kind(i) == RegionKind::upper_rotation;
            const double lo = w.E_minus + 1e-3 * s, hi = rot ? w.E_minus + 100 * s : w.E_plus - 1e-3 * s;
            for (int j = 0; j < 50; ++j) E.push_back(lo + (hi - lo) * j / 49.0);
        } else {
            const auto w = m.window(i);
            std::vector<double> inside;
            for (double e : E)
                if (e > w.E_minus && e < w.E_plus) inside.push_back(e);
            E = inside;
        }
        const auto prof = convexity_profile(m, i, E, rc.threads);
        io::write_text_file(path_in(rc, "convexity_r" + std::to_string(i) + ".csv"), io::convexity_csv(prof));
        std::cout << "region " << i << ": " << prof.samples.size() << " samples, " << prof.inflections.size()
                  << " sign changes\n";
    }
    return ok;
}

int verify(const Common& c) {
    AcceptanceOptions o;
    o.quick = c.quick;
    o.threads = std::max(1, c.threads);
    o.golden_path = c.golden;
    const auto results = run_acceptance(o);
    int failed = 0;
    for (const auto& r : results) {
        std::cout << format_result(r) << "\n";
        if (!r.passed) ++failed;
    }
    std::cout << (failed ? "FAILED " : "OK ") << results.size() - failed << "/" << results.size() << " criteria\n";
    return failed ? acceptance_failed : ok;
}

int calibrate(const Common& c) {
    const auto g = calibrate_golden(std::max(1, c.threads));
    const std::string path = c.out.empty() ? default_golden_path() : (fs::path(c.out) / "constants.json").string();
    save_golden(g, path);
    std::cout << "wrote " << path << "\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Action-angle data for one-degree-of-freedom standard-form Hamiltonians"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--config", common.config, "run configuration (JSON)");
    app.add_option("--out", common.out, "output directory");
    app.add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--quick", common.quick, "quick acceptance subset");
    app.add_option("--golden", common.golden, "golden constants file");
    for (auto* opt : app.get_options()) opt->configurable(false);
    app.fallthrough();

    struct Cmd {
        const char* name;
        const char* help;
        int (*fn)(const Common&);
    };
    const Cmd cmds[] = {
        {"analyze-potential", "Morse profile and critical points", analyze_potential},
        {"action-table", "actions, frequencies and periods on an energy grid", action_table},
        {"fit-separatrix", "singular representation at a region edge", fit_separatrix},
        {"normal-form", "Birkhoff normal form at a critical point", normal_form},
        {"convexity", "convexity profile of the energy function", convexity},
        {"verify", "run the acceptance suite", verify},
        {"calibrate", "recompute the golden constants", calibrate},
    };
    int (*chosen)(const Common&) = nullptr;
    for (const auto& cmd : cmds) {
        auto* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->callback([&chosen, fn = cmd.fn] { chosen = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        return chosen(common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const Error& e) {
        std::cerr << "numerical error [" << e.name() << "]: " << e.what() << "\n";
        return numerical_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return numerical_error;
    }
}
