#include "liouville/io.hpp"

#include "liouville/errors.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace liouville::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ConfigError("ConfigError", what); }

std::vector<double> numbers(const json& j, const std::string& field) {
    if (!j.is_array()) bad(field + " must be an array of numbers");
    std::vector<double> v;
    for (auto& x : j) {
        if (!x.is_number()) bad(field + " must be an array of numbers");
        double d = x.get<double>();
        if (!std::isfinite(d)) bad(field + " contains a non-finite value");
        v.push_back(d);
    }
    return v;
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) bad(field + " must be a number");
    double d = j.get<double>();
    if (!std::isfinite(d)) bad(field + " must be finite");
    return d;
}

int integer(const json& j, const std::string& field) {
    if (!j.is_number_integer()) bad(field + " must be an integer");
    return j.get<int>();
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) bad(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) bad("unknown key '" + it.key() + "' in " + where);
}

std::string kind_label(CriticalKind k) { return k == CriticalKind::maximum ? "max" : "min"; }

}  // namespace

std::string num(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

json to_json(const PeriodicPotential& G) {
    return json{{"cos", G.cos_coeffs()}, {"sin", G.sin_coeffs()}};
}

PeriodicPotential potential_from_json(const json& j) {
    only_keys(j, {"cos", "sin"}, "potential");
    if (!j.contains("cos")) bad("potential needs a 'cos' array");
    auto a = numbers(j["cos"], "potential.cos");
    if (a.empty()) bad("potential.cos must hold at least the mean");
    std::vector<double> b = j.contains("sin") ? numbers(j["sin"], "potential.sin") : std::vector<double>{};
    return PeriodicPotential(a, b);
}

json to_json(const TaylorFourier& t) {
    json terms = json::array();
    for (auto& term : t.terms()) terms.push_back(json{{"powers", term.powers}, {"coeff", to_json(term.coeff)}});
    return json{{"n_vars", t.n_vars()}, {"terms", terms}};
}

TaylorFourier taylor_fourier_from_json(const json& j) {
    only_keys(j, {"n_vars", "terms"}, "table");
    const int n = integer(j.value("n_vars", json()), "table.n_vars");
    if (n < 0) bad("table.n_vars must be >= 0");
    TaylorFourier t(n);
    if (!j.contains("terms") || !j["terms"].is_array()) bad("table.terms must be an array");
    for (auto& term : j["terms"]) {
        only_keys(term, {"powers", "coeff"}, "table term");
        std::vector<int> p;
        for (auto& x : term.value("powers", json::array())) p.push_back(integer(x, "powers"));
        if (static_cast<int>(p.size()) != n) bad("term powers must have n_vars entries");
        for (int e : p)
            if (e < 0) bad("term powers must be >= 0");
        t.add_term(p, potential_from_json(term.value("coeff", json())));
    }
    return t;
}

json to_json(const StandardCharacteristics& c) {
    json dom = json::array();
    for (auto& b : c.hat_domain) dom.push_back({b[0], b[1]});
    return json{{"hat_domain", dom}, {"R0", c.R0},     {"r0", c.r0},   {"s0", c.s0},
                {"beta", c.beta},     {"eps", c.eps},   {"mu", c.mu},   {"kappa", c.kappa}};
}

StandardCharacteristics characteristics_from_json(const json& j) {
    only_keys(j, {"hat_domain", "R0", "r0", "s0", "beta", "eps", "mu", "kappa"}, "chars");
    StandardCharacteristics c;
    for (auto& b : j.value("hat_domain", json::array())) {
        auto v = numbers(b, "hat_domain entry");
        if (v.size() != 2 || !(v[0] < v[1])) bad("hat_domain entries are [lo, hi] with lo < hi");
        c.hat_domain.push_back({v[0], v[1]});
    }
    auto pos = [&](const char* k, double& dst) {
        if (!j.contains(k)) bad(std::string("chars.") + k + " missing");
        dst = number(j[k], std::string("chars.") + k);
        if (!(dst > 0)) bad(std::string("chars.") + k + " must be positive");
    };
    pos("R0", c.R0);
    pos("r0", c.r0);
    pos("s0", c.s0);
    pos("beta", c.beta);
    pos("eps", c.eps);
    pos("kappa", c.kappa);
    c.mu = j.contains("mu") ? number(j["mu"], "chars.mu") : 0.0;
    if (c.mu < 0) bad("chars.mu must be >= 0");
    return c;
}

json to_json(const StandardFormHamiltonian& H) {
    auto nu = std::dynamic_pointer_cast<const TaylorFourierNu>(H.nu);
    auto G = std::dynamic_pointer_cast<const TaylorFourierPotential>(H.G);
    if (!nu || !G) fail("Unsupported", "only table-backed nu and G serialize");
    return json{{"nu", to_json(nu->table())}, {"G", to_json(G->table())}, {"G0", to_json(H.G0)},
                {"chars", to_json(H.chars)}};
}

StandardFormHamiltonian standard_form_from_json(const json& j) {
    only_keys(j, {"nu", "G", "G0", "chars"}, "hamiltonian");
    for (auto k : {"nu", "G", "G0", "chars"})
        if (!j.contains(k)) bad(std::string("hamiltonian.") + k + " missing");
    StandardFormHamiltonian H;
    H.G0 = potential_from_json(j["G0"]);
    H.chars = characteristics_from_json(j["chars"]);
    auto nu = taylor_fourier_from_json(j["nu"]);
    auto G = taylor_fourier_from_json(j["G"]);
    if (nu.n_vars() != H.chars.dim_p_hat() + 1) bad("nu table must have 1 + dim(p_hat) variables");
    if (G.n_vars() != H.chars.dim_p_hat()) bad("G table must have dim(p_hat) variables");
    H.nu = std::make_shared<TaylorFourierNu>(std::move(nu));
    H.G = std::make_shared<TaylorFourierPotential>(std::move(G));
    return H;
}

json to_json(const MorseProfile& m) {
    json crit = json::array();
    for (auto& c : m.criticals)
        crit.push_back(json{{"theta", c.location}, {"value", c.value}, {"kind", kind_label(c.kind)}});
    return json{{"n_wells", m.n_wells},
                {"beta", m.beta},
                {"max_second_derivative", m.max_second_derivative},
                {"critical_count_bound", critical_count_bound(m)},
                {"criticals", crit}};
}

std::string criticals_csv(const MorseProfile& m) {
    std::ostringstream os;
    os << "index,theta,value,kind\n";
    for (std::size_t i = 0; i < m.criticals.size(); ++i) {
        auto& c = m.criticals[i];
        os << i << ',' << num(c.location) << ',' << num(c.value) << ',' << kind_label(c.kind) << '\n';
    }
    return os.str();
}

json to_json(const SingularRep& r) {
    return json{{"region", r.region}, {"branch", branch_label(r.branch)}, {"eps", r.eps},
                {"radius", r.radius}, {"phi", r.phi},                    {"psi", r.psi},
                {"residual", r.fit_residual}, {"degree", r.degree},      {"psi0", r.psi0()}};
}

SingularRep singular_rep_from_json(const json& j) {
    only_keys(j, {"region", "branch", "eps", "radius", "phi", "psi", "residual", "degree", "psi0"}, "singular rep");
    SingularRep r;
    try {
        r.region = integer(j.at("region"), "region");
        r.branch = parse_branch(j.at("branch").get<std::string>());
        r.eps = number(j.at("eps"), "eps");
        r.radius = number(j.at("radius"), "radius");
        r.phi = numbers(j.at("phi"), "phi");
        r.psi = numbers(j.at("psi"), "psi");
        r.fit_residual = number(j.at("residual"), "residual");
    } catch (const json::exception& e) {
        bad(std::string("singular rep: ") + e.what());
    }
    r.degree = j.contains("degree") ? integer(j["degree"], "degree") : static_cast<int>(r.phi.size()) - 1;
    return r;
}

std::string singular_fit_csv(const SingularSamples& s, const SingularRep& r) {
    std::ostringstream os;
    os << "z,I,fitted,residual\n";
    for (std::size_t k = 0; k < s.z.size(); ++k) {
        const double f = r.value(s.z[k]);
        os << num(s.z[k]) << ',' << num(s.I[k]) << ',' << num(f) << ',' << num(s.I[k] - f) << '\n';
    }
    return os.str();
}

json to_json(const NormalFormData& nf) {
    return json{{"kind", nf_kind_label(nf.kind)},
                {"theta_c", nf.theta_c},
                {"E_c", nf.E_c},
                {"g", nf.g},
                {"delta", nf.delta},
                {"R", nf.R},
                {"order", nf.order},
                {"residual", nf.residual},
                {"eps", nf.eps},
                {"c0", nf.c0},
                {"inversion_radius", nf.inversion_radius}};
}

std::string action_table_csv(const ActionTable& t) {
    std::ostringstream os;
    os << "region,i";
    for (std::size_t k = 0; k < t.p_hat.size(); ++k) os << ",p_hat" << k;
    os << ",E,I,dIdE,T\n";
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        auto& s = t.samples[i];
        os << t.region << ',' << i;
        for (double p : t.p_hat) os << ',' << num(p);
        os << ',' << num(s.E) << ',' << num(s.I) << ',' << num(s.dIdE) << ',' << num(s.T) << '\n';
    }
    return os.str();
}

std::string convexity_csv(const ConvexityProfile& p) {
    std::ostringstream os;
    os << "E,I,dIdE,d2IdE2,d2EdI2,verdict\n";
    for (auto& s : p.samples)
        os << num(s.E) << ',' << num(s.I) << ',' << num(s.dIdE) << ',' << num(s.d2IdE2) << ',' << num(s.d2EdI2)
           << ',' << curvature_label(s.verdict) << '\n';
    return os.str();
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        bad(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IOError", "cannot write " + path);
    out << text;
}

void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::vector<double> EnergyGrid::expand() const {
    if (!values.empty()) return values;
    std::vector<double> E(std::max(points, 0));
    for (int k = 0; k < points; ++k) E[k] = points == 1 ? from : from + (to - from) * k / (points - 1);
    return E;
}

RunConfig parse_run_config(const json& j, double lambda_cap) {
    only_keys(j,
              {"name", "description", "potential", "eps", "mu", "nu", "p_hat_grid", "tolerances",
               "lambda", "output_dir", "seed", "threads", "region", "energies", "branch", "fit_degree", "critical",
               "nf_order"},
              "config");
    RunConfig c;
    if (!j.contains("potential")) bad("config needs 'potential'");
    c.potential = potential_from_json(j["potential"]);
    if (j.contains("eps")) {
        c.eps = number(j["eps"], "eps");
        if (!(*c.eps > 0)) bad("eps must be positive");
    }
    if (j.contains("mu")) {
        c.mu = number(j["mu"], "mu");
        if (c.mu < 0) bad("mu must be >= 0");
    }
    if (j.contains("nu")) c.nu_shape = potential_from_json(j["nu"]);
    if (j.contains("p_hat_grid")) {
        if (!j["p_hat_grid"].is_array() || j["p_hat_grid"].empty()) bad("p_hat_grid must be a non-empty array");
        c.p_hat_grid.clear();
        for (auto& p : j["p_hat_grid"]) {
            auto v = numbers(p, "p_hat_grid entry");
            if (!v.empty()) bad("potential configs have no adiabatic parameters; p_hat entries must be []");
            c.p_hat_grid.push_back(v);
        }
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        only_keys(t, {"quad", "fit", "normal_form"}, "tolerances");
        auto tol = [&](const char* k, double& dst) {
            if (!t.contains(k)) return;
            dst = number(t[k], std::string("tolerances.") + k);
            if (!(dst > 0)) bad(std::string("tolerances.") + k + " must be positive");
        };
        tol("quad", c.tol.quad);
        tol("fit", c.tol.fit);
        tol("normal_form", c.tol.normal_form);
    }
    if (j.contains("lambda")) {
        c.lambda_grid = numbers(j["lambda"], "lambda");
        for (double l : c.lambda_grid)
            if (!(l > 0 && l <= lambda_cap)) bad("lambda " + num(l) + " outside (0, " + num(lambda_cap) + "]");
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) bad("output_dir must be a string");
        c.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) bad("seed must be a non-negative integer");
        c.seed = j["seed"].get<unsigned>();
    }
    if (j.contains("threads")) {
        c.threads = integer(j["threads"], "threads");
        if (c.threads < 1) bad("threads must be >= 1");
    }
    if (j.contains("region")) c.region = integer(j["region"], "region");
    if (j.contains("energies")) {
        const auto& e = j["energies"];
        if (e.is_array()) {
            c.energies.values = numbers(e, "energies");
        } else {
            only_keys(e, {"from", "to", "points"}, "energies");
            if (!e.contains("from") || !e.contains("to") || !e.contains("points"))
                bad("energies needs from, to and points");
            c.energies.from = number(e["from"], "energies.from");
            c.energies.to = number(e["to"], "energies.to");
            c.energies.points = integer(e["points"], "energies.points");
            if (c.energies.points < 1) bad("energies.points must be >= 1");
        }
    }
    if (j.contains("branch")) {
        if (!j["branch"].is_string()) bad("branch must be a string");
        c.branch = j["branch"].get<std::string>();
        if (c.branch != "plus" && c.branch != "minus") bad("branch must be 'plus' or 'minus'");
    }
    if (j.contains("fit_degree")) {
        c.fit_degree = integer(j["fit_degree"], "fit_degree");
        if (c.fit_degree < 1 || c.fit_degree > 12) bad("fit_degree must be in [1, 12]");
    }
    if (j.contains("critical")) c.critical = integer(j["critical"], "critical");
    if (j.contains("nf_order")) {
        c.nf_order = integer(j["nf_order"], "nf_order");
        if (c.nf_order < 2 || c.nf_order > 10) bad("nf_order must be in [2, 10]");
    }
    return c;
}

RunConfig load_run_config(const std::string& path, double lambda_cap) {
    return parse_run_config(read_json_file(path), lambda_cap);
}

json to_json(const RunConfig& c) {
    json j;
    j["potential"] = to_json(c.potential);
    if (c.eps) j["eps"] = *c.eps;
    j["mu"] = c.mu;
    j["nu"] = to_json(c.nu_shape);
    j["p_hat_grid"] = c.p_hat_grid;
    j["tolerances"] = json{{"quad", c.tol.quad}, {"fit", c.tol.fit}, {"normal_form", c.tol.normal_form}};
    j["lambda"] = c.lambda_grid;
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["region"] = c.region;
    if (c.energies.values.empty())
        j["energies"] = json{{"from", c.energies.from}, {"to", c.energies.to}, {"points", c.energies.points}};
    else
        j["energies"] = c.energies.values;
    j["branch"] = c.branch;
    j["fit_degree"] = c.fit_degree;
    j["critical"] = c.critical;
    j["nf_order"] = c.nf_order;
    return j;
}

StandardFormHamiltonian build_hamiltonian(const RunConfig& c) {
    return make_standard_form(c.potential, c.nu_shape.scaled(c.mu));
}

ActionMapOptions map_options(const RunConfig& c) {
    ActionMapOptions o;
    o.quad_tol = c.tol.quad;
    if (c.eps) o.energy_scale = *c.eps;
    return o;
}

}  // namespace liouville::io
