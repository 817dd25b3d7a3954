#include "liouville/golden.hpp"

#include "liouville/errors.hpp"
#include "liouville/io.hpp"
#include "liouville/normal_form.hpp"
#include "liouville/separatrix.hpp"

#include <boost/crc.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace liouville {

namespace {

using json = nlohmann::ordered_json;

json constants_json(const GoldenConstants& g) {
    return json{{"C_hat", g.C_hat},
                {"c_emp", g.c_emp},
                {"drift_bound", g.drift_bound},
                {"hessian_bound", g.hessian_bound},
                {"first_ratio_bound", g.first_ratio_bound},
                {"nf_drift_bound", g.nf_drift_bound}};
}

std::string crc_hex(const json& constants, const json& measured) {
    const std::string payload = constants.dump() + measured.dump();
    boost::crc_32_type crc;
    crc.process_bytes(payload.data(), payload.size());
    std::ostringstream os;
    os << std::hex << crc.checksum();
    return os.str();
}

[[noreturn]] void corrupt(const std::string& path, const std::string& what) {
    fail("GoldenCorrupt", path + ": " + what);
}

}  // namespace

std::string default_golden_path() {
    if (const char* env = std::getenv("LIOUVILLE_GOLDEN")) return env;
    return std::string(LIOUVILLE_GOLDEN_DIR) + "/v1/constants.json";
}

json golden_to_json(const GoldenConstants& g) {
    const json c = constants_json(g);
    const json m = g.measured.is_null() ? json::object() : g.measured;
    return json{{"version", 1},
                {"calibrated_on", "pendulum H = p^2 + cos q, eps = 1"},
                {"constants", c},
                {"measured", m},
                {"crc32", crc_hex(c, m)}};
}

void save_golden(const GoldenConstants& g, const std::string& path) { io::write_json_file(path, golden_to_json(g)); }

GoldenConstants load_golden(const std::string& path) {
    std::ifstream in(path);
    if (!in) corrupt(path, "missing");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        corrupt(path, e.what());
    }
    if (!j.is_object() || !j.contains("constants") || !j.contains("measured") || !j.contains("crc32"))
        corrupt(path, "missing fields");
    const auto& c = j["constants"];
    if (!j["crc32"].is_string() || crc_hex(c, j["measured"]) != j["crc32"].get<std::string>())
        corrupt(path, "checksum mismatch");
    GoldenConstants g;
    auto get = [&](const char* k, double& dst) {
        if (!c.contains(k) || !c[k].is_number()) corrupt(path, std::string("constant ") + k + " missing");
        dst = c[k].get<double>();
        if (!(dst > 0) || !std::isfinite(dst)) corrupt(path, std::string("constant ") + k + " not positive");
    };
    get("C_hat", g.C_hat);
    get("c_emp", g.c_emp);
    get("drift_bound", g.drift_bound);
    get("hessian_bound", g.hessian_bound);
    get("first_ratio_bound", g.first_ratio_bound);
    get("nf_drift_bound", g.nf_drift_bound);
    g.measured = j["measured"];
    return g;
}

GoldenConstants calibrate_golden(int threads) {
    (void)threads;
    GoldenConstants g;
    json m;
    ActionMapOptions o;
    o.energy_scale = 1.0;
    const auto H0 = pendulum(1.0);
    const ActionMap map(H0, {}, o);

    // lower bounds on the frequency scale
    double lib_min = INFINITY, rot_min = INFINITY;
    for (int j = 0; j < 200; ++j) {
        const double z = std::pow(2.0, -26.0 + 25.0 * j / 199.0);
        lib_min = std::min(lib_min, map.dIdE(1, map.near_plus(1, 2 - z)));
        lib_min = std::min(lib_min, map.dIdE(1, map.near_plus(1, z)));
        const double E = 1 + std::pow(10.0, -8 + 10.0 * j / 199.0);
        rot_min = std::min(rot_min, map.dIdE(2, E) * std::sqrt(E + 1));
    }
    m["min_dIdE_sqrt_eps_libration"] = lib_min;
    m["min_dIdE_sqrt_E_plus_eps_rotation"] = rot_min;
    g.c_emp = 0.5 * std::min(lib_min, rot_min);

    // separatrix rate: the Hessian asymptote eps / psi0^2 fixes the scale of C_hat
    const double psi0 = psi_zero_prediction(critical_rate(map, 0), 1.0);
    const double asymptote = 1.0 / (psi0 * psi0);
    m["hessian_asymptote"] = asymptote;
    g.C_hat = std::ceil(1.2 * asymptote);

    double hess = asymptote, first = 0;
    json hj = json::array();
    for (double lam : {1e-2, 1e-3, 1e-4}) {
        const auto w = analyticity_window(lam, 1.0, g.C_hat);
        for (int region : {1, 2}) {
            const auto hb = hessian_bounds(map, region, w);
            hess = std::max(hess, hb.max_second_scaled);
            first = std::max(first, hb.max_first_ratio);
            hj.push_back(json{{"lambda", lam}, {"region", region}, {"scaled", hb.max_second_scaled},
                              {"first_ratio", hb.max_first_ratio}});
        }
    }
    m["hessian"] = hj;
    g.hessian_bound = 1.2 * hess;
    g.first_ratio_bound = 1.2 * first;

    double drift = 0;
    json dj = json::array();
    for (double mu : {1e-5, 1e-4, 1e-3}) {
        const auto H1 = make_standard_form(PeriodicPotential::cosine(1.0), PeriodicPotential::cosine(mu));
        const ActionMap m1(H1, {}, o);
        const auto d = perturbation_drift(m1, map, mu, 0.1);
        drift = std::max(drift, d.scaled);
        dj.push_back(json{{"mu", mu}, {"scaled", d.scaled}});
    }
    m["drift"] = dj;
    g.drift_bound = 1.2 * drift;

    NormalFormOptions nfo;
    const auto nf0 = birkhoff_normalize(H0, 0, {}, nfo, 1.0).data;
    double nfd = 0;
    json nj = json::array();
    for (double mu : {1e-4, 1e-3}) {
        const auto H1 = make_standard_form(PeriodicPotential::cosine(1.0), PeriodicPotential::cosine(mu));
        const auto nf1 = birkhoff_normalize(H1, 0, {}, nfo, 1.0).data;
        double d = 0;
        for (std::size_t h = 0; h < nf0.R.size() && h < nf1.R.size(); ++h) d = std::max(d, std::abs(nf1.R[h] - nf0.R[h]));
        d = std::max(d, std::abs(nf1.g - nf0.g));
        nfd = std::max(nfd, d / mu);
        nj.push_back(json{{"mu", mu}, {"scaled", d / mu}});
    }
    m["nf_drift"] = nj;
    g.nf_drift_bound = 1.2 * nfd;

    g.measured = m;
    return g;
}

}  // namespace liouville
