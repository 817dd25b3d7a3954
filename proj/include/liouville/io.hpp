#pragma once

#include "liouville/convexity.hpp"
#include "liouville/normal_form.hpp"
#include "liouville/separatrix.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace liouville::io {

using json = nlohmann::ordered_json;

json to_json(const PeriodicPotential& G);
PeriodicPotential potential_from_json(const json& j);

json to_json(const TaylorFourier& t);
TaylorFourier taylor_fourier_from_json(const json& j);

json to_json(const StandardCharacteristics& c);
StandardCharacteristics characteristics_from_json(const json& j);

json to_json(const StandardFormHamiltonian& H);
/// Requires the table-backed nu and G produced by this library.
StandardFormHamiltonian standard_form_from_json(const json& j);

json to_json(const MorseProfile& m);
std::string criticals_csv(const MorseProfile& m);

json to_json(const SingularRep& r);
SingularRep singular_rep_from_json(const json& j);
/// z,I,fitted,residual
std::string singular_fit_csv(const SingularSamples& s, const SingularRep& r);

json to_json(const NormalFormData& nf);

/// region,i,p_hat...,E,I,dIdE,T
std::string action_table_csv(const ActionTable& t);
/// E,I,dIdE,d2IdE2,d2EdI2,verdict
std::string convexity_csv(const ConvexityProfile& p);

/// 17 significant digits, shortest round trip.
std::string num(double x);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
/// Pretty JSON with a trailing newline.
void write_json_file(const std::string& path, const json& j);

struct EnergyGrid {
    double from = 0;
    double to = 0;
    int points = 0;
    std::vector<double> values;  ///< explicit list, used when non-empty
    std::vector<double> expand() const;
};

struct Tolerances {
    double quad = 1e-13;
    double fit = 1e-8;
    double normal_form = 1e-9;
};

struct RunConfig {
    PeriodicPotential potential;
    std::optional<double> eps;  ///< energy unit for z and for reporting; defaults to sup |G0| on the strip
    double mu = 0;
    PeriodicPotential nu_shape;  ///< nu = mu * nu_shape
    std::vector<std::vector<double>> p_hat_grid{{}};
    Tolerances tol;
    std::vector<double> lambda_grid;
    std::string output_dir = "out";
    unsigned seed = 0;
    int threads = 1;

    int region = -1;  ///< -1: all regions
    EnergyGrid energies;
    std::string branch = "plus";
    int fit_degree = 6;
    int critical = -1;  ///< normal-form critical index, -1: first maximum
    int nf_order = 6;
};

/// Throws ConfigError on schema or range violations. `lambda_cap` is 1/C_hat.
RunConfig parse_run_config(const json& j, double lambda_cap);
RunConfig load_run_config(const std::string& path, double lambda_cap);
json to_json(const RunConfig& c);

StandardFormHamiltonian build_hamiltonian(const RunConfig& c);
ActionMapOptions map_options(const RunConfig& c);

}  // namespace liouville::io
