#pragma once

#include <json.hpp>

#include <string>

namespace liouville {

struct GoldenConstants {
    double C_hat = 96;             ///< window constant; lambda <= 1/C_hat
    double c_emp = 0.25;           ///< lower bound for dIdE*sqrt(eps) inside, dIdE*sqrt(E+eps) outside
    double drift_bound = 0;        ///< bound on sup|dIdE - dIdE_ref| * lambda sqrt(eps) / mu
    double hessian_bound = 0;      ///< bound on sup|d2E/dI2| * lambda_hat
    double first_ratio_bound = 0;  ///< bound on sup|dE/dI| / sqrt(eps + |E|)
    double nf_drift_bound = 0;     ///< bound on max_h |R_h(mu) - R_h(0)| / mu
    nlohmann::ordered_json measured;
};

std::string default_golden_path();

/// Throws Error("GoldenCorrupt") on a checksum mismatch or missing field.
GoldenConstants load_golden(const std::string& path = default_golden_path());
nlohmann::ordered_json golden_to_json(const GoldenConstants& g);
void save_golden(const GoldenConstants& g, const std::string& path);

/// Measures the pendulum (eps = 1) and applies a 1.2 safety factor to every upper bound, 0.5 to lower ones.
GoldenConstants calibrate_golden(int threads = 1);

}  // namespace liouville
