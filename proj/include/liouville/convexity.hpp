#pragma once

#include "liouville/action_map.hpp"

#include <string>
#include <vector>

namespace liouville {

/// -I''/I'^3 at E using the map's own d2IdE2.
double d2E_dI2(const ActionMap& map, int region, double E);

/// Richardson extrapolation of central differences of dIdE over h, h/2, h/4.
double d2IdE2_richardson(const ActionMap& map, int region, double E, double h);

enum class Curvature { convex, concave, inflection };
std::string curvature_label(Curvature c);

struct ConvexitySample {
    double E = 0, I = 0, dIdE = 0, d2IdE2 = 0, d2EdI2 = 0;
    Curvature verdict = Curvature::convex;
};

struct ConvexityProfile {
    int region = 0;
    std::vector<ConvexitySample> samples;
    /// midpoints of neighbouring samples where the sign of d2EdI2 flips
    std::vector<double> inflections;
};

ConvexityProfile convexity_profile(const ActionMap& map, int region, const std::vector<double>& energies,
                                   int threads = 1);

/// `points` energies evenly spread across the open window, pulled in by `margin` energy units at each end.
std::vector<double> window_grid(const ActionMap& map, int region, int points, double margin);

struct OuterReport {
    int region = 0;
    double min_d2EdI2 = 0;
    double max_jensen_ratio = 0;  ///< sup (2I')^3 / (-4I''), at most 1
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// d2E/dI2 >= 2 and (2I')^3 <= -4I'' on a rotation region. Requires nu = 0.
OuterReport outer_convexity_check(const ActionMap& map, int region, const std::vector<double>& energies,
                                  bool throw_on_violation = true);

/// A0'(E), A0''(E) of the unit cosine well, -1 < E < 1.
double a0_first(double E);
double a0_second(double E);
/// A0''/A0'^3
double a0_ratio(double E);

struct InnerSample {
    double E = 0;        ///< energy of the original well
    double L = 0;        ///< rescaled energy
    double d2EdI2 = 0;
    double sandwich_lo = 0;  ///< min of I~'/A0' and I~''/A0''
    double sandwich_hi = 0;  ///< max of the same
    double bound = 0;    ///< -(4/27) a0_ratio(L) implied by the sandwich
};

struct InnerReport {
    double g_hat = 0;
    bool hypothesis_met = false;  ///< g_hat <= 2^-40
    bool exact_cosine = false;
    double max_d2EdI2 = 0;
    std::vector<InnerSample> samples;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// Concavity inside the single well of a cosine-like G0 for energies strictly between its critical values.
InnerReport inner_cosine_bound(const PeriodicPotential& G0, const std::vector<double>& energies,
                               bool throw_on_violation = true);

struct RescaledActionCheck {
    double direct = 0;
    double rescaled = 0;
    double rel_gap = 0;
};

/// I(E) of G against sqrt((M - m)/2) I~(L(E)) of the unit rescaling, both by quadrature.
RescaledActionCheck rescaled_action(const PeriodicPotential& G, int region, double E);

}  // namespace liouville
