#include "liouville/acceptance.hpp"

#include "liouville/convexity.hpp"
#include "liouville/errors.hpp"
#include "liouville/golden.hpp"
#include "liouville/normal_form.hpp"
#include "liouville/oracle.hpp"
#include "liouville/separatrix.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace liouville {

namespace {

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            if (!passed) detail << "; ";
            passed = false;
            detail << "FAILED " << what;
        }
    }
};

std::string sci(double x, int digits = 3) {
    std::ostringstream os;
    os.precision(digits);
    os << std::scientific << x;
    return os.str();
}

std::string fix(double x, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << std::fixed << x;
    return os.str();
}

ActionMap pendulum_map(double eps) {
    ActionMapOptions o;
    o.energy_scale = eps;
    return ActionMap(pendulum(eps), {}, o);
}

ActionMap two_well_map() { return ActionMap(make_standard_form(PeriodicPotential({0, 1, 0.3}, {0, 0}))); }

SingularRep fit(const ActionMap& m, int region, Branch b, const std::vector<double>& z, int degree = 6) {
    FitOptions fo;
    fo.degree = degree;
    return fit_singular_rep(singular_samples(m, region, b, z), fo);
}

// ---------------------------------------------------------------- criteria

void c1_oracle(Outcome& out, const AcceptanceOptions&) {
    const auto m = pendulum_map(1.0);
    double worst = 0;
    int n = 0;
    auto cmp = [&](int region, double E, oracle::PendulumRegion pr) {
        if (std::abs(E - 1) < 1e-8) return;
        const double a = m.action(region, E), b = oracle::pendulum_action(E, 1.0, pr);
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
        ++n;
    };
    for (int j = 0; j < 100; ++j) {
        // 80 uniform, 20 crowding the separatrix
        const double E = j < 80 ? -1 + 2 * (j + 0.5) / 80 : 1 - std::pow(10.0, -2 - 5.0 * (j - 80) / 19);
        cmp(1, E, oracle::PendulumRegion::libration);
    }
    for (int region : {0, 2})
        for (int j = 0; j < 100; ++j) cmp(region, 1 + std::pow(10.0, -7 + 9.0 * j / 99), oracle::PendulumRegion::rotation);
    out.check(worst <= 1e-8, "relative gap above 1e-8");
    out.detail << n << " energies, max relative gap " << sci(worst) << " (tol 1e-8)";
}

void c2_universal(Outcome& out, const AcceptanceOptions&) {
    const auto m = pendulum_map(1.0);
    const auto z = dyadic_grid(4, 26, 2);
    struct Case {
        int region;
        Branch b;
    };
    for (Case c : {Case{1, Branch::plus}, Case{2, Branch::minus}, Case{0, Branch::minus}}) {
        const auto r = fit(m, c.region, c.b, z);
        out.check(r.fit_residual <= 1e-8 && r.degree == 6,
                  "region " + std::to_string(c.region) + " " + branch_label(c.b));
        out.detail << "region " << c.region << " " << branch_label(c.b) << ": residual " << sci(r.fit_residual)
                   << " degree " << r.degree << "  ";
    }
    out.detail << "(tol 1e-8 sqrt(eps))";
}

void c3_psi_zero(Outcome& out, const AcceptanceOptions&) {
    const double target = 0.112540;
    for (double eps : {0.25, 1.0, 4.0}) {
        const auto m = pendulum_map(eps);
        const auto z = dyadic_grid(4, 26, 2);
        const double rot = std::abs(fit(m, 2, Branch::minus, z).psi0());
        const double lib = fit(m, 1, Branch::plus, z).psi0() / m.separatrix_passages(1, true).size();
        const double s = std::sqrt(eps);
        out.check(std::abs(rot / s - target) <= 0.01 * target, "rotation eps=" + fix(eps, 2));
        out.check(std::abs(lib / s - target) <= 0.01 * target, "libration eps=" + fix(eps, 2));
        out.detail << "eps " << eps << ": |psi-(0)|/sqrt(eps) " << fix(rot / s) << ", psi+(0)/(2 sqrt(eps)) "
                   << fix(lib / s) << "  ";
    }
    out.detail << "(target 0.112540 +-1%)";
}

void c4_minimum(Outcome& out, const AcceptanceOptions&) {
    struct Well {
        std::string name;
        ActionMap map;
        int region;
    };
    std::vector<Well> wells;
    wells.push_back({"pendulum", pendulum_map(1.0), 1});
    auto tw = two_well_map();
    wells.push_back({"two-well A", tw, 1});
    wells.push_back({"two-well B", tw, 3});
    for (auto& w : wells) {
        const double se = std::sqrt(w.map.energy_scale());
        const auto r = fit(w.map, w.region, Branch::minus, branch_grid(w.map, w.region));
        double sup = 0;
        for (double x : r.psi) sup = std::max(sup, std::abs(x));
        out.check(std::abs(r.psi0()) <= 1e-9 * se && std::abs(r.phi0()) <= 1e-9 * se, w.name);
        out.detail << w.name << ": |psi(0)| " << sci(std::abs(r.psi0())) << " |phi(0)| " << sci(std::abs(r.phi0()))
                   << " (sup psi coeff " << sci(sup) << ")  ";
    }
    out.detail << "(tol 1e-9 sqrt(eps))";
}

void c5_signs(Outcome& out, const AcceptanceOptions&) {
    struct Sys {
        std::string name;
        ActionMap map;
    };
    std::vector<Sys> systems{{"pendulum", pendulum_map(1.0)}, {"two-well", two_well_map()}};
    int checked = 0;
    for (auto& s : systems)
        for (int i = 0; i < s.map.n_regions(); ++i)
            for (Branch b : {Branch::plus, Branch::minus}) {
                const auto w = s.map.window(i);
                if (b == Branch::plus && w.plus_anchor < 0) continue;
                const int sg = expected_psi_sign(s.map, i, b);
                if (sg != 1 && sg != -1) continue;
                const auto r = fit(s.map, i, b, branch_grid(s.map, i));
                const bool ok = sg > 0 ? r.psi0() > 0 : r.psi0() < 0;
                out.check(ok, s.name + " region " + std::to_string(i) + " " + branch_label(b));
                out.detail << s.name << " r" << i << " " << branch_label(b) << " " << (sg > 0 ? "+" : "-") << " "
                           << sci(r.psi0()) << "  ";
                ++checked;
            }
    out.detail << "(" << checked << " admissible edges)";
}

void c6_bounds(Outcome& out, const AcceptanceOptions& opts) {
    const auto g = load_golden(opts.golden_path.empty() ? default_golden_path() : opts.golden_path);
    const auto m = pendulum_map(1.0);
    const auto z = dyadic_grid(4, 26, 2);
    BoundsOptions bo;
    bo.c_emp = g.c_emp;
    for (auto [region, b] : {std::pair{1, Branch::plus}, std::pair{2, Branch::minus}}) {
        const auto r = fit(m, region, b, z);
        const auto br = check_derivative_bounds(m, region, r, bo);
        out.check(br.ok(), "region " + std::to_string(region) + ": " + (br.ok() ? "" : br.failures.front()));
        out.detail << "region " << region << ": min scaled dIdE " << fix(br.min_scaled_derivative, 4) << " slope "
                   << fix(br.slope) << " vs " << fix(br.slope_expected) << "  ";
    }
    const double far = m.dIdE(2, 100.0) * std::sqrt(101.0);
    out.check(far >= 0.45 && far <= 0.55, "dIdE sqrt(E+eps) at E = 100 eps");
    out.detail << "dIdE sqrt(E+eps) at 100 eps " << fix(far) << " (c_emp " << fix(g.c_emp, 4) << ")";
}

void c7_drift(Outcome& out, const AcceptanceOptions& opts) {
    const auto g = load_golden(opts.golden_path.empty() ? default_golden_path() : opts.golden_path);
    const auto m0 = pendulum_map(1.0);
    ActionMapOptions o;
    o.energy_scale = 1.0;
    double lo = INFINITY, hi = 0;
    for (double mu : {1e-5, 1e-4, 1e-3}) {
        const ActionMap m1(make_standard_form(PeriodicPotential::cosine(1.0), PeriodicPotential::cosine(mu)), {}, o);
        const auto d = perturbation_drift(m1, m0, mu, 0.1);
        lo = std::min(lo, d.scaled);
        hi = std::max(hi, d.scaled);
        out.check(d.scaled <= g.drift_bound, "mu=" + sci(mu, 0));
        out.detail << "mu " << sci(mu, 0) << ": " << fix(d.scaled) << "  ";
    }
    out.check(hi / lo <= 1.2, "linearity");
    out.detail << "bound " << fix(g.drift_bound) << ", max/min " << fix(hi / lo);
}

void c8_normal_form(Outcome& out, const AcceptanceOptions&) {
    const auto q = birkhoff_normalize(quadratic_model(0.7, NFKind::hyperbolic, 6), 1.0);
    bool r_zero = true;
    for (double r : q.data.R) r_zero = r_zero && r == 0.0;
    const bool identity = q.transform.a1.is_zero(0) && q.transform.a2.is_zero(0);
    out.check(r_zero && identity, "quadratic saddle not left untouched");
    out.detail << "quadratic: R == 0 " << (r_zero ? "yes" : "no") << ", identity " << (identity ? "yes" : "no")
               << "  ";

    const auto H = pendulum(1.0);
    NormalFormOptions o;
    o.throw_on_residual = false;
    const auto base = birkhoff_normalize(H, 0, {}, o, 1.0).data;
    out.check(base.residual <= 1e-9, "pendulum residual");
    out.detail << "pendulum K=6 residual " << sci(base.residual) << " eps  ";
    double diff = 0;
    for (auto ord : {NFOrdering::ascending, NFOrdering::descending, NFOrdering::kernel_shift}) {
        o.ordering = ord;
        const auto d = birkhoff_normalize(H, 0, {}, o, 1.0).data;
        diff = std::max({diff, std::abs(d.E_c - base.E_c), std::abs(d.g - base.g)});
        for (std::size_t h = 0; h < base.R.size(); ++h) diff = std::max(diff, std::abs(d.R[h] - base.R[h]));
    }
    out.check(diff <= 1e-12, "ordering dependence");
    out.detail << "ordering spread " << sci(diff) << " (tol 1e-12)";
}

void c9_energy_time(Outcome& out, const AcceptanceOptions& opts) {
    double worst = 0;
    for (double eps : opts.quick ? std::vector<double>{1.0} : std::vector<double>{1.0, 0.25}) {
        NormalFormOptions o;
        const auto nf = birkhoff_normalize(pendulum(eps), 0, {}, o, eps).data;
        const auto Hn = normal_form_hamiltonian(nf);
        const double T = 0.5 / std::sqrt(eps);
        const int steps = 20000;
        for (double f : {0.999, 0.995, 0.99, 0.97, 0.95}) {
            const double E = f * eps;
            const auto p0 = energy_time_coords(nf, E, -T);
            const auto tr = oracle::symplectic_flow(Hn, {p0.y1, p0.x1}, 2 * T, 2 * T / steps, 100);
            for (std::size_t k = 0; k < tr.t.size(); ++k) {
                const auto p = energy_time_coords(nf, E, -T + tr.t[k]);
                worst = std::max({worst, std::abs(p.y1 - tr.p[k]), std::abs(p.x1 - tr.q[k])});
            }
        }
    }
    out.check(worst <= 1e-8, "closed form vs flow");
    out.detail << "5 energies below the top, |t| <= 0.5/sqrt(eps): max gap " << sci(worst) << " (tol 1e-8)";
}

void c10_convexity(Outcome& out, const AcceptanceOptions&) {
    const auto m = pendulum_map(1.0);
    std::vector<double> E1;
    for (int j = 0; j < 50; ++j) E1.push_back(1.1 + (100 - 1.1) * j / 49.0);
    const auto r1 = outer_convexity_check(m, 2, E1, false);
    out.check(r1.ok(), "pendulum rotation");

    const auto tw = two_well_map();
    const double top = tw.window(tw.n_regions() - 1).E_minus;
    std::vector<double> E2;
    for (int j = 0; j < 50; ++j) E2.push_back(top + 0.1 + (100 - 0.1 - top) * j / 49.0);
    const auto r2 = outer_convexity_check(tw, tw.n_regions() - 1, E2, false);
    out.check(r2.ok(), "two-well rotation");

    std::vector<double> E3;
    for (int j = 0; j < 50; ++j) E3.push_back(-1 + 2 * (j + 0.5) / 50);
    const auto r3 = inner_cosine_bound(PeriodicPotential::cosine(1.0), E3, false);
    out.check(r3.ok() && r3.max_d2EdI2 <= -0.25, "cosine well");

    const double lim = a0_ratio(-1 + 1e-6);
    out.check(std::abs(lim - 0.25) <= 0.0025, "a0_ratio limit");
    bool inc = true;
    double prev = -INFINITY;
    for (int j = 0; j < 20; ++j) {
        const double v = a0_ratio(-0.99 + 1.98 * j / 19.0);
        inc = inc && v > prev;
        prev = v;
    }
    out.check(inc, "a0_ratio monotone");
    out.detail << "min d2E/dI2 pendulum " << fix(r1.min_d2EdI2) << ", two-well " << fix(r2.min_d2EdI2)
               << "; cosine well max " << fix(r3.max_d2EdI2) << "; a0_ratio(-1+1e-6) " << fix(lim, 8)
               << ", increasing " << (inc ? "yes" : "no");
}

void c11_deficit(Outcome& out, const AcceptanceOptions&) {
    const auto H = pendulum(1.0);
    ActionMapOptions o;
    o.energy_scale = 1.0;
    double lo = INFINITY, hi = 0;
    for (int k = 1; k <= 6; ++k) {
        const double lam = std::pow(10.0, -k);
        const double r = measure_deficit(lam, H, o) / (lam * std::abs(std::log(lam)));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        out.detail << "1e-" << k << ": " << fix(r, 4) << "  ";
    }
    out.check(hi / lo <= 3, "band wider than a factor 3");
    out.detail << "band " << fix(hi / lo, 3) << " (max 3)";
}

void c12_radius(Outcome& out, const AcceptanceOptions& opts) {
    const auto g = load_golden(opts.golden_path.empty() ? default_golden_path() : opts.golden_path);
    const auto m = pendulum_map(1.0);
    const auto E = [&](double I) { return m.energy_of_action(1, I); };
    for (double lam : {1e-2, 1e-3, 1e-4}) {
        const auto w = analyticity_window(lam, 1.0, g.C_hat);
        const auto d = region_domains(lam, m)[1];
        const auto p = chebyshev_radius(E, 0.5 * (d.a_minus + d.a_plus), 0.25 * (d.a_plus - d.a_minus));
        out.check(p.radius >= w.rho, "lambda " + sci(lam, 0));
        out.detail << "lambda " << sci(lam, 0) << ": radius " << sci(p.radius) << " rho " << sci(w.rho) << "  ";
    }
    out.detail << "(C_hat " << g.C_hat << ")";
}

PeriodicPotential shifted_cosine(const std::function<double(double)>& b) {
    return PeriodicPotential::fit([&](double x) { return std::cos(x + b(x)); }, 16, 128);
}

void c13_phase_shift(Outcome& out, const AcceptanceOptions&) {
    PhaseShiftOptions po;
    po.enforce_hypothesis = false;
    const auto w = shifted_cosine([](double x) { return 0.01 * std::sin(x); });
    const auto ps = phase_shift_b(w, 1e-8, po);
    double gap = 0;
    for (int j = 0; j < 1000; ++j) {
        const double x = 2 * std::numbers::pi * j / 1000;
        gap = std::max(gap, std::abs(ps.b(x) - 0.01 * std::sin(x)));
    }
    out.check(gap <= 1e-8, "b(z) = 0.01 sin z not recovered");
    out.detail << "0.01 sin z recovered to " << sci(gap) << "; ";

    const std::vector<std::pair<std::string, std::function<double(double)>>> tests{
        {"1e-4 sin z", [](double x) { return 1e-4 * std::sin(x); }},
        {"5e-5 sin 2z", [](double x) { return 5e-5 * std::sin(2 * x); }},
        {"1e-4 cos z", [](double x) { return 1e-4 * std::cos(x); }}};
    for (auto& [name, b] : tests) {
        const auto r = phase_shift_b(shifted_cosine(b), 1e-8);
        const double bound = 9 * std::sqrt(r.g_hat0);
        out.check(r.hypothesis_met && r.sup_quarter <= bound, name);
        out.detail << name << ": |b|_1/4 " << sci(r.sup_quarter) << " <= " << sci(bound) << "  ";
    }
}

struct Entry {
    const char* name;
    void (*fn)(Outcome&, const AcceptanceOptions&);
};

const std::map<int, Entry>& registry() {
    static const std::map<int, Entry> r{
        {1, {"pendulum oracle equivalence", c1_oracle}},
        {2, {"universal singular representation", c2_universal}},
        {3, {"psi(0) = eps/(4 pi g) and sqrt(eps) scaling", c3_psi_zero}},
        {4, {"minimum-branch analyticity", c4_minimum}},
        {5, {"limiting sign table", c5_signs}},
        {6, {"derivative bounds", c6_bounds}},
        {7, {"perturbative drift", c7_drift}},
        {8, {"normal form", c8_normal_form}},
        {9, {"energy-time coordinates", c9_energy_time}},
        {10, {"convexity", c10_convexity}},
        {11, {"measure deficit", c11_deficit}},
        {12, {"analyticity-window probe", c12_radius}},
        {13, {"phase shift representation", c13_phase_shift}},
    };
    return r;
}

}  // namespace

std::vector<int> quick_subset() { return {1, 3, 5, 6, 8, 10, 13}; }

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
    const auto it = registry().find(id);
    if (it == registry().end()) throw ConfigError("InvalidArgument", "no criterion " + std::to_string(id));
    CriterionResult r;
    r.id = id;
    r.name = it->second.name;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        it->second.fn(out, opts);
        r.passed = out.passed;
        r.detail = out.detail.str();
    } catch (const Error& e) {
        r.passed = false;
        r.detail = e.what();
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("unexpected: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    std::vector<int> ids = opts.only;
    if (ids.empty()) {
        if (opts.quick) {
            ids = quick_subset();
        } else {
            for (auto& [id, e] : registry()) ids.push_back(id);
        }
    }
    std::vector<CriterionResult> out;
    for (int id : ids) out.push_back(run_criterion(id, opts));
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << (r.id < 10 ? " " : "") << "  " << r.name
       << " [" << fix(r.seconds, 2) << " s]: " << r.detail;
    return os.str();
}

}  // namespace liouville
